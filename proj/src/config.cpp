#include "actionchain/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "actionchain/errors.hpp"

namespace actionchain {

namespace {

std::string strip(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

}  // namespace

KeyValueFile KeyValueFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str());
}

KeyValueFile KeyValueFile::parse_text(const std::string& text) {
  KeyValueFile kv;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = strip(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    std::string key = strip(line.substr(0, eq));
    std::string value = strip(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    kv.entries_[key] = value;
  }
  return kv;
}

bool KeyValueFile::has(const std::string& key) const {
  return entries_.count(key) > 0;
}

std::string KeyValueFile::get(const std::string& key, const std::string& fallback) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second;
}

double KeyValueFile::get_double(const std::string& key, double fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  try {
    return std::stod(it->second);
  } catch (const std::exception&) {
    throw ConfigError("key " + key + ": not a number: " + it->second);
  }
}

int KeyValueFile::get_int(const std::string& key, int fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  try {
    return std::stoi(it->second);
  } catch (const std::exception&) {
    throw ConfigError("key " + key + ": not an integer: " + it->second);
  }
}

void KeyValueFile::set(const std::string& key, const std::string& value) {
  entries_[key] = value;
}

int IngestConfig::smoothing_window_frames() const {
  if (smoothing_window_s <= 0.0) return 1;
  int w = static_cast<int>(std::lround(smoothing_window_s / dt_s));
  if (w < 1) w = 1;
  if (w % 2 == 0) ++w;  // centered window must be odd
  return w;
}

void IngestConfig::validate() const {
  if (min_duration_s <= 0) throw ConfigError("ingest.min_duration_s must be > 0");
  if (dt_s <= 0) throw ConfigError("ingest.dt_s must be > 0");
  if (smoothing_window_s < 0) throw ConfigError("ingest.smoothing_window_s must be >= 0");
}

void SegmentationConfig::validate() const {
  if (!(theta2 < 0.0 && 0.0 < theta1))
    throw ConfigError("segmentation requires theta2 < 0 < theta1");
  if (gamma < 1) throw ConfigError("segmentation gamma must be >= 1");
}

PipelineConfig PipelineConfig::defaults() {
  PipelineConfig cfg;
  cfg.segment[0] = {2.0, -2.0, 20.0, 30};    // v
  cfg.segment[1] = {0.25, -0.25, 0.25, 30};  // a
  cfg.segment[2] = {1.0, -1.0, 1.0, 30};     // d
  cfg.segment[3] = {2.0, -2.0, 2.0, 30};     // dv
  return cfg;
}

PipelineConfig PipelineConfig::from_kv(const KeyValueFile& kv) {
  PipelineConfig cfg = defaults();
  cfg.ingest.min_duration_s = kv.get_double("ingest.min_duration_s", cfg.ingest.min_duration_s);
  cfg.ingest.dt_s = kv.get_double("ingest.dt_s", cfg.ingest.dt_s);
  cfg.ingest.smoothing_window_s =
      kv.get_double("ingest.smoothing_window_s", cfg.ingest.smoothing_window_s);
  std::string conv = kv.get("ingest.unit_conversion", "none");
  if (conv == "none")
    cfg.ingest.unit_conversion = UnitConversion::None;
  else if (conv == "feet_to_meters")
    cfg.ingest.unit_conversion = UnitConversion::FeetToMeters;
  else
    throw ConfigError("ingest.unit_conversion: unknown value " + conv);
  for (auto& [field, aliases] : cfg.ingest.column_aliases) {
    std::string key = "ingest.column." + field;
    if (kv.has(key)) {
      aliases.clear();
      std::istringstream ss(kv.get(key, ""));
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        auto t = strip(tok);
        for (auto& c : t) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (!t.empty()) aliases.push_back(t);
      }
      if (aliases.empty()) throw ConfigError(key + ": no aliases given");
    }
  }
  for (Variable v : kVariableOrder) {
    auto& sc = cfg.segment[static_cast<std::size_t>(v)];
    std::string p = "segment." + variable_name(v) + ".";
    sc.theta1 = kv.get_double(p + "theta1", sc.theta1);
    sc.theta2 = kv.get_double(p + "theta2", sc.theta2);
    sc.delta = kv.get_double(p + "delta", sc.delta);
    sc.gamma = kv.get_int(p + "gamma", sc.gamma);
  }
  cfg.tau = kv.get_int("phase.tau", cfg.tau);
  cfg.eta = kv.get_int("phase.eta", cfg.eta);
  cfg.flow_id = kv.get("flow_id", cfg.flow_id);
  cfg.validate();
  return cfg;
}

PipelineConfig PipelineConfig::load(const std::string& path) {
  return from_kv(KeyValueFile::parse_file(path));
}

KeyValueFile PipelineConfig::to_kv() const {
  KeyValueFile kv;
  auto num = [](double x) {
    std::ostringstream ss;
    ss << x;
    return ss.str();
  };
  kv.set("flow_id", flow_id);
  kv.set("ingest.min_duration_s", num(ingest.min_duration_s));
  kv.set("ingest.dt_s", num(ingest.dt_s));
  kv.set("ingest.smoothing_window_s", num(ingest.smoothing_window_s));
  kv.set("ingest.unit_conversion",
         ingest.unit_conversion == UnitConversion::None ? "none" : "feet_to_meters");
  for (const auto& [field, aliases] : ingest.column_aliases) {
    std::string joined;
    for (const auto& a : aliases) {
      if (!joined.empty()) joined += ",";
      joined += a;
    }
    kv.set("ingest.column." + field, joined);
  }
  for (Variable v : kVariableOrder) {
    const auto& sc = segment_for(v);
    std::string p = "segment." + variable_name(v) + ".";
    kv.set(p + "theta1", num(sc.theta1));
    kv.set(p + "theta2", num(sc.theta2));
    kv.set(p + "delta", num(sc.delta));
    kv.set(p + "gamma", std::to_string(sc.gamma));
  }
  kv.set("phase.tau", std::to_string(tau));
  kv.set("phase.eta", std::to_string(eta));
  return kv;
}

void PipelineConfig::validate() const {
  ingest.validate();
  for (const auto& sc : segment) sc.validate();
  if (tau < 1) throw ConfigError("phase.tau must be >= 1");
  if (eta < 1) throw ConfigError("phase.eta must be >= 1");
}

}  // namespace actionchain
