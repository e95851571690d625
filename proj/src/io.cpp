#include "actionchain/io.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "actionchain/errors.hpp"

namespace fs = std::filesystem;

namespace actionchain {

namespace {

std::string fmt6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", x);
  return buf;
}

std::string fmt_prob(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return in;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string tok;
  std::istringstream ss(line);
  while (std::getline(ss, tok, sep)) out.push_back(tok);
  return out;
}

// Splits "phase_key,rest" where the key is a balanced-paren expression.
std::pair<std::string, std::string> split_after_key(const std::string& line) {
  int depth = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '(') ++depth;
    if (line[i] == ')') {
      --depth;
      if (depth == 0) {
        auto comma = line.find(',', i + 1);
        if (comma == std::string::npos) return {line.substr(0, i + 1), ""};
        return {line.substr(0, i + 1), line.substr(comma + 1)};
      }
    }
  }
  throw IoError("unbalanced phase key in line: " + line);
}

}  // namespace

void write_trajectories(const std::string& path, const std::vector<Trajectory>& trajectories) {
  auto out = open_out(path);
  for (const auto& traj : trajectories) {
    out << traj.driver_id << ',' << traj.episode_start << ',' << fmt6(traj.dt) << ','
        << traj.series.size() << '\n';
    for (std::size_t t = 0; t < traj.series.size(); ++t) {
      const auto& s = traj.series[t];
      out << fmt6(static_cast<double>(t) * traj.dt) << ',' << fmt6(s.v) << ',' << fmt6(s.a)
          << ',' << fmt6(s.d) << ',' << fmt6(s.dv) << '\n';
    }
  }
}

std::vector<Trajectory> read_trajectories(const std::string& path) {
  auto in = open_in(path);
  std::vector<Trajectory> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto header = split(line, ',');
    if (header.size() != 4) throw IoError("bad trajectory header: " + line);
    Trajectory traj;
    traj.driver_id = std::stoi(header[0]);
    traj.episode_start = std::stoi(header[1]);
    traj.dt = std::stod(header[2]);
    std::size_t length = std::stoul(header[3]);
    traj.series.reserve(length);
    for (std::size_t i = 0; i < length; ++i) {
      if (!std::getline(in, line)) throw IoError("truncated trajectory block in " + path);
      auto fields = split(line, ',');
      if (fields.size() != 5) throw IoError("bad trajectory row: " + line);
      FrameSample s;
      s.v = std::stod(fields[1]);
      s.a = std::stod(fields[2]);
      s.d = std::stod(fields[3]);
      s.dv = std::stod(fields[4]);
      traj.series.push_back(s);
    }
    out.push_back(std::move(traj));
  }
  return out;
}

void write_timelines(const std::string& path, const std::vector<TrendTimeline>& timelines) {
  auto out = open_out(path);
  for (const auto& tl : timelines)
    for (const auto& seg : tl.segments)
      out << variable_name(tl.variable) << ',' << seg.start_frame << ',' << seg.end_frame
          << ',' << trend_char(seg.trend) << '\n';
}

std::vector<TrendTimeline> read_timelines(const std::string& path) {
  auto in = open_in(path);
  std::vector<TrendTimeline> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split(line, ',');
    if (fields.size() != 4) throw IoError("bad timeline row: " + line);
    Variable var = variable_from_name(fields[0]);
    if (out.empty() || out.back().variable != var) {
      TrendTimeline tl;
      tl.variable = var;
      out.push_back(tl);
    }
    TrendSegment seg;
    seg.start_frame = std::stoi(fields[1]);
    seg.end_frame = std::stoi(fields[2]);
    seg.trend = trend_from_char(fields[3].at(0));
    out.back().segments.push_back(seg);
  }
  return out;
}

void write_phases(const std::string& path, const std::vector<ActionPhase>& phases) {
  auto out = open_out(path);
  for (const auto& p : phases) {
    out << p.start_frame << ',' << p.end_frame;
    for (int m = 0; m < kNumVariables; ++m)
      out << ',' << trend_char(p.key.state.trends[static_cast<std::size_t>(m)]);
    out << ',' << to_string(p.key.time) << '\n';
  }
}

std::vector<ActionPhase> read_phases(const std::string& path) {
  auto in = open_in(path);
  std::vector<ActionPhase> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split(line, ',');
    if (fields.size() != 3 + kNumVariables) throw IoError("bad phase row: " + line);
    ActionPhase p;
    p.start_frame = std::stoi(fields[0]);
    p.end_frame = std::stoi(fields[1]);
    for (int m = 0; m < kNumVariables; ++m)
      p.key.state.trends[static_cast<std::size_t>(m)] =
          trend_from_char(fields[static_cast<std::size_t>(2 + m)].at(0));
    p.key.time = fields.back() == "lg" ? TimeLabel::Lg : TimeLabel::St;
    out.push_back(p);
  }
  return out;
}

void write_library(const std::string& path, const PhaseLibrary& library) {
  auto out = open_out(path);
  out << "# flow_id=" << library.flow_id << '\n';
  for (const auto& [key, count] : top_k(library, -1))
    out << to_string(key) << ',' << count << '\n';
}

PhaseLibrary read_library(const std::string& path) {
  auto in = open_in(path);
  PhaseLibrary lib;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("# flow_id=", 0) == 0) {
      lib.flow_id = line.substr(10);
      continue;
    }
    auto [key_text, rest] = split_after_key(line);
    std::int64_t count = std::stoll(rest);
    lib.entries[phase_key_from_string(key_text)] = count;
    lib.total += count;
  }
  if (lib.entries.empty()) throw IoError("empty library file: " + path);
  return lib;
}

void write_matrix(const std::string& path, const Matrix& matrix,
                  const std::vector<std::string>& labels) {
  auto out = open_out(path);
  out << "label";
  for (const auto& l : labels) out << ',' << l;
  out << '\n';
  for (std::size_t r = 0; r < matrix.size(); ++r) {
    out << labels[r];
    for (double p : matrix[r]) out << ',' << fmt_prob(p);
    out << '\n';
  }
}

Matrix read_matrix(const std::string& path, std::vector<std::string>* labels) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty matrix file: " + path);
  auto header = split(line, ',');
  std::size_t n = header.size() - 1;
  if (labels) labels->assign(header.begin() + 1, header.end());
  Matrix matrix;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split(line, ',');
    if (fields.size() != n + 1) throw IoError("bad matrix row: " + line);
    std::vector<double> row;
    for (std::size_t i = 1; i < fields.size(); ++i) row.push_back(std::stod(fields[i]));
    matrix.push_back(std::move(row));
  }
  if (matrix.size() != n) throw IoError("matrix not square in " + path);
  return matrix;
}

void write_chains(const std::string& path, const ActionChainTable& table) {
  auto out = open_out(path);
  for (const auto& [from, entry] : table.entries)
    out << to_string(from) << ',' << to_string(entry.successor) << ','
        << fmt_prob(entry.jtp) << '\n';
}

ActionChainTable read_chains(const std::string& path) {
  auto in = open_in(path);
  ActionChainTable table;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto [from_text, rest] = split_after_key(line);
    auto [to_text, jtp_text] = split_after_key(rest);
    ChainEntry entry;
    entry.successor = phase_key_from_string(to_text);
    entry.jtp = std::stod(jtp_text);
    table.entries[phase_key_from_string(from_text)] = entry;
  }
  return table;
}

std::string state_token(const PhaseState& s) {
  std::string out;
  for (Trend t : s.trends) out += trend_char(t);
  return out;
}

PhaseState state_from_token(const std::string& token) {
  if (token.size() != kNumVariables) throw IoError("bad state token: " + token);
  PhaseState s;
  for (int i = 0; i < kNumVariables; ++i)
    s.trends[static_cast<std::size_t>(i)] = trend_from_char(token[static_cast<std::size_t>(i)]);
  return s;
}

std::string episode_file_name(const std::string& stem, const EpisodeRef& ref) {
  return stem + "_" + std::to_string(ref.driver_id) + "_" +
         std::to_string(ref.episode_start) + ".csv";
}

std::vector<std::pair<EpisodeRef, std::string>> list_episode_files(
    const std::string& dir, const std::string& stem) {
  std::vector<std::pair<EpisodeRef, std::string>> out;
  std::string prefix = stem + "_";
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string name = entry.path().filename().string();
    if (name.rfind(prefix, 0) != 0 || entry.path().extension() != ".csv") continue;
    std::string core = name.substr(prefix.size(), name.size() - prefix.size() - 4);
    auto sep = core.find('_');
    if (sep == std::string::npos) continue;
    EpisodeRef ref;
    try {
      ref.driver_id = std::stoi(core.substr(0, sep));
      ref.episode_start = std::stoi(core.substr(sep + 1));
    } catch (const std::exception&) {
      continue;
    }
    out.emplace_back(ref, entry.path().string());
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.first.driver_id != b.first.driver_id) return a.first.driver_id < b.first.driver_id;
    return a.first.episode_start < b.first.episode_start;
  });
  return out;
}

}  // namespace actionchain
