#include "actionchain/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "actionchain/errors.hpp"

namespace actionchain {

namespace {

constexpr double kFeetToMeters = 0.3048;

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string tok;
  std::istringstream ss(line);
  while (std::getline(ss, tok, ',')) {
    auto b = tok.find_first_not_of(" \t\r");
    auto e = tok.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : tok.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

std::vector<RawRecord> load_records(const std::string& path, const IngestConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string header_line;
  if (!std::getline(in, header_line)) throw EmptyFile(path);

  auto header = split_csv(header_line);
  std::map<std::string, int> col;  // canonical field -> column index
  for (const auto& [field, aliases] : cfg.column_aliases) {
    int idx = -1;
    for (std::size_t i = 0; i < header.size() && idx < 0; ++i) {
      std::string h = lower(header[i]);
      for (const auto& alias : aliases)
        if (h == alias) idx = static_cast<int>(i);
    }
    if (idx < 0) throw MissingColumn(field);
    col[field] = idx;
  }

  double scale = cfg.unit_conversion == UnitConversion::FeetToMeters ? kFeetToMeters : 1.0;
  std::vector<RawRecord> records;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto fields = split_csv(line);
    std::size_t needed = 0;
    for (auto& [_, idx] : col) needed = std::max(needed, static_cast<std::size_t>(idx) + 1);
    if (fields.size() < needed) throw MalformedRow(line_no);
    RawRecord r;
    try {
      r.vehicle_id = std::stoi(fields[static_cast<std::size_t>(col["vehicle_id"])]);
      r.frame_id = std::stoi(fields[static_cast<std::size_t>(col["frame_id"])]);
      r.velocity = std::stod(fields[static_cast<std::size_t>(col["velocity"])]) * scale;
      r.acceleration = std::stod(fields[static_cast<std::size_t>(col["acceleration"])]) * scale;
      r.space_headway = std::stod(fields[static_cast<std::size_t>(col["space_headway"])]) * scale;
      r.preceding_id = std::stoi(fields[static_cast<std::size_t>(col["preceding_id"])]);
    } catch (const std::exception&) {
      throw MalformedRow(line_no);
    }
    if (!std::isfinite(r.velocity) || !std::isfinite(r.acceleration) ||
        !std::isfinite(r.space_headway))
      throw MalformedRow(line_no);
    records.push_back(r);
  }
  if (records.empty()) throw EmptyFile(path);
  std::stable_sort(records.begin(), records.end(), [](const RawRecord& a, const RawRecord& b) {
    if (a.vehicle_id != b.vehicle_id) return a.vehicle_id < b.vehicle_id;
    return a.frame_id < b.frame_id;
  });
  return records;
}

std::vector<Trajectory> build_trajectories(const std::vector<RawRecord>& records,
                                           const IngestConfig& cfg, IngestSummary* summary) {
  IngestSummary local;
  local.records_read = records.size();

  // (vehicle, frame) -> velocity, for the leader join.
  std::unordered_map<std::int64_t, double> velocity_at;
  velocity_at.reserve(records.size());
  auto key_of = [](int vehicle, int frame) {
    return (static_cast<std::int64_t>(vehicle) << 32) | static_cast<std::uint32_t>(frame);
  };
  for (const auto& r : records) velocity_at[key_of(r.vehicle_id, r.frame_id)] = r.velocity;

  std::size_t min_frames =
      static_cast<std::size_t>(std::ceil(cfg.min_duration_s / cfg.dt_s - 1e-9));

  std::vector<Trajectory> out;
  std::size_t i = 0;
  while (i < records.size()) {
    std::size_t j = i;
    while (j < records.size() && records[j].vehicle_id == records[i].vehicle_id) ++j;
    ++local.vehicles_seen;

    // Episode boundaries: leader change, frame gap, no leader, or leader
    // record missing at that frame.
    std::size_t e = i;
    while (e < j) {
      const RawRecord& first = records[e];
      if (first.preceding_id == 0 ||
          velocity_at.find(key_of(first.preceding_id, first.frame_id)) == velocity_at.end()) {
        ++e;
        continue;
      }
      std::size_t f = e;
      while (f + 1 < j) {
        const RawRecord& next = records[f + 1];
        if (next.frame_id != records[f].frame_id + 1) break;
        if (next.preceding_id != first.preceding_id) break;
        if (velocity_at.find(key_of(next.preceding_id, next.frame_id)) == velocity_at.end())
          break;
        ++f;
      }
      std::size_t len = f - e + 1;
      ++local.episodes_found;
      if (len >= min_frames) {
        Trajectory traj;
        traj.driver_id = first.vehicle_id;
        traj.episode_start = first.frame_id;
        traj.dt = cfg.dt_s;
        traj.series.reserve(len);
        for (std::size_t k = e; k <= f; ++k) {
          const RawRecord& r = records[k];
          FrameSample s;
          s.v = r.velocity;
          s.a = r.acceleration;
          s.d = r.space_headway;
          s.dv = velocity_at.at(key_of(r.preceding_id, r.frame_id)) - r.velocity;
          traj.series.push_back(s);
        }
        out.push_back(std::move(traj));
        ++local.trajectories_emitted;
      } else {
        ++local.episodes_too_short;
      }
      e = f + 1;
    }
    i = j;
  }
  std::stable_sort(out.begin(), out.end(), [](const Trajectory& a, const Trajectory& b) {
    if (a.driver_id != b.driver_id) return a.driver_id < b.driver_id;
    return a.episode_start < b.episode_start;
  });
  if (summary) *summary = local;
  return out;
}

std::vector<double> smooth(const std::vector<double>& series, int window_frames) {
  if (window_frames < 1) throw WindowNonPositive();
  if (window_frames % 2 == 0) throw WindowEven();
  if (window_frames == 1) return series;
  int n = static_cast<int>(series.size());
  int half = window_frames / 2;
  std::vector<double> out(series.size());
  for (int t = 0; t < n; ++t) {
    int lo = std::max(0, t - half);
    int hi = std::min(n - 1, t + half);
    double sum = 0.0;
    for (int k = lo; k <= hi; ++k) sum += series[static_cast<std::size_t>(k)];
    out[static_cast<std::size_t>(t)] = sum / static_cast<double>(hi - lo + 1);
  }
  return out;
}

}  // namespace actionchain
