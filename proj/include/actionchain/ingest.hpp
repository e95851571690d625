#pragma once

#include <string>
#include <vector>

#include "actionchain/config.hpp"
#include "actionchain/types.hpp"

namespace actionchain {

struct IngestSummary {
  std::size_t records_read = 0;
  std::size_t vehicles_seen = 0;
  std::size_t episodes_found = 0;
  std::size_t episodes_too_short = 0;
  std::size_t trajectories_emitted = 0;
};

// Parse a delimited NGSIM-style export. Records come back grouped and
// sorted by (vehicle_id, frame_id), unit-converted per cfg.
std::vector<RawRecord> load_records(const std::string& path, const IngestConfig& cfg);

// Split each follower's record stream into continuous single-leader
// episodes, join leader velocity by (preceding_id, frame_id) to get dv,
// and keep episodes of at least min_duration_s.
std::vector<Trajectory> build_trajectories(const std::vector<RawRecord>& records,
                                           const IngestConfig& cfg,
                                           IngestSummary* summary = nullptr);

// Centered moving average; window clamped at the boundaries so output
// length equals input length. window_frames must be odd and >= 1.
std::vector<double> smooth(const std::vector<double>& series, int window_frames);

}  // namespace actionchain
