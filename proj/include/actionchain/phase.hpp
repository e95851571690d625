#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "actionchain/types.hpp"

namespace actionchain {

struct PhaseLibrary {
  std::map<PhaseKey, std::int64_t> entries;
  std::int64_t total = 0;
  std::string flow_id;

  std::int64_t count(const PhaseKey& key) const {
    auto it = entries.find(key);
    return it == entries.end() ? 0 : it->second;
  }
};

// Overlay the m per-variable timelines: union of segment boundaries,
// prevailing trend tuple per atomic interval, intervals shorter than tau
// dropped, adjacent survivors with equal state coalesced, lg/st assigned
// against eta on the coalesced duration.
std::vector<ActionPhase> extract_phases(const std::vector<TrendTimeline>& timelines,
                                        int tau, int eta);

PhaseLibrary build_library(const std::vector<std::vector<ActionPhase>>& per_driver_phases,
                           const std::string& flow_id);

// Entries ordered by (count desc, key lexicographic); at most k.
std::vector<std::pair<PhaseKey, std::int64_t>> top_k(const PhaseLibrary& library, int k);

}  // namespace actionchain
