#include "actionchain/phase.hpp"

#include <algorithm>

#include "actionchain/errors.hpp"

namespace actionchain {

namespace {

struct Interval {
  std::vector<Trend> trends;
  int start = 0;
  int end = 0;
};

// Union boundaries -> prevailing tuple per atomic interval -> drop
// intervals shorter than tau -> coalesce equal adjacent states.
std::vector<Interval> overlay(const std::vector<TrendTimeline>& timelines, int tau) {
  if (timelines.empty()) throw TimelineMismatch();
  int n = timelines.front().total_frames();
  for (const auto& tl : timelines) {
    if (tl.segments.empty() || tl.segments.front().start_frame != 0 ||
        tl.total_frames() != n)
      throw TimelineMismatch();
  }

  std::vector<int> boundaries;
  for (const auto& tl : timelines)
    for (const auto& seg : tl.segments) boundaries.push_back(seg.start_frame);
  boundaries.push_back(n);
  std::sort(boundaries.begin(), boundaries.end());
  boundaries.erase(std::unique(boundaries.begin(), boundaries.end()), boundaries.end());

  std::vector<std::size_t> cursor(timelines.size(), 0);
  std::vector<Interval> atomic;
  for (std::size_t b = 0; b + 1 < boundaries.size(); ++b) {
    Interval iv;
    iv.start = boundaries[b];
    iv.end = boundaries[b + 1];
    iv.trends.reserve(timelines.size());
    for (std::size_t m = 0; m < timelines.size(); ++m) {
      const auto& segs = timelines[m].segments;
      while (segs[cursor[m]].end_frame <= iv.start) ++cursor[m];
      iv.trends.push_back(segs[cursor[m]].trend);
    }
    atomic.push_back(std::move(iv));
  }

  std::vector<Interval> out;
  for (auto& iv : atomic) {
    if (iv.end - iv.start < tau) continue;
    if (!out.empty() && out.back().trends == iv.trends)
      out.back().end = iv.end;  // merges across a dropped gap as well
    else
      out.push_back(std::move(iv));
  }
  return out;
}

}  // namespace

std::vector<ActionPhase> extract_phases(const std::vector<TrendTimeline>& timelines,
                                        int tau, int eta) {
  if (timelines.size() != static_cast<std::size_t>(kNumVariables))
    throw TimelineMismatch();
  auto intervals = overlay(timelines, tau);
  std::vector<ActionPhase> phases;
  phases.reserve(intervals.size());
  for (const auto& iv : intervals) {
    ActionPhase p;
    for (int m = 0; m < kNumVariables; ++m)
      p.key.state.trends[static_cast<std::size_t>(m)] =
          iv.trends[static_cast<std::size_t>(m)];
    p.start_frame = iv.start;
    p.end_frame = iv.end;
    p.key.time = (p.duration_frames() >= eta) ? TimeLabel::Lg : TimeLabel::St;
    phases.push_back(p);
  }
  return phases;
}

PhaseLibrary build_library(const std::vector<std::vector<ActionPhase>>& per_driver_phases,
                           const std::string& flow_id) {
  PhaseLibrary lib;
  lib.flow_id = flow_id;
  for (const auto& phases : per_driver_phases) {
    for (const auto& p : phases) {
      ++lib.entries[p.key];
      ++lib.total;
    }
  }
  if (lib.total == 0) throw EmptyInput("no phases");
  return lib;
}

std::vector<std::pair<PhaseKey, std::int64_t>> top_k(const PhaseLibrary& library, int k) {
  std::vector<std::pair<PhaseKey, std::int64_t>> entries(library.entries.begin(),
                                                         library.entries.end());
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (k >= 0 && static_cast<std::size_t>(k) < entries.size())
    entries.resize(static_cast<std::size_t>(k));
  return entries;
}

}  // namespace actionchain
