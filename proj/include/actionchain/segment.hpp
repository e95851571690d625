#pragma once

#include <vector>

#include "actionchain/config.hpp"
#include "actionchain/types.hpp"

namespace actionchain {

// Frames where the series' tendency changes: local extrema (sign change
// of the first difference) and plateau edges (zero-derivative run
// boundaries, via the second difference). Frame 0 and the last frame are
// always included as virtual endpoints.
std::vector<int> find_turning_points(const std::vector<double>& series, double dt);

// Step 3: label each inter-turning-point segment I / D / S by the change
// dy = series[end-1] - series[start] against theta1 / theta2.
std::vector<TrendSegment> label_trends(const std::vector<double>& series,
                                       const std::vector<int>& turning_points,
                                       const SegmentationConfig& cfg);

// Step 4: an isolated short S segment (length < gamma, every neighbour
// longer than gamma) is absorbed into its right neighbour; left-to-right
// scan repeated to a fixpoint.
std::vector<TrendSegment> merge_short_stable(std::vector<TrendSegment> segments, int gamma);

// Step 5: relabel remaining S segments H or L by the segment mean
// against delta (strict > for H), then coalesce equal adjacent labels.
std::vector<TrendSegment> refine_stable(const std::vector<TrendSegment>& segments,
                                        const std::vector<double>& series, double delta);

// Steps 1-5 composed. The series is expected to be smoothed already.
TrendTimeline segment_variable(const std::vector<double>& series, double dt,
                               const SegmentationConfig& cfg, Variable variable);

}  // namespace actionchain
