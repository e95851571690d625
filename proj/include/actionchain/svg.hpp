#pragma once

#include <string>
#include <vector>

#include "actionchain/hetero.hpp"
#include "actionchain/types.hpp"

namespace actionchain {

// Driving behaviour map: one horizontal band per variable in order
// (v, a, d, dv), base hue per variable, intensity per trend, time in
// seconds on the x axis. Writes an SVG document.
void render_map(const std::vector<TrendTimeline>& timelines, double dt,
                const std::string& out_path);

// DH histogram with a fitted-normal overlay and a mu + 3*sigma marker.
void render_histogram(const std::vector<DriverScore>& scores, const FlowStats& stats,
                      const std::string& out_path);

}  // namespace actionchain
