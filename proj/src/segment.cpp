#include "actionchain/segment.hpp"

#include <algorithm>
#include <cmath>

#include "actionchain/errors.hpp"

namespace actionchain {

namespace {

constexpr double kDerivativeEps = 1e-12;

int sign_class(double diff) {
  if (diff > kDerivativeEps) return 1;
  if (diff < -kDerivativeEps) return -1;
  return 0;
}

}  // namespace

std::vector<int> find_turning_points(const std::vector<double>& series, double /*dt*/) {
  int n = static_cast<int>(series.size());
  if (n < 3) throw SeriesTooShort();

  std::vector<int> points;
  points.push_back(0);
  // Boundaries between runs of equal first-difference sign. A sign change
  // marks an extremum; a transition to or from a zero run marks a plateau
  // edge (where the second difference is nonzero).
  int prev = sign_class(series[1] - series[0]);
  for (int i = 1; i < n - 1; ++i) {
    int cur = sign_class(series[static_cast<std::size_t>(i) + 1] -
                         series[static_cast<std::size_t>(i)]);
    if (cur != prev) points.push_back(i);
    prev = cur;
  }
  if (points.back() != n - 1) points.push_back(n - 1);
  return points;
}

std::vector<TrendSegment> label_trends(const std::vector<double>& series,
                                       const std::vector<int>& turning_points,
                                       const SegmentationConfig& cfg) {
  int n = static_cast<int>(series.size());
  std::vector<TrendSegment> segments;
  for (std::size_t i = 0; i + 1 < turning_points.size(); ++i) {
    TrendSegment seg;
    seg.start_frame = turning_points[i];
    // The last turning point is the final frame; the closing segment
    // extends past it so segments tile [0, n).
    seg.end_frame = (i + 2 == turning_points.size()) ? n : turning_points[i + 1];
    double dy = series[static_cast<std::size_t>(seg.end_frame) - 1] -
                series[static_cast<std::size_t>(seg.start_frame)];
    if (dy > cfg.theta1)
      seg.trend = Trend::I;
    else if (dy < cfg.theta2)
      seg.trend = Trend::D;
    else
      seg.trend = Trend::S;
    segments.push_back(seg);
  }
  return segments;
}

std::vector<TrendSegment> merge_short_stable(std::vector<TrendSegment> segments, int gamma) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < segments.size(); ++i) {
      if (segments[i].trend != Trend::S) continue;
      if (segments[i].length() >= gamma) continue;
      bool has_left = i > 0;
      bool has_right = i + 1 < segments.size();
      if (!has_left && !has_right) continue;
      if (has_left && segments[i - 1].length() <= gamma) continue;
      if (has_right && segments[i + 1].length() <= gamma) continue;
      if (has_right) {
        segments[i + 1].start_frame = segments[i].start_frame;
        segments.erase(segments.begin() + static_cast<std::ptrdiff_t>(i));
      } else {
        segments[i - 1].end_frame = segments[i].end_frame;
        segments.erase(segments.begin() + static_cast<std::ptrdiff_t>(i));
      }
      changed = true;
      break;  // restart the left-to-right scan on the updated list
    }
  }
  return segments;
}

std::vector<TrendSegment> refine_stable(const std::vector<TrendSegment>& segments,
                                        const std::vector<double>& series, double delta) {
  std::vector<TrendSegment> out;
  out.reserve(segments.size());
  for (TrendSegment seg : segments) {
    if (seg.trend == Trend::S) {
      double sum = 0.0;
      for (int t = seg.start_frame; t < seg.end_frame; ++t)
        sum += series[static_cast<std::size_t>(t)];
      double mean = sum / static_cast<double>(seg.length());
      seg.trend = mean > delta ? Trend::H : Trend::L;
    }
    if (!out.empty() && out.back().trend == seg.trend)
      out.back().end_frame = seg.end_frame;
    else
      out.push_back(seg);
  }
  return out;
}

TrendTimeline segment_variable(const std::vector<double>& series, double dt,
                               const SegmentationConfig& cfg, Variable variable) {
  auto points = find_turning_points(series, dt);
  auto labeled = label_trends(series, points, cfg);
  auto merged = merge_short_stable(std::move(labeled), cfg.gamma);
  TrendTimeline timeline;
  timeline.variable = variable;
  timeline.segments = refine_stable(merged, series, cfg.delta);
  return timeline;
}

}  // namespace actionchain
