#include "actionchain/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "actionchain/errors.hpp"

namespace actionchain {

namespace {

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", x);
  return buf;
}

int variable_hue(Variable v) {
  switch (v) {
    case Variable::V: return 210;   // blue
    case Variable::A: return 20;    // orange
    case Variable::D: return 130;   // green
    case Variable::Dv: return 280;  // purple
  }
  return 0;
}

int trend_lightness(Trend t) {
  switch (t) {
    case Trend::I: return 30;
    case Trend::H: return 50;
    case Trend::L: return 70;
    case Trend::D: return 86;
    case Trend::S: return 95;
  }
  return 95;
}

std::string fill(Variable v, Trend t) {
  return "hsl(" + std::to_string(variable_hue(v)) + ",70%," +
         std::to_string(trend_lightness(t)) + "%)";
}

}  // namespace

void render_map(const std::vector<TrendTimeline>& timelines, double dt,
                const std::string& out_path) {
  for (const auto& tl : timelines)
    if (tl.segments.empty()) throw EmptyTimeline();
  if (timelines.empty()) throw EmptyTimeline();

  const double margin_left = 70, margin_top = 30, band_h = 40, band_gap = 12;
  const double plot_w = 760;
  int total_frames = timelines.front().total_frames();
  double total_s = total_frames * dt;
  double height = margin_top + timelines.size() * (band_h + band_gap) + 90;
  double width = margin_left + plot_w + 40;

  std::ofstream out(out_path);
  if (!out) throw IoError("cannot write " + out_path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width)
      << "\" height=\"" << num(height) << "\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << num(width) << "\" height=\"" << num(height)
      << "\" fill=\"white\"/>\n";

  double x_scale = plot_w / static_cast<double>(total_frames);
  for (std::size_t m = 0; m < timelines.size(); ++m) {
    const auto& tl = timelines[m];
    double y = margin_top + static_cast<double>(m) * (band_h + band_gap);
    out << "<text x=\"" << num(margin_left - 10) << "\" y=\"" << num(y + band_h / 2 + 4)
        << "\" text-anchor=\"end\" font-size=\"14\">" << variable_name(tl.variable)
        << "</text>\n";
    for (const auto& seg : tl.segments) {
      double x = margin_left + seg.start_frame * x_scale;
      double w = seg.length() * x_scale;
      out << "<rect class=\"band " << variable_name(tl.variable) << "-"
          << trend_char(seg.trend) << "\" x=\"" << num(x) << "\" y=\"" << num(y)
          << "\" width=\"" << num(w) << "\" height=\"" << num(band_h) << "\" fill=\""
          << fill(tl.variable, seg.trend) << "\"/>\n";
    }
  }

  // x axis in seconds
  double axis_y = margin_top + timelines.size() * (band_h + band_gap) + 5;
  out << "<line x1=\"" << num(margin_left) << "\" y1=\"" << num(axis_y) << "\" x2=\""
      << num(margin_left + plot_w) << "\" y2=\"" << num(axis_y)
      << "\" stroke=\"black\"/>\n";
  double tick_s = std::max(1.0, std::pow(10.0, std::floor(std::log10(total_s))) / 2.0);
  for (double s = 0.0; s <= total_s + 1e-9; s += tick_s) {
    double x = margin_left + (s / dt) * x_scale;
    out << "<line x1=\"" << num(x) << "\" y1=\"" << num(axis_y) << "\" x2=\"" << num(x)
        << "\" y2=\"" << num(axis_y + 5) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << num(x) << "\" y=\"" << num(axis_y + 18)
        << "\" text-anchor=\"middle\" font-size=\"11\">" << num(s) << "</text>\n";
  }
  out << "<text x=\"" << num(margin_left + plot_w / 2) << "\" y=\"" << num(axis_y + 36)
      << "\" text-anchor=\"middle\" font-size=\"12\">time (s)</text>\n";

  // legend: trend intensities on the first variable's hue
  double ly = axis_y + 50;
  double lx = margin_left;
  for (Trend t : {Trend::I, Trend::H, Trend::L, Trend::D}) {
    out << "<rect class=\"legend\" x=\"" << num(lx) << "\" y=\"" << num(ly)
        << "\" width=\"16\" height=\"16\" fill=\"" << fill(timelines.front().variable, t)
        << "\"/>\n";
    out << "<text x=\"" << num(lx + 22) << "\" y=\"" << num(ly + 13)
        << "\" font-size=\"12\">" << trend_char(t) << "</text>\n";
    lx += 70;
  }
  out << "</svg>\n";
}

void render_histogram(const std::vector<DriverScore>& scores, const FlowStats& stats,
                      const std::string& out_path) {
  if (scores.size() < 2) throw TooFewScores();

  double lo = scores.front().dh, hi = scores.front().dh;
  for (const auto& s : scores) {
    lo = std::min(lo, s.dh);
    hi = std::max(hi, s.dh);
  }
  double marker = stats.mu + 3.0 * stats.sigma;
  hi = std::max(hi, marker);
  if (hi - lo < 1e-12) hi = lo + 1e-3;  // degenerate distribution: single bar

  const int bins = 20;
  std::vector<int> counts(bins, 0);
  double bin_w = (hi - lo) / bins;
  for (const auto& s : scores) {
    int b = std::min(bins - 1, static_cast<int>((s.dh - lo) / bin_w));
    ++counts[static_cast<std::size_t>(std::max(0, b))];
  }
  int max_count = *std::max_element(counts.begin(), counts.end());

  const double margin_left = 60, margin_top = 20, plot_w = 640, plot_h = 320;
  double width = margin_left + plot_w + 30, height = margin_top + plot_h + 70;

  std::ofstream out(out_path);
  if (!out) throw IoError("cannot write " + out_path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width)
      << "\" height=\"" << num(height) << "\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << num(width) << "\" height=\"" << num(height)
      << "\" fill=\"white\"/>\n";

  auto x_of = [&](double dh) { return margin_left + (dh - lo) / (hi - lo) * plot_w; };
  for (int b = 0; b < bins; ++b) {
    if (counts[static_cast<std::size_t>(b)] == 0) continue;
    double h = plot_h * counts[static_cast<std::size_t>(b)] / max_count;
    out << "<rect class=\"bar\" x=\"" << num(x_of(lo + b * bin_w)) << "\" y=\""
        << num(margin_top + plot_h - h) << "\" width=\"" << num(plot_w / bins - 1)
        << "\" height=\"" << num(h) << "\" fill=\"hsl(210,60%,60%)\"/>\n";
  }

  // fitted normal overlay, scaled to the tallest bar
  if (stats.sigma > 0.0) {
    double peak = 1.0 / (stats.sigma * std::sqrt(2.0 * M_PI));
    out << "<polyline class=\"normal\" fill=\"none\" stroke=\"hsl(20,80%,45%)\" "
           "stroke-width=\"2\" points=\"";
    for (int i = 0; i <= 200; ++i) {
      double dh = lo + (hi - lo) * i / 200.0;
      double z = (dh - stats.mu) / stats.sigma;
      double density = std::exp(-0.5 * z * z) / (stats.sigma * std::sqrt(2.0 * M_PI));
      double y = margin_top + plot_h - plot_h * density / peak;
      out << num(x_of(dh)) << ',' << num(y) << ' ';
    }
    out << "\"/>\n";
  }

  double mx = x_of(marker);
  out << "<line class=\"threshold\" x1=\"" << num(mx) << "\" y1=\"" << num(margin_top)
      << "\" x2=\"" << num(mx) << "\" y2=\"" << num(margin_top + plot_h)
      << "\" stroke=\"red\" stroke-dasharray=\"5,3\"/>\n";
  out << "<text x=\"" << num(mx) << "\" y=\"" << num(margin_top - 4)
      << "\" text-anchor=\"middle\" font-size=\"11\" fill=\"red\">&#956;+3&#963;</text>\n";

  out << "<line x1=\"" << num(margin_left) << "\" y1=\"" << num(margin_top + plot_h)
      << "\" x2=\"" << num(margin_left + plot_w) << "\" y2=\"" << num(margin_top + plot_h)
      << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << num(margin_left + plot_w / 2) << "\" y=\""
      << num(margin_top + plot_h + 35)
      << "\" text-anchor=\"middle\" font-size=\"12\">DH</text>\n";
  out << "<text x=\"" << num(margin_left - 40) << "\" y=\"" << num(margin_top + plot_h / 2)
      << "\" font-size=\"12\" transform=\"rotate(-90 " << num(margin_left - 40) << ' '
      << num(margin_top + plot_h / 2) << ")\">count</text>\n";
  out << "</svg>\n";
}

}  // namespace actionchain
