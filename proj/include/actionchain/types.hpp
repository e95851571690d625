#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace actionchain {

// Action trend of one variable over a segment. S is an intermediate
// label that is refined into H or L before timelines are finalized.
enum class Trend : std::uint8_t { I, D, S, H, L };

char trend_char(Trend t);
Trend trend_from_char(char c);

// Variables tracked per frame, in fixed order.
enum class Variable : std::uint8_t { V, A, D, Dv };
inline constexpr int kNumVariables = 4;
inline constexpr std::array<Variable, kNumVariables> kVariableOrder = {
    Variable::V, Variable::A, Variable::D, Variable::Dv};

std::string variable_name(Variable v);
Variable variable_from_name(const std::string& name);

struct RawRecord {
  int vehicle_id = 0;
  int frame_id = 0;
  double velocity = 0.0;       // m/s
  double acceleration = 0.0;   // m/s^2
  double space_headway = 0.0;  // m
  int preceding_id = 0;        // 0 = no leader
};

struct FrameSample {
  double v = 0.0;
  double a = 0.0;
  double d = 0.0;
  double dv = 0.0;  // leader velocity minus follower velocity

  double get(Variable var) const;
};

struct Trajectory {
  int driver_id = 0;
  int episode_start = 0;  // first frame id of the episode
  double dt = 0.1;        // seconds per frame
  std::vector<FrameSample> series;

  std::size_t length() const { return series.size(); }
  double duration_s() const { return static_cast<double>(series.size()) * dt; }
  std::vector<double> column(Variable var) const;
};

// Half-open frame interval [start_frame, end_frame) with one trend label.
struct TrendSegment {
  int start_frame = 0;
  int end_frame = 0;
  Trend trend = Trend::S;

  int length() const { return end_frame - start_frame; }
  bool operator==(const TrendSegment&) const = default;
};

struct TrendTimeline {
  Variable variable = Variable::V;
  std::vector<TrendSegment> segments;  // abutting, covering [0, length)

  int total_frames() const {
    return segments.empty() ? 0 : segments.back().end_frame;
  }
};

// m-tuple of trends, variable order (v, a, d, dv).
struct PhaseState {
  std::array<Trend, kNumVariables> trends{};

  auto operator<=>(const PhaseState&) const = default;
};

enum class TimeLabel : std::uint8_t { Lg, St };

struct PhaseKey {
  PhaseState state;
  TimeLabel time = TimeLabel::St;

  auto operator<=>(const PhaseKey&) const = default;
};

struct ActionPhase {
  PhaseKey key;
  int start_frame = 0;
  int end_frame = 0;

  int duration_frames() const { return end_frame - start_frame; }
};

// Textual forms used across report files, e.g. "((L,L,H,H), st)".
std::string to_string(const PhaseState& s);
std::string to_string(const PhaseKey& k);
std::string to_string(TimeLabel t);
PhaseState phase_state_from_string(const std::string& text);
PhaseKey phase_key_from_string(const std::string& text);

}  // namespace actionchain
