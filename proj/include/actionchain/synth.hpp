#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "actionchain/chain.hpp"
#include "actionchain/config.hpp"
#include "actionchain/types.hpp"

namespace actionchain {

struct ScriptEntry {
  Trend trend = Trend::L;   // I, D, H or L
  int duration_frames = 1;
  double amplitude = 0.0;   // signed delta for I/D ramps; ignored for holds
};

struct VariableScript {
  double start_value = 0.0;
  double noise_std = 0.0;
  std::vector<ScriptEntry> entries;
};

struct PhaseScript {
  std::array<VariableScript, kNumVariables> variables;
  std::uint64_t seed = 0;

  int total_frames() const;
  void validate() const;
};

// Piecewise rendering: I/D ramp by the scripted amplitude, H/L hold the
// current value; zero-mean gaussian noise per variable, deterministic
// per seed.
Trajectory render_trajectory(const PhaseScript& script, double dt);

// Ground-truth per-variable timeline implied by a script (adjacent equal
// labels coalesced). Hold labels are taken from the script as written.
TrendTimeline expected_timeline(const PhaseScript& script, Variable variable);

// Each driver walks the chain table for `steps` phases starting from
// `start`: with probability 1 - deviation_rate take the chain successor,
// otherwise sample uniformly among the other observed successors.
std::vector<std::vector<PhaseKey>> sample_population(
    const TransitionModel& model, const ActionChainTable& chains,
    const PhaseKey& start, int n_drivers, int steps, double deviation_rate,
    std::uint64_t seed);

// Parse a script from the key-value config format, e.g.
//   synth.seed = 7
//   synth.v.start = 10
//   synth.v.noise_std = 0.05
//   synth.v.entries = I:100:5, H:200:0, D:100:-5
PhaseScript script_from_kv(const KeyValueFile& kv);

}  // namespace actionchain
