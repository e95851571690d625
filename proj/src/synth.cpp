#include "actionchain/synth.hpp"

#include <random>
#include <sstream>

#include "actionchain/errors.hpp"

namespace actionchain {

int PhaseScript::total_frames() const {
  int total = 0;
  for (const auto& e : variables[0].entries) total += e.duration_frames;
  return total;
}

void PhaseScript::validate() const {
  int frames = -1;
  for (const auto& var : variables) {
    if (var.entries.empty()) throw InvalidScript("variable track has no entries");
    if (var.noise_std < 0.0) throw InvalidScript("negative noise_std");
    int total = 0;
    for (const auto& e : var.entries) {
      switch (e.trend) {
        case Trend::I:
          if (e.amplitude <= 0.0) throw InvalidScript("I entry needs amplitude > 0");
          if (e.duration_frames < 2) throw InvalidScript("ramp needs >= 2 frames");
          break;
        case Trend::D:
          if (e.amplitude >= 0.0) throw InvalidScript("D entry needs amplitude < 0");
          if (e.duration_frames < 2) throw InvalidScript("ramp needs >= 2 frames");
          break;
        case Trend::H:
        case Trend::L:
          if (e.duration_frames < 1) throw InvalidScript("hold needs >= 1 frame");
          break;
        case Trend::S:
          throw InvalidScript("S is not a scriptable trend");
      }
      total += e.duration_frames;
    }
    if (frames < 0)
      frames = total;
    else if (frames != total)
      throw InvalidScript("variable tracks differ in total frames");
  }
}

Trajectory render_trajectory(const PhaseScript& script, double dt) {
  script.validate();
  int frames = script.total_frames();
  Trajectory traj;
  traj.dt = dt;
  traj.series.resize(static_cast<std::size_t>(frames));

  for (int m = 0; m < kNumVariables; ++m) {
    const auto& var = script.variables[static_cast<std::size_t>(m)];
    std::mt19937_64 rng(script.seed * static_cast<std::uint64_t>(kNumVariables) +
                        static_cast<std::uint64_t>(m));
    std::normal_distribution<double> noise(0.0, var.noise_std);
    double value = var.start_value;
    int t = 0;
    for (const auto& e : var.entries) {
      for (int f = 0; f < e.duration_frames; ++f, ++t) {
        double x = value;
        if (e.trend == Trend::I || e.trend == Trend::D)
          x = value + e.amplitude * static_cast<double>(f) /
                          static_cast<double>(e.duration_frames - 1);
        double sample = x + (var.noise_std > 0.0 ? noise(rng) : 0.0);
        auto& s = traj.series[static_cast<std::size_t>(t)];
        switch (static_cast<Variable>(m)) {
          case Variable::V: s.v = sample; break;
          case Variable::A: s.a = sample; break;
          case Variable::D: s.d = sample; break;
          case Variable::Dv: s.dv = sample; break;
        }
      }
      if (e.trend == Trend::I || e.trend == Trend::D) value += e.amplitude;
    }
  }
  return traj;
}

TrendTimeline expected_timeline(const PhaseScript& script, Variable variable) {
  const auto& var = script.variables[static_cast<std::size_t>(variable)];
  TrendTimeline timeline;
  timeline.variable = variable;
  int t = 0;
  for (const auto& e : var.entries) {
    TrendSegment seg{t, t + e.duration_frames, e.trend};
    t = seg.end_frame;
    if (!timeline.segments.empty() && timeline.segments.back().trend == seg.trend)
      timeline.segments.back().end_frame = seg.end_frame;
    else
      timeline.segments.push_back(seg);
  }
  return timeline;
}

std::vector<std::vector<PhaseKey>> sample_population(
    const TransitionModel& model, const ActionChainTable& chains,
    const PhaseKey& start, int n_drivers, int steps, double deviation_rate,
    std::uint64_t seed) {
  bool any_outgoing = false;
  for (const auto& [_, succ] : model.key_successors)
    if (!succ.empty()) any_outgoing = true;
  if (!any_outgoing) throw DegenerateModel();

  std::vector<std::vector<PhaseKey>> population;
  population.reserve(static_cast<std::size_t>(n_drivers));
  for (int d = 0; d < n_drivers; ++d) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(d));
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::vector<PhaseKey> seq{start};
    PhaseKey current = start;
    for (int s = 0; s < steps; ++s) {
      auto chain_it = chains.entries.find(current);
      if (chain_it == chains.entries.end()) break;
      PhaseKey next = chain_it->second.successor;
      if (coin(rng) < deviation_rate) {
        auto obs = model.key_successors.find(current);
        if (obs != model.key_successors.end()) {
          std::vector<PhaseKey> others;
          for (const auto& [target, _] : obs->second)
            if (!(target == next)) others.push_back(target);
          if (!others.empty()) {
            std::uniform_int_distribution<std::size_t> pick(0, others.size() - 1);
            next = others[pick(rng)];
          }
        }
      }
      seq.push_back(next);
      current = next;
    }
    population.push_back(std::move(seq));
  }
  return population;
}

namespace {

ScriptEntry parse_entry(const std::string& token) {
  std::istringstream ss(token);
  std::string label, dur, amp;
  if (!std::getline(ss, label, ':') || !std::getline(ss, dur, ':'))
    throw InvalidScript("entry must be trend:frames[:amplitude]: " + token);
  std::getline(ss, amp, ':');
  auto strip = [](std::string s) {
    auto b = s.find_first_not_of(" \t");
    auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  ScriptEntry entry;
  std::string l = strip(label);
  if (l.size() != 1) throw InvalidScript("bad trend in entry: " + token);
  entry.trend = trend_from_char(l[0]);
  entry.duration_frames = std::stoi(strip(dur));
  entry.amplitude = amp.empty() ? 0.0 : std::stod(strip(amp));
  return entry;
}

}  // namespace

PhaseScript script_from_kv(const KeyValueFile& kv) {
  PhaseScript script;
  script.seed = static_cast<std::uint64_t>(kv.get_int("synth.seed", 0));
  for (Variable v : kVariableOrder) {
    auto& var = script.variables[static_cast<std::size_t>(v)];
    std::string p = "synth." + variable_name(v) + ".";
    var.start_value = kv.get_double(p + "start", 0.0);
    var.noise_std = kv.get_double(p + "noise_std", 0.0);
    std::string entries = kv.get(p + "entries", "");
    if (entries.empty()) throw InvalidScript("missing " + p + "entries");
    std::istringstream ss(entries);
    std::string token;
    while (std::getline(ss, token, ','))
      var.entries.push_back(parse_entry(token));
  }
  script.validate();
  return script;
}

}  // namespace actionchain
