#include "actionchain/chain.hpp"

#include <algorithm>
#include <set>

#include "actionchain/errors.hpp"

namespace actionchain {

namespace {

std::size_t time_index(TimeLabel t) { return t == TimeLabel::Lg ? 0 : 1; }

Matrix normalize_rows(const std::vector<std::vector<std::int64_t>>& counts,
                      double additive) {
  Matrix out(counts.size(), std::vector<double>(counts.empty() ? 0 : counts[0].size(), 0.0));
  for (std::size_t l = 0; l < counts.size(); ++l) {
    double row_sum = 0.0;
    for (auto c : counts[l]) row_sum += static_cast<double>(c);
    if (row_sum == 0.0 && additive == 0.0) continue;  // absorbing row stays all-zero
    double denom = row_sum + additive * static_cast<double>(counts[l].size());
    for (std::size_t k = 0; k < counts[l].size(); ++k)
      out[l][k] = (static_cast<double>(counts[l][k]) + additive) / denom;
  }
  return out;
}

}  // namespace

int TransitionModel::state_index(const PhaseState& s) const {
  auto it = std::lower_bound(states.begin(), states.end(), s);
  if (it == states.end() || !(*it == s)) return -1;
  return static_cast<int>(it - states.begin());
}

bool TransitionModel::row_absorbing(int l) const {
  for (auto c : state_counts[static_cast<std::size_t>(l)])
    if (c > 0) return false;
  return true;
}

TransitionModel estimate(const std::vector<std::vector<PhaseKey>>& sequences,
                         double additive_smoothing) {
  bool any_pair = false;
  std::set<PhaseState> state_set;
  for (const auto& seq : sequences) {
    if (seq.size() >= 2) any_pair = true;
    for (const auto& key : seq) state_set.insert(key.state);
  }
  if (!any_pair) throw NoTransitions();

  TransitionModel model;
  model.states.assign(state_set.begin(), state_set.end());
  std::size_t n = model.states.size();
  model.state_counts.assign(n, std::vector<std::int64_t>(n, 0));
  model.time_counts.assign(2, std::vector<std::int64_t>(2, 0));

  for (const auto& seq : sequences) {
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
      int l = model.state_index(seq[i].state);
      int k = model.state_index(seq[i + 1].state);
      ++model.state_counts[static_cast<std::size_t>(l)][static_cast<std::size_t>(k)];
      ++model.time_counts[time_index(seq[i].time)][time_index(seq[i + 1].time)];
      ++model.key_successors[seq[i]][seq[i + 1]];
    }
  }
  model.state_matrix = normalize_rows(model.state_counts, additive_smoothing);
  model.time_matrix = normalize_rows(model.time_counts, additive_smoothing);
  return model;
}

double joint_transition(const TransitionModel& model, const PhaseKey& from,
                        const PhaseKey& to) {
  int l = model.state_index(from.state);
  int k = model.state_index(to.state);
  if (l < 0) throw UnknownState(to_string(from));
  if (k < 0) throw UnknownState(to_string(to));
  double p_state =
      model.state_matrix[static_cast<std::size_t>(l)][static_cast<std::size_t>(k)];
  double p_time = model.time_matrix[time_index(from.time)][time_index(to.time)];
  return p_state * p_time;
}

double coupled_conditional(const Matrix& horizontal, const Matrix& vertical,
                           std::size_t l, std::size_t m, std::size_t k) {
  std::size_t n = horizontal.size();
  if (n == 0 || vertical.size() != n)
    throw Error("coupled_conditional requires equally sized square matrices");
  double denom = 0.0;
  for (std::size_t f = 0; f < n; ++f) denom += horizontal[l][f] * vertical[m][f];
  if (denom <= 0.0) throw DegenerateDenominator();
  return horizontal[l][k] * vertical[m][k] / denom;
}

double coupled_conditional(const TransitionModel& model, std::size_t l,
                           std::size_t m, std::size_t k) {
  if (model.state_matrix.size() != model.time_matrix.size())
    throw Error("coupled_conditional on a model needs matching chain state spaces");
  return coupled_conditional(model.state_matrix, model.time_matrix, l, m, k);
}

ActionChainTable build_action_chains(const TransitionModel& model,
                                     const PhaseLibrary& library) {
  ActionChainTable table;
  for (const auto& [source, _] : model.key_successors) {
    PhaseKey best{};
    double best_jtp = -1.0;
    std::int64_t best_freq = -1;
    bool found = false;
    for (const auto& [target, freq] : library.entries) {
      if (model.state_index(target.state) < 0) continue;
      double jtp = joint_transition(model, source, target);
      if (jtp <= 0.0) continue;
      if (jtp > best_jtp || (jtp == best_jtp && freq > best_freq) ||
          (jtp == best_jtp && freq == best_freq && target < best)) {
        best = target;
        best_jtp = jtp;
        best_freq = freq;
        found = true;
      }
    }
    if (found) table.entries[source] = ChainEntry{best, best_jtp};
  }
  return table;
}

}  // namespace actionchain
