#pragma once

#include <map>
#include <vector>

#include "actionchain/phase.hpp"
#include "actionchain/types.hpp"

namespace actionchain {

using Matrix = std::vector<std::vector<double>>;

struct TransitionModel {
  std::vector<PhaseState> states;          // observed state space, sorted
  Matrix state_matrix;                     // P^h, row-stochastic
  Matrix time_matrix;                      // P^v over (lg, st), 2x2
  std::vector<std::vector<std::int64_t>> state_counts;
  std::vector<std::vector<std::int64_t>> time_counts;
  // Key-level pair counts; sources of the action-chain table and the
  // successor pool for synthetic walks.
  std::map<PhaseKey, std::map<PhaseKey, std::int64_t>> key_successors;

  int state_index(const PhaseState& s) const;  // -1 if unknown
  bool row_absorbing(int l) const;
};

struct ChainEntry {
  PhaseKey successor;
  double jtp = 0.0;
};

struct ActionChainTable {
  std::map<PhaseKey, ChainEntry> entries;
};

// Empirical transition frequencies over consecutive phase pairs; each
// sequence belongs to one driver, pairs never span drivers. Optional
// additive smoothing (default off, so unseen transitions stay at 0).
TransitionModel estimate(const std::vector<std::vector<PhaseKey>>& sequences,
                         double additive_smoothing = 0.0);

// p_{lm,kf} = p_lk * p_mf: state-chain times time-label-chain.
double joint_transition(const TransitionModel& model, const PhaseKey& from,
                        const PhaseKey& to);

// p_{lm,k} = p^h_lk * p^v_mk / sum_f p^h_lf * p^v_mf, for two chains on
// the same state space. Matrices must be square and equally sized.
double coupled_conditional(const Matrix& horizontal, const Matrix& vertical,
                           std::size_t l, std::size_t m, std::size_t k);

// Model form; defined when the state space has the same size as the
// time-label space (see coupled_conditional above).
double coupled_conditional(const TransitionModel& model, std::size_t l,
                           std::size_t m, std::size_t k);

// For each source key with observed outgoing transitions, the target key
// maximizing the joint transition probability. Ties break by higher
// library frequency, then lexicographic key order.
ActionChainTable build_action_chains(const TransitionModel& model,
                                     const PhaseLibrary& library);

}  // namespace actionchain
