#include "actionchain/hetero.hpp"

#include <cmath>

#include "actionchain/errors.hpp"

namespace actionchain {

DriverScore driver_dh(int driver_id, const std::vector<PhaseKey>& sequence,
                      const TransitionModel& model, const ActionChainTable& chains) {
  if (sequence.size() < 2) throw SequenceTooShort();
  DriverScore score;
  score.driver_id = driver_id;
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < sequence.size(); ++i) {
    auto it = chains.entries.find(sequence[i]);
    if (it == chains.entries.end()) {
      ++score.transitions_skipped;
      continue;
    }
    double actual = joint_transition(model, sequence[i], sequence[i + 1]);
    double maximal = it->second.jtp;
    sum += (actual - maximal) * (actual - maximal);
    ++score.transitions_used;
  }
  score.dh = score.transitions_used > 0 ? sum / score.transitions_used : 0.0;
  return score;
}

FlowStats flow_stats(const std::vector<DriverScore>& scores) {
  if (scores.size() < 2) throw TooFewScores();
  FlowStats stats;
  double sum = 0.0;
  for (const auto& s : scores) sum += s.dh;
  stats.mu = sum / static_cast<double>(scores.size());
  double sq = 0.0;
  for (const auto& s : scores) sq += (s.dh - stats.mu) * (s.dh - stats.mu);
  stats.sigma = std::sqrt(sq / static_cast<double>(scores.size() - 1));
  double threshold = stats.mu + 3.0 * stats.sigma;
  for (const auto& s : scores)
    if (s.dh > threshold) stats.outliers.push_back(s.driver_id);
  return stats;
}

}  // namespace actionchain
