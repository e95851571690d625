#pragma once

#include <vector>

#include "actionchain/chain.hpp"
#include "actionchain/types.hpp"

namespace actionchain {

struct DriverScore {
  int driver_id = 0;
  double dh = 0.0;
  int transitions_used = 0;
  int transitions_skipped = 0;  // sources with no chain entry
};

struct FlowStats {
  double mu = 0.0;
  double sigma = 0.0;  // sample standard deviation (n-1)
  std::vector<int> outliers;  // driver ids with dh > mu + 3*sigma
};

// Mean squared difference between a driver's actual joint transition
// probabilities and the chain's maximal ones, over scored pairs.
DriverScore driver_dh(int driver_id, const std::vector<PhaseKey>& sequence,
                      const TransitionModel& model, const ActionChainTable& chains);

FlowStats flow_stats(const std::vector<DriverScore>& scores);

}  // namespace actionchain
