#pragma once

namespace condot {

// Central numeric tolerances. Ingestion is loose (human-authored files),
// internal maintenance is tight, chained solver outputs get a little room.
namespace tol {

inline constexpr double kWeightSumIngest = 1e-6;     // |sum(w) - 1| allowed at load
inline constexpr double kWeightSumInternal = 1e-12;  // maintained after normalization
inline constexpr double kMarginal = 1e-9;            // transport plan marginal slack
inline constexpr double kPlanCost = 1e-9;            // plan cost recomputation slack
inline constexpr double kLipschitzSlack = 1e-9;      // Lipschitz-1 feasibility slack
inline constexpr double kDualityGap = 1e-7;          // |dual - primal| certificate
inline constexpr double kChainSlack = 1e-7;          // proof-chain inequality slack
inline constexpr double kDomination = 1e-9;          // joint_w1 <= lhs slack
inline constexpr double kBisectRel = 1e-6;           // select_delta bisection, relative

}  // namespace tol

struct Tolerances {
  double duality_gap = tol::kDualityGap;
  double lipschitz_slack = tol::kLipschitzSlack;
  double chain_slack = tol::kChainSlack;
};

}  // namespace condot
