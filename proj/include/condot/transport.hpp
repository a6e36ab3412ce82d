#pragma once

#include <utility>
#include <vector>

#include "condot/measures.hpp"
#include "condot/metric.hpp"
#include "condot/tolerances.hpp"

namespace condot {

// Sparse optimal coupling between mu and nu together with the optimal basis
// potentials of the underlying min-cost-flow solve. Potentials are stored in
// the Kantorovich convention u_i + v_j <= d_ij, anchored so the first source
// node has potential 0.
struct TransportPlan {
  struct Entry {
    int i;          // index into mu atoms
    int j;          // index into nu atoms
    double amount;  // flow, > 0
  };

  std::vector<Entry> flows;
  double cost_value = 0.0;
  std::vector<double> source_potentials;  // u, one per mu atom
  std::vector<double> sink_potentials;    // v, one per nu atom
  int rows = 0;                           // |mu|
  int cols = 0;                           // |nu|

  std::vector<double> row_sums() const;
  std::vector<double> col_sums() const;
};

// Lipschitz-1 potential on the union of both supports, paired with its dual
// value E_mu[f] - E_nu[f]. A valid witness certifies optimality of the plan.
struct DualWitness {
  std::vector<Vec> support_points;  // mu atoms then nu atoms, duplicates merged
  std::vector<double> values;
  double dual_value = 0.0;
};

// Exact W1 between finitely supported measures: min-cost flow on the full
// bipartite graph solved by network simplex with Bland's anti-cycling rule.
// Deterministic for fixed inputs. Throws DimensionMismatch or SolverFailure.
std::pair<double, TransportPlan> w1_exact(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                          const MetricSpec& metric = MetricSpec::euclidean());

// Independent 1-D oracle: integral of |F_mu - F_nu| over sorted breakpoints.
// Test oracle for w1_exact; never calls the flow solver.
double w1_1d_oracle(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

// Extracts the Kantorovich potentials of an optimal plan and c-transforms
// them onto the union support: f(p) = min_q (d(p, q) - v(q)) over nu atoms.
// Aborts with CertificateFailure if the witness fails Lipschitz feasibility
// or the duality gap check; that signals a solver bug, not bad input.
DualWitness dual_witness(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                         const TransportPlan& plan,
                         const MetricSpec& metric = MetricSpec::euclidean(),
                         const Tolerances& tols = Tolerances{});

// max over pairs of |f(p) - f(q)| / d(p, q). DegenerateInput on duplicates.
double lipschitz_modulus(const std::vector<Vec>& points, const std::vector<double>& values,
                         const MetricSpec& metric = MetricSpec::euclidean());

// Recomputes every TransportPlan invariant from scratch (marginals, cost,
// basic-solution sparsity). Throws InvariantViolation on failure.
void validate_plan(const TransportPlan& plan, const DiscreteMeasure& mu,
                   const DiscreteMeasure& nu, const MetricSpec& metric);

}  // namespace condot
