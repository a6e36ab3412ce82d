#pragma once

#include <utility>
#include <vector>

#include "condot/generator.hpp"
#include "condot/measures.hpp"
#include "condot/metric.hpp"
#include "condot/transport.hpp"

namespace condot {

struct PerYTerm {
  int y_index = 0;
  Vec y;
  double weight = 0.0;
  double w1 = 0.0;
};

// Per-condition discriminator values f_y(x) on the union of the real and
// generated x-supports for that y.
struct PerYWitness {
  int y_index = 0;
  Vec y;
  double weight = 0.0;
  double dual_value = 0.0;
  std::vector<Vec> x_atoms;
  std::vector<double> values;
};

struct ObjectiveReport {
  double lhs_value = 0.0;    // E_y[ W1(G(y), pi(.|y)) ]
  double rhs_value = 0.0;    // sup over x-Lipschitz-1 discriminators
  double joint_value = 0.0;  // W1 between the joint laws on X x Y
  std::vector<PerYTerm> per_y_terms;
  std::vector<PerYWitness> witness;
};

// E_{y~pi(y)} [ W1(G(y), pi(.|y)) ]: one exact solve per condition,
// aggregated in y-index order. jobs > 1 parallelizes the per-y solves without
// changing any value.
std::pair<double, std::vector<PerYTerm>> lhs_conditional_objective(
    const JointMeasure& joint, const GeneratorSpec& g, const Latent& eta,
    const MetricSpec& metric = MetricSpec::euclidean(), int jobs = 1);

// The partially-Lipschitz dual objective. On a finite y-support the supremum
// decomposes into independent per-y Lipschitz-1 problems in x, each solved
// exactly through its dual witness.
std::pair<double, std::vector<PerYWitness>> rhs_partial_dual(
    const JointMeasure& joint, const GeneratorSpec& g, const Latent& eta,
    const MetricSpec& metric = MetricSpec::euclidean(), int jobs = 1);

// Joint law of (G(z, y), y): atoms (G(z_i, y_j), y_j), weights eta_i pi(y_j).
JointMeasure make_generated_joint(const JointMeasure& joint, const GeneratorSpec& g,
                                  const Latent& eta);

enum class ProductMetric { Sum, EuclidConcat };

ProductMetric parse_product_metric(const std::string& name);

// W1 between two joint measures on the product space under the chosen
// product metric (default: sum metric).
double joint_w1(const JointMeasure& joint_real, const JointMeasure& joint_gen,
                ProductMetric product_metric = ProductMetric::Sum);

// Runs all three objectives and enforces the report invariants:
// |lhs - rhs| <= 1e-7 and joint <= lhs + 1e-9. A violation means an
// implementation bug and raises InvariantViolation.
ObjectiveReport objective_report(const JointMeasure& joint, const GeneratorSpec& g,
                                 const Latent& eta,
                                 const MetricSpec& metric = MetricSpec::euclidean(),
                                 ProductMetric product_metric = ProductMetric::Sum,
                                 int jobs = 1);

}  // namespace condot
