#include "condot/duality.hpp"

#include <cmath>
#include <string>

#include "condot/parallel.hpp"
#include "condot/tolerances.hpp"

namespace condot {

namespace {

void check_conditional_dims(const JointMeasure& joint, const GeneratorSpec& g,
                            const Latent& eta) {
  if (g.dim_y() != joint.dim_y)
    throw DimensionMismatch("generator y-dimension does not match the joint measure");
  if (g.dim_x() != joint.dim_x)
    throw DimensionMismatch("generator output dimension does not match the joint measure");
  if (eta.dim() != g.dim_z())
    throw DimensionMismatch("latent dimension does not match the generator");
}

}  // namespace

std::pair<double, std::vector<PerYTerm>> lhs_conditional_objective(const JointMeasure& joint,
                                                                   const GeneratorSpec& g,
                                                                   const Latent& eta,
                                                                   const MetricSpec& metric,
                                                                   int jobs) {
  check_conditional_dims(joint, g, eta);
  const ConditionalTable table = decompose(joint);
  const int m = table.size();

  std::vector<PerYTerm> terms(m);
  parallel_for(m, jobs, [&](int yi) {
    const DiscreteMeasure generated = pushforward(g, eta, table.y_atoms[yi]);
    const auto [value, plan] = w1_exact(generated, table.conditionals[yi], metric);
    terms[yi] = {yi, table.y_atoms[yi], table.y_weights[yi], value};
  });

  // Sequential fold in y-index order keeps the value independent of jobs.
  double total = 0.0;
  for (const PerYTerm& t : terms) total += t.weight * t.w1;
  return {total, std::move(terms)};
}

std::pair<double, std::vector<PerYWitness>> rhs_partial_dual(const JointMeasure& joint,
                                                             const GeneratorSpec& g,
                                                             const Latent& eta,
                                                             const MetricSpec& metric,
                                                             int jobs) {
  check_conditional_dims(joint, g, eta);
  const ConditionalTable table = decompose(joint);
  const int m = table.size();

  // No constraint couples distinct y in the discriminator class, so the
  // supremum splits into one Lipschitz-1 problem in x per condition; each is
  // solved exactly through its dual witness.
  std::vector<PerYWitness> witnesses(m);
  parallel_for(m, jobs, [&](int yi) {
    const DiscreteMeasure& real_cond = table.conditionals[yi];
    const DiscreteMeasure generated = pushforward(g, eta, table.y_atoms[yi]);
    const auto [value, plan] = w1_exact(real_cond, generated, metric);
    const DualWitness w = dual_witness(real_cond, generated, plan, metric);

    PerYWitness entry;
    entry.y_index = yi;
    entry.y = table.y_atoms[yi];
    entry.weight = table.y_weights[yi];
    entry.dual_value = w.dual_value;
    entry.x_atoms = w.support_points;
    entry.values = w.values;
    witnesses[yi] = std::move(entry);
  });

  double total = 0.0;
  for (const PerYWitness& w : witnesses) total += w.weight * w.dual_value;
  return {total, std::move(witnesses)};
}

JointMeasure make_generated_joint(const JointMeasure& joint, const GeneratorSpec& g,
                                  const Latent& eta) {
  check_conditional_dims(joint, g, eta);
  const ConditionalTable table = decompose(joint);

  std::vector<Vec> xs;
  std::vector<Vec> ys;
  std::vector<double> ws;
  for (int yi = 0; yi < table.size(); ++yi) {
    for (int zi = 0; zi < eta.measure.size(); ++zi) {
      xs.push_back(evaluate(g, eta.measure.atoms[zi], table.y_atoms[yi]));
      ys.push_back(table.y_atoms[yi]);
      ws.push_back(eta.measure.weights[zi] * table.y_weights[yi]);
    }
  }
  return make_joint(std::move(xs), std::move(ys), std::move(ws));
}

ProductMetric parse_product_metric(const std::string& name) {
  if (name == "sum") return ProductMetric::Sum;
  if (name == "euclid") return ProductMetric::EuclidConcat;
  throw InvalidArgument("unknown product metric '" + name + "' (expected sum or euclid)");
}

double joint_w1(const JointMeasure& joint_real, const JointMeasure& joint_gen,
                ProductMetric product_metric) {
  if (joint_real.dim_x != joint_gen.dim_x || joint_real.dim_y != joint_gen.dim_y)
    throw DimensionMismatch("joint measures live on different product spaces");

  auto concat = [](const JointMeasure& jm) {
    std::vector<Vec> atoms;
    atoms.reserve(jm.size());
    for (int a = 0; a < jm.size(); ++a) {
      Vec p(jm.dim_x + jm.dim_y);
      p << jm.x_atoms[a], jm.y_atoms[a];
      atoms.push_back(std::move(p));
    }
    return atoms;
  };

  DiscreteMeasure mu;
  mu.atoms = concat(joint_real);
  mu.weights = joint_real.weights;
  DiscreteMeasure nu;
  nu.atoms = concat(joint_gen);
  nu.weights = joint_gen.weights;

  const MetricSpec metric = product_metric == ProductMetric::Sum
                                ? MetricSpec::product_sum(joint_real.dim_x)
                                : MetricSpec::product_euclid(joint_real.dim_x);
  return w1_exact(mu, nu, metric).first;
}

ObjectiveReport objective_report(const JointMeasure& joint, const GeneratorSpec& g,
                                 const Latent& eta, const MetricSpec& metric,
                                 ProductMetric product_metric, int jobs) {
  ObjectiveReport report;
  auto [lhs, per_y] = lhs_conditional_objective(joint, g, eta, metric, jobs);
  auto [rhs, witness] = rhs_partial_dual(joint, g, eta, metric, jobs);
  report.lhs_value = lhs;
  report.rhs_value = rhs;
  report.per_y_terms = std::move(per_y);
  report.witness = std::move(witness);
  report.joint_value = joint_w1(joint, make_generated_joint(joint, g, eta), product_metric);

  // These are theorems on finite supports; failing them means a bug.
  double recomputed = 0.0;
  for (const PerYTerm& t : report.per_y_terms) recomputed += t.weight * t.w1;
  if (std::abs(recomputed - report.lhs_value) > tol::kWeightSumInternal)
    throw InvariantViolation("per-y terms do not recompose the conditional objective");
  if (std::abs(report.lhs_value - report.rhs_value) > tol::kDualityGap)
    throw InvariantViolation("conditional objective and partial dual differ by " +
                             std::to_string(report.lhs_value - report.rhs_value));
  if (report.joint_value > report.lhs_value + tol::kDomination)
    throw InvariantViolation("joint W1 exceeds the conditional objective");
  return report;
}

}  // namespace condot
