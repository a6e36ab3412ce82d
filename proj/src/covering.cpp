#include "condot/covering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "condot/parallel.hpp"
#include "condot/tolerances.hpp"
#include "condot/transport.hpp"

namespace condot {

namespace {

constexpr long long kMaxGridCells = 10000000;  // 1e7
constexpr int kMaxModuliSupport = 200;         // m(m-1)/2 solves stay feasible

std::vector<long long> grid_coordinates(const Vec& y, const AxisBox& domain, double cell) {
  std::vector<long long> idx(y.size());
  for (int d = 0; d < y.size(); ++d)
    idx[d] = static_cast<long long>(std::floor((y[d] - domain.low[d]) / cell));
  return idx;
}

long long flatten(const std::vector<long long>& idx, const std::vector<long long>& cells) {
  long long flat = 0;
  for (std::size_t d = 0; d < idx.size(); ++d) flat = flat * cells[d] + idx[d];
  return flat;
}

}  // namespace

int CoverPartition::locate(const Vec& y) const {
  if (y.size() != domain.low.size()) throw DimensionMismatch("locate: wrong y dimension");
  std::vector<long long> idx = grid_coordinates(y, domain, cell);
  for (std::size_t d = 0; d < idx.size(); ++d)
    if (idx[d] < 0 || idx[d] >= cells[d]) return -1;
  const long long flat = flatten(idx, cells);
  const auto it = std::lower_bound(
      boxes.begin(), boxes.end(), flat,
      [](const BoxEntry& b, long long key) { return b.flat_index < key; });
  if (it == boxes.end() || it->flat_index != flat) return -1;
  return static_cast<int>(it - boxes.begin());
}

CoverPartition build_cover(const std::vector<Vec>& y_support, double delta) {
  if (delta <= 0.0) throw InvalidDelta("delta must be positive, got " + std::to_string(delta));
  if (y_support.empty()) throw EmptyInput("build_cover over an empty support");

  CoverPartition cover;
  cover.delta = delta;
  cover.domain = bounding_box(y_support, 0.0);
  const int dim = static_cast<int>(cover.domain.low.size());
  // Shrink slightly below delta / sqrt(dim) so the euclidean box diameter is
  // strictly under delta even after rounding.
  cover.cell = delta * (1.0 - 1e-9) / std::sqrt(static_cast<double>(dim));

  cover.cells.resize(dim);
  long double total = 1.0L;
  for (int d = 0; d < dim; ++d) {
    const double span = cover.domain.high[d] - cover.domain.low[d];
    cover.cells[d] = static_cast<long long>(std::floor(span / cover.cell)) + 1;
    total *= static_cast<long double>(cover.cells[d]);
    if (total > static_cast<long double>(kMaxGridCells))
      throw Overflow("cover grid would exceed 1e7 cells; delta is too small for dimension " +
                     std::to_string(dim));
  }

  std::map<long long, CoverPartition::BoxEntry> retained;
  for (int a = 0; a < static_cast<int>(y_support.size()); ++a) {
    std::vector<long long> idx = grid_coordinates(y_support[a], cover.domain, cover.cell);
    const long long flat = flatten(idx, cover.cells);
    auto [it, inserted] = retained.try_emplace(flat);
    CoverPartition::BoxEntry& box = it->second;
    if (inserted) {
      box.flat_index = flat;
      box.low = Vec(dim);
      box.high = Vec(dim);
      for (int d = 0; d < dim; ++d) {
        box.low[d] = cover.domain.low[d] + static_cast<double>(idx[d]) * cover.cell;
        box.high[d] = box.low[d] + cover.cell;
      }
      box.representative = a;  // atoms arrive in index order
    }
    box.members.push_back(a);
  }

  cover.boxes.reserve(retained.size());
  for (auto& [flat, box] : retained) cover.boxes.push_back(std::move(box));
  return cover;
}

ModulusTables empirical_moduli(const JointMeasure& joint, const GeneratorSpec& g,
                               const Latent& eta, const MetricSpec& metric, int jobs) {
  const ConditionalTable table = decompose(joint);
  const int m = table.size();
  if (m > kMaxModuliSupport)
    throw Overflow("pairwise moduli need m(m-1)/2 solves; y-support of " + std::to_string(m) +
                   " atoms exceeds " + std::to_string(kMaxModuliSupport));

  ModulusTables out;
  out.y_atoms = table.y_atoms;
  out.y_weights = table.y_weights;
  out.cond_w1 = Eigen::MatrixXd::Zero(m, m);
  out.gen_mod = Eigen::MatrixXd::Zero(m, m);
  out.f.resize(m);

  // One generator image per (y, z); every pairwise modulus reuses them.
  std::vector<std::vector<Vec>> images(m);
  parallel_for(m, jobs, [&](int yi) {
    images[yi].reserve(eta.measure.size());
    for (const Vec& z : eta.measure.atoms)
      images[yi].push_back(evaluate(g, z, table.y_atoms[yi]));
  });

  parallel_for(m, jobs, [&](int yi) {
    const DiscreteMeasure generated = pushforward(g, eta, table.y_atoms[yi]);
    out.f[yi] = w1_exact(generated, table.conditionals[yi], metric).first;
  });

  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(m) * (m - 1) / 2);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) pairs.emplace_back(i, j);

  parallel_for(static_cast<int>(pairs.size()), jobs, [&](int k) {
    const auto [i, j] = pairs[k];
    const double w = w1_exact(table.conditionals[i], table.conditionals[j], metric).first;
    double gen = 0.0;
    for (int zi = 0; zi < eta.measure.size(); ++zi)
      gen += eta.measure.weights[zi] * (images[i][zi] - images[j][zi]).norm();
    out.cond_w1(i, j) = out.cond_w1(j, i) = w;
    out.gen_mod(i, j) = out.gen_mod(j, i) = gen;
  });

  return out;
}

std::vector<PairSlack> lemma1_check(const ModulusTables& moduli) {
  std::vector<PairSlack> slacks;
  const int m = moduli.size();
  slacks.reserve(static_cast<std::size_t>(m) * (m - 1) / 2);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      const double rhs = moduli.cond_w1(i, j) + moduli.gen_mod(i, j);
      const double slack = rhs - std::abs(moduli.f[i] - moduli.f[j]);
      if (slack < -tol::kLipschitzSlack)
        throw InvariantViolation("continuity bound failed for pair (" + std::to_string(i) +
                                 ", " + std::to_string(j) + ") with slack " +
                                 std::to_string(slack));
      slacks.push_back({i, j, slack});
    }
  return slacks;
}

double select_delta(const ModulusTables& moduli, double epsilon) {
  if (epsilon <= 0.0)
    throw InvalidEpsilon("epsilon must be positive, got " + std::to_string(epsilon));
  const int m = moduli.size();
  if (m == 0) throw EmptyInput("select_delta over empty moduli");

  const double diameter = bounding_box(moduli.y_atoms, 0.0).diameter();
  if (m == 1) return diameter > 0.0 ? diameter : 1.0;  // no pairs, unconstrained

  Eigen::MatrixXd dist(m, m);
  double min_dist = std::numeric_limits<double>::infinity();
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      dist(i, j) = (moduli.y_atoms[i] - moduli.y_atoms[j]).norm();
      min_dist = std::min(min_dist, dist(i, j));
    }

  const double bound = epsilon / 4.0;
  auto feasible = [&](double delta) {
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        if (dist(i, j) >= delta) continue;
        if (std::abs(moduli.f[i] - moduli.f[j]) > bound) return false;
        if (moduli.cond_w1(i, j) > bound) return false;
        if (moduli.gen_mod(i, j) > bound) return false;
      }
    return true;
  };

  if (feasible(diameter)) return diameter;
  double lo = min_dist;  // vacuously feasible: no pair is strictly closer
  double hi = diameter;
  while (hi - lo > tol::kBisectRel * hi) {
    const double mid = 0.5 * (lo + hi);
    if (feasible(mid))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

double PiecewiseDiscriminator::evaluate_in_box(int box, const Vec& x) const {
  const std::vector<Vec>& qs = nu_atoms[box];
  const std::vector<double>& vs = nu_potentials[box];
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < qs.size(); ++j)
    best = std::min(best, distance(metric, x, qs[j]) - vs[j]);
  return best;
}

double PiecewiseDiscriminator::evaluate(const Vec& x, const Vec& y) const {
  const int box = partition.locate(y);
  if (box < 0) return 0.0;  // pi(y) carries no mass outside the retained boxes
  return evaluate_in_box(box, x);
}

PiecewiseDiscriminator build_piecewise_discriminator(const JointMeasure& joint,
                                                     const GeneratorSpec& g, const Latent& eta,
                                                     const CoverPartition& partition,
                                                     double slack, const MetricSpec& metric,
                                                     int jobs) {
  if (slack < 0.0) throw InvalidArgument("discriminator slack must be >= 0");
  const ConditionalTable table = decompose(joint);

  // The partition must cover this joint's y-support with matching indices.
  for (const auto& box : partition.boxes) {
    for (int member : box.members) {
      if (member < 0 || member >= table.size())
        throw InvalidArgument("cover references a y-atom outside this joint's support");
      const Vec& y = table.y_atoms[member];
      for (int d = 0; d < y.size(); ++d)
        if (y[d] < box.low[d] || y[d] >= box.high[d])
          throw InvalidArgument("cover box does not contain its member atom");
    }
  }

  const int k_boxes = static_cast<int>(partition.boxes.size());
  PiecewiseDiscriminator pw;
  pw.partition = partition;
  pw.metric = metric;
  pw.nu_atoms.resize(k_boxes);
  pw.nu_potentials.resize(k_boxes);
  pw.rep_dual_values.resize(k_boxes);
  pw.x_atoms.resize(k_boxes);
  pw.f_values.resize(k_boxes);

  parallel_for(k_boxes, jobs, [&](int k) {
    const auto& box = partition.boxes[k];
    const int rep = box.representative;
    const DiscreteMeasure& real_cond = table.conditionals[rep];
    const DiscreteMeasure generated = pushforward(g, eta, table.y_atoms[rep]);

    const auto [value, plan] = w1_exact(real_cond, generated, metric);
    const DualWitness witness = dual_witness(real_cond, generated, plan, metric);
    pw.rep_dual_values[k] = witness.dual_value;
    pw.nu_atoms[k] = generated.atoms;
    pw.nu_potentials[k] = plan.sink_potentials;

    // Tabulate the c-transform on every x-atom any member can query.
    std::vector<Vec>& xs = pw.x_atoms[k];
    auto append_unique = [&xs](const Vec& p) {
      for (const Vec& q : xs)
        if (same_point(q, p)) return;
      xs.push_back(p);
    };
    for (int member : box.members) {
      for (const Vec& p : table.conditionals[member].atoms) append_unique(p);
      const DiscreteMeasure member_gen = pushforward(g, eta, table.y_atoms[member]);
      for (const Vec& p : member_gen.atoms) append_unique(p);
    }
    std::vector<double>& fs = pw.f_values[k];
    fs.reserve(xs.size());
    for (const Vec& p : xs) fs.push_back(pw.evaluate_in_box(k, p));

    if (xs.size() >= 2 && lipschitz_modulus(xs, fs, metric) > 1.0 + tol::kLipschitzSlack)
      throw CertificateFailure("extended discriminator is not Lipschitz-1 on box " +
                               std::to_string(k));
    // The representative's value must reach F(y_rep) up to the allowed slack.
    if (witness.dual_value < value - slack - tol::kDualityGap)
      throw CertificateFailure("representative witness misses the required slack");
  });

  return pw;
}

CertificateRecord epsilon_certificate(const JointMeasure& joint, const GeneratorSpec& g,
                                      const Latent& eta, double epsilon,
                                      const MetricSpec& metric, int jobs) {
  if (epsilon <= 0.0)
    throw InvalidEpsilon("epsilon must be positive, got " + std::to_string(epsilon));

  const ConditionalTable table = decompose(joint);
  const ModulusTables moduli = empirical_moduli(joint, g, eta, metric, jobs);
  const int m = moduli.size();

  CertificateRecord record;
  record.epsilon = epsilon;
  for (int yi = 0; yi < m; ++yi) record.lhs += moduli.y_weights[yi] * moduli.f[yi];
  record.rhs = rhs_partial_dual(joint, g, eta, metric, jobs).first;

  record.delta = select_delta(moduli, epsilon);
  const CoverPartition cover = build_cover(table.y_atoms, record.delta);
  const PiecewiseDiscriminator pw =
      build_piecewise_discriminator(joint, g, eta, cover, epsilon / 4.0, metric, jobs);

  const int k_boxes = static_cast<int>(cover.boxes.size());
  std::vector<int> box_of(m, -1);
  for (int k = 0; k < k_boxes; ++k)
    for (int member : cover.boxes[k].members) box_of[member] = k;
  for (int yi = 0; yi < m; ++yi)
    if (box_of[yi] < 0) throw InvariantViolation("cover lost a support atom");

  // Exact per-condition building blocks of V(D_eps) and the chain.
  std::vector<double> real_side(m);   // E_{pi(.|y)} [f_k(x)]
  std::vector<double> gen_side(m);    // E_z [f_k(G(z, y))]
  std::vector<double> rep_side(m);    // E_{pi(.|y_rep(k))} [f_k(x)]
  parallel_for(m, jobs, [&](int yi) {
    const int k = box_of[yi];
    const int rep = cover.boxes[k].representative;
    double real_acc = 0.0;
    const DiscreteMeasure& cond = table.conditionals[yi];
    for (int a = 0; a < cond.size(); ++a)
      real_acc += cond.weights[a] * pw.evaluate_in_box(k, cond.atoms[a]);
    real_side[yi] = real_acc;

    double gen_acc = 0.0;
    for (int zi = 0; zi < eta.measure.size(); ++zi)
      gen_acc += eta.measure.weights[zi] *
                 pw.evaluate_in_box(k, evaluate(g, eta.measure.atoms[zi], table.y_atoms[yi]));
    gen_side[yi] = gen_acc;

    double rep_acc = 0.0;
    const DiscreteMeasure& rep_cond = table.conditionals[rep];
    for (int a = 0; a < rep_cond.size(); ++a)
      rep_acc += rep_cond.weights[a] * pw.evaluate_in_box(k, rep_cond.atoms[a]);
    rep_side[yi] = rep_acc;
  });

  double v_deps = 0.0;
  double f_eps_mean = 0.0;  // E_y[F_eps(y)] with F_eps(y) = F(y_rep)
  double mid_mean = 0.0;    // E_y[E_rep[f_k] - E_z[f_k(G(z, y))]]
  for (int yi = 0; yi < m; ++yi) {
    v_deps += moduli.y_weights[yi] * (real_side[yi] - gen_side[yi]);
    f_eps_mean += moduli.y_weights[yi] * moduli.f[cover.boxes[box_of[yi]].representative];
    mid_mean += moduli.y_weights[yi] * (rep_side[yi] - gen_side[yi]);
  }
  record.v_deps = v_deps;

  // The four chained inequalities of the certificate, each a theorem given
  // the delta conditions; violation beyond solver noise is a bug.
  const double q = epsilon / 4.0;
  record.bound_f_eps = q + f_eps_mean;
  const double mid_bound = 3.0 * q + mid_mean;
  record.total_f_bound = epsilon + v_deps;

  record.per_k_slacks.resize(k_boxes);
  for (int k = 0; k < k_boxes; ++k) {
    const int rep = cover.boxes[k].representative;
    double worst = std::numeric_limits<double>::infinity();
    for (int member : cover.boxes[k].members) {
      // F(y_rep) <= eps/2 + E_rep[f_k] - E_z[f_k(G(z, y))] pointwise.
      worst = std::min(worst,
                       2.0 * q + rep_side[member] - gen_side[member] - moduli.f[rep]);
    }
    record.per_k_slacks[k] = worst;
  }

  auto fail = [&](const std::string& step, double slk) {
    throw InvariantViolation("certificate chain step '" + step + "' failed with slack " +
                             std::to_string(slk));
  };
  if (record.bound_f_eps - record.lhs < -tol::kChainSlack)
    fail("representative flattening", record.bound_f_eps - record.lhs);
  for (int k = 0; k < k_boxes; ++k)
    if (record.per_k_slacks[k] < -tol::kChainSlack) fail("pointwise bound", record.per_k_slacks[k]);
  if (mid_bound - record.lhs < -tol::kChainSlack) fail("generator shift", mid_bound - record.lhs);
  if (record.total_f_bound - record.lhs < -tol::kChainSlack)
    fail("conditional shift", record.total_f_bound - record.lhs);

  // Final verdicts.
  if (record.lhs - record.v_deps - epsilon > tol::kChainSlack)
    fail("lhs <= V + epsilon", record.lhs - record.v_deps - epsilon);
  if (record.v_deps - record.rhs > tol::kDomination)
    fail("V <= rhs", record.v_deps - record.rhs);

  record.pass = true;
  return record;
}

std::vector<CertificateRecord> convergence_study(const JointMeasure& joint,
                                                 const GeneratorSpec& g, const Latent& eta,
                                                 const std::vector<double>& epsilon_schedule,
                                                 const MetricSpec& metric, int jobs) {
  if (epsilon_schedule.empty()) throw InvalidArgument("epsilon schedule is empty");
  for (std::size_t i = 0; i < epsilon_schedule.size(); ++i) {
    if (epsilon_schedule[i] <= 0.0)
      throw InvalidEpsilon("schedule entries must be positive");
    if (i > 0 && epsilon_schedule[i] >= epsilon_schedule[i - 1])
      throw InvalidArgument("epsilon schedule must be strictly decreasing");
  }

  std::vector<CertificateRecord> rows;
  rows.reserve(epsilon_schedule.size());
  for (double eps : epsilon_schedule)
    rows.push_back(epsilon_certificate(joint, g, eta, eps, metric, jobs));
  return rows;
}

}  // namespace condot
