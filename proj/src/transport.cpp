#include "condot/transport.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace condot {

namespace {

// ---------------------------------------------------------------------------
// Bipartite transportation problem solved by network simplex.
//
// Nodes 0..m-1 are sources (supplies w_i), m..m+n-1 sinks (demands w'_j);
// arc a = i*n + j runs from source i to sink j at cost d_ij with lower bound
// 0 and no capacity. The initial basis is the northwest-corner spanning
// tree, so no artificial arcs or big-M costs enter the arithmetic. Pivoting
// uses Bland's rule on arc ids (entering: lowest id with negative reduced
// cost; leaving: lowest id among the min-ratio arcs), which cannot cycle.
//
// Flow is a template parameter: long long when the weights admit a common
// denominator <= 1e9 (all flow arithmetic exact), double otherwise.
// Potentials are kept in long double; tree paths can be m+n arcs deep and
// the extended precision keeps reduced-cost noise far below the pivot
// threshold.
// ---------------------------------------------------------------------------
template <typename Flow>
class NetworkSimplex {
public:
  NetworkSimplex(int m, int n, const std::vector<Flow>& supplies,
                 const std::vector<Flow>& demands, const std::vector<double>& costs)
      : m_(m),
        n_(n),
        nodes_(m + n),
        arcs_(m * n),
        supplies_(supplies),
        demands_(demands),
        costs_(costs),
        flow_(arcs_, Flow(0)),
        in_basis_(arcs_, 0),
        parent_(nodes_, -1),
        parent_arc_(nodes_, -1),
        depth_(nodes_, 0),
        potential_(nodes_, 0.0L),
        adjacency_(nodes_) {
    double max_cost = 0.0;
    for (double c : costs_) max_cost = std::max(max_cost, c);
    rc_tol_ = 1e-13L * std::max(1.0, max_cost);
  }

  // Returns false if the iteration cap was hit before optimality.
  bool run() {
    build_initial_basis();
    rebuild_tree();
    const long long cap = 50LL * (m_ + n_) * (m_ + n_);
    for (long long it = 0; it < cap; ++it) {
      const int entering = find_entering_arc();
      if (entering < 0) return true;
      pivot(entering);
    }
    return false;
  }

  // Recomputes the basic flows from the final tree by leaf stripping; every
  // node balance is consumed exactly once, so marginals hold to roundoff.
  std::vector<Flow> final_flows() const {
    std::vector<Flow> balance(nodes_);
    for (int i = 0; i < m_; ++i) balance[i] = supplies_[i];
    for (int j = 0; j < n_; ++j) balance[m_ + j] = -demands_[j];

    std::vector<int> degree(nodes_);
    for (int u = 0; u < nodes_; ++u) degree[u] = static_cast<int>(adjacency_[u].size());

    std::vector<Flow> flows(arcs_, Flow(0));
    std::vector<char> arc_done(arcs_, 0);
    std::vector<int> queue;
    for (int u = 0; u < nodes_; ++u)
      if (degree[u] == 1) queue.push_back(u);

    while (!queue.empty()) {
      const int u = queue.back();
      queue.pop_back();
      if (degree[u] != 1) continue;  // became interior again or already stripped
      int arc = -1;
      for (int a : adjacency_[u])
        if (!arc_done[a]) arc = a;
      if (arc < 0) continue;
      const int src = arc / n_;
      const int dst = m_ + arc % n_;
      const int other = (src == u) ? dst : src;
      // Flow runs source -> sink; a source leaf pushes its residual out, a
      // sink leaf pulls its residual in. Either way the neighbour absorbs
      // the leaf's balance.
      flows[arc] = (src == u) ? balance[u] : -balance[u];
      balance[other] += balance[u];
      arc_done[arc] = 1;
      degree[u] = 0;
      if (--degree[other] == 1) queue.push_back(other);
    }
    return flows;
  }

  std::vector<double> potentials() const {
    std::vector<double> out(nodes_);
    for (int u = 0; u < nodes_; ++u) out[u] = static_cast<double>(potential_[u]);
    return out;
  }

private:
  void add_basic(int arc) {
    in_basis_[arc] = 1;
    adjacency_[arc / n_].push_back(arc);
    adjacency_[m_ + arc % n_].push_back(arc);
  }

  void remove_basic(int arc) {
    in_basis_[arc] = 0;
    auto drop = [&](int node) {
      auto& list = adjacency_[node];
      list.erase(std::find(list.begin(), list.end(), arc));
    };
    drop(arc / n_);
    drop(m_ + arc % n_);
  }

  // Northwest-corner rule: a spanning-tree basis of exactly m + n - 1 arcs,
  // degenerate zero-flow arcs included. Exactly one index advances per step.
  void build_initial_basis() {
    std::vector<Flow> rs = supplies_;
    std::vector<Flow> rd = demands_;
    int i = 0;
    int j = 0;
    while (true) {
      const Flow q = std::min(rs[i], rd[j]);
      const int arc = i * n_ + j;
      add_basic(arc);
      flow_[arc] = q;
      rs[i] -= q;
      rd[j] -= q;
      if (i == m_ - 1 && j == n_ - 1) break;
      if (i < m_ - 1 && (rs[i] <= rd[j] || j == n_ - 1))
        ++i;
      else
        ++j;
    }
  }

  // Parents, depths and potentials from scratch, rooted at node 0 with
  // potential 0. O(m + n), cheap next to the entering-arc scan.
  void rebuild_tree() {
    std::fill(parent_.begin(), parent_.end(), -1);
    std::fill(parent_arc_.begin(), parent_arc_.end(), -1);
    std::vector<char> seen(nodes_, 0);
    std::vector<int> stack = {0};
    seen[0] = 1;
    depth_[0] = 0;
    potential_[0] = 0.0L;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int arc : adjacency_[u]) {
        const int src = arc / n_;
        const int dst = m_ + arc % n_;
        const int w = (src == u) ? dst : src;
        if (seen[w]) continue;
        seen[w] = 1;
        parent_[w] = u;
        parent_arc_[w] = arc;
        depth_[w] = depth_[u] + 1;
        // Reduced cost c - pi(src) + pi(dst) vanishes on basic arcs.
        potential_[w] = (src == u) ? potential_[u] - costs_[arc] : potential_[u] + costs_[arc];
        stack.push_back(w);
      }
    }
  }

  int find_entering_arc() const {
    for (int a = 0; a < arcs_; ++a) {
      if (in_basis_[a]) continue;
      const long double rc = costs_[a] - potential_[a / n_] + potential_[m_ + a % n_];
      if (rc < -rc_tol_) return a;
    }
    return -1;
  }

  void pivot(int entering) {
    const int u = entering / n_;
    const int v = m_ + entering % n_;

    // Tree cycle closed by the entering arc. The cycle direction follows the
    // entering arc u -> v, then the tree path v -> lca -> u; tree arcs
    // aligned with that direction gain t units, the others lose t.
    struct CycleArc {
      int arc;
      bool increases;
    };
    std::vector<CycleArc> cycle;
    int a = u;
    int b = v;
    while (depth_[a] > depth_[b]) {
      const int arc = parent_arc_[a];
      // Segment lca -> u is traversed parent -> a.
      cycle.push_back({arc, (arc / n_) == parent_[a]});
      a = parent_[a];
    }
    while (depth_[b] > depth_[a]) {
      const int arc = parent_arc_[b];
      // Segment v -> lca is traversed b -> parent.
      cycle.push_back({arc, (arc / n_) == b});
      b = parent_[b];
    }
    while (a != b) {
      const int arc_a = parent_arc_[a];
      cycle.push_back({arc_a, (arc_a / n_) == parent_[a]});
      a = parent_[a];
      const int arc_b = parent_arc_[b];
      cycle.push_back({arc_b, (arc_b / n_) == b});
      b = parent_[b];
    }

    // Ratio test over the flow-decreasing arcs; Bland tie-break on arc id.
    Flow t = std::numeric_limits<Flow>::max();
    int leaving = -1;
    for (const CycleArc& ca : cycle) {
      if (ca.increases) continue;
      if (leaving < 0 || flow_[ca.arc] < t || (flow_[ca.arc] == t && ca.arc < leaving)) {
        t = flow_[ca.arc];
        leaving = ca.arc;
      }
    }
    if (leaving < 0) throw SolverFailure("pivot cycle has no flow-decreasing arc");

    for (const CycleArc& ca : cycle)
      flow_[ca.arc] += ca.increases ? t : -t;
    flow_[entering] += t;

    remove_basic(leaving);
    add_basic(entering);
    rebuild_tree();
  }

  int m_;
  int n_;
  int nodes_;
  int arcs_;
  std::vector<Flow> supplies_;
  std::vector<Flow> demands_;
  std::vector<double> costs_;
  std::vector<Flow> flow_;
  std::vector<char> in_basis_;
  std::vector<int> parent_;
  std::vector<int> parent_arc_;
  std::vector<int> depth_;
  std::vector<long double> potential_;
  std::vector<std::vector<int>> adjacency_;
  long double rc_tol_;
};

// Best rational approximation p/q of w with q <= max_den and relative error
// <= rel_tol, by continued fractions. Returns the denominator, or nullopt.
std::optional<long long> rational_denominator(double w, long long max_den, double rel_tol) {
  double x = w;
  long long p_prev = 1, q_prev = 0;
  long long p = static_cast<long long>(std::floor(x)), q = 1;
  for (int iter = 0; iter < 64; ++iter) {
    const double approx = static_cast<double>(p) / static_cast<double>(q);
    if (std::abs(w - approx) <= rel_tol * std::max(1.0, std::abs(w))) return q;
    const double frac = x - std::floor(x);
    if (frac < 1e-15) break;
    x = 1.0 / frac;
    const double a_d = std::floor(x);
    if (a_d > 9e17) break;
    const long long a = static_cast<long long>(a_d);
    const long long p_next = a * p + p_prev;
    const long long q_next = a * q + q_prev;
    if (q_next > max_den || q_next <= 0) break;
    p_prev = p;
    q_prev = q;
    p = p_next;
    q = q_next;
  }
  return std::nullopt;
}

long long gcd_ll(long long a, long long b) { return b == 0 ? a : gcd_ll(b, a % b); }

// Common denominator <= 1e9 for the weights of both measures, if one exists.
std::optional<long long> common_denominator(const std::vector<double>& a,
                                            const std::vector<double>& b) {
  constexpr long long kMaxDen = 1000000000LL;
  long long lcm = 1;
  auto fold = [&](const std::vector<double>& ws) -> bool {
    for (double w : ws) {
      auto q = rational_denominator(w, kMaxDen, 1e-12);
      if (!q) return false;
      const long long g = gcd_ll(lcm, *q);
      if (lcm / g > kMaxDen / *q) return false;  // lcm would exceed the cap
      lcm = lcm / g * *q;
    }
    return true;
  };
  if (!fold(a) || !fold(b)) return std::nullopt;

  // Scaled weights must be integral and positive, and each side must sum to
  // exactly lcm, otherwise exact flow arithmetic buys nothing.
  auto check = [&](const std::vector<double>& ws) -> bool {
    long long total = 0;
    for (double w : ws) {
      const double scaled = w * static_cast<double>(lcm);
      const double rounded = std::round(scaled);
      if (std::abs(scaled - rounded) > 1e-6 || rounded < 1.0) return false;
      total += static_cast<long long>(rounded);
    }
    return total == lcm;
  };
  if (!check(a) || !check(b)) return std::nullopt;
  return lcm;
}

std::vector<double> cost_matrix(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                const MetricSpec& metric) {
  const int m = mu.size();
  const int n = nu.size();
  std::vector<double> costs(static_cast<std::size_t>(m) * n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      costs[static_cast<std::size_t>(i) * n + j] = distance(metric, mu.atoms[i], nu.atoms[j]);
  return costs;
}

template <typename Flow>
std::pair<double, TransportPlan> solve_with(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                            const std::vector<double>& costs,
                                            const std::vector<Flow>& supplies,
                                            const std::vector<Flow>& demands,
                                            double flow_scale) {
  const int m = mu.size();
  const int n = nu.size();
  NetworkSimplex<Flow> solver(m, n, supplies, demands, costs);
  if (!solver.run())
    throw SolverFailure("network simplex hit the iteration cap of 50*(m+n)^2");

  const std::vector<Flow> flows = solver.final_flows();
  TransportPlan plan;
  plan.rows = m;
  plan.cols = n;
  double cost = 0.0;
  for (int a = 0; a < m * n; ++a) {
    double f = static_cast<double>(flows[a]) / flow_scale;
    if (f < 0.0) {
      if (f < -1e-12) throw SolverFailure("negative basic flow");
      f = 0.0;  // roundoff on a degenerate arc
    }
    if (f > 0.0) {
      plan.flows.push_back({a / n, a % n, f});
      cost += f * costs[a];
    }
  }
  plan.cost_value = cost;

  // Kantorovich convention u_i + v_j <= d_ij, anchored at the first source.
  const std::vector<double> pot = solver.potentials();
  const double anchor = pot[0];
  plan.source_potentials.resize(m);
  plan.sink_potentials.resize(n);
  for (int i = 0; i < m; ++i) plan.source_potentials[i] = pot[i] - anchor;
  for (int j = 0; j < n; ++j) plan.sink_potentials[j] = -(pot[m + j] - anchor);

  // Feasibility is part of the solver contract, not a warning.
  const std::vector<double> rows = plan.row_sums();
  const std::vector<double> cols = plan.col_sums();
  for (int i = 0; i < m; ++i)
    if (std::abs(rows[i] - mu.weights[i]) > tol::kMarginal)
      throw SolverFailure("row marginal off by " + std::to_string(rows[i] - mu.weights[i]));
  for (int j = 0; j < n; ++j)
    if (std::abs(cols[j] - nu.weights[j]) > tol::kMarginal)
      throw SolverFailure("column marginal off by " + std::to_string(cols[j] - nu.weights[j]));

  return {cost, std::move(plan)};
}

}  // namespace

std::vector<double> TransportPlan::row_sums() const {
  std::vector<double> sums(rows, 0.0);
  for (const Entry& e : flows) sums[e.i] += e.amount;
  return sums;
}

std::vector<double> TransportPlan::col_sums() const {
  std::vector<double> sums(cols, 0.0);
  for (const Entry& e : flows) sums[e.j] += e.amount;
  return sums;
}

std::pair<double, TransportPlan> w1_exact(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                          const MetricSpec& metric) {
  if (mu.dim() != nu.dim())
    throw DimensionMismatch("w1_exact between measures of dimension " +
                            std::to_string(mu.dim()) + " and " + std::to_string(nu.dim()));
  if (mu.size() == 0 || nu.size() == 0) throw EmptyInput("w1_exact on an empty measure");

  const std::vector<double> costs = cost_matrix(mu, nu, metric);

  if (auto den = common_denominator(mu.weights, nu.weights)) {
    const double d = static_cast<double>(*den);
    std::vector<long long> supplies(mu.size()), demands(nu.size());
    for (int i = 0; i < mu.size(); ++i)
      supplies[i] = static_cast<long long>(std::round(mu.weights[i] * d));
    for (int j = 0; j < nu.size(); ++j)
      demands[j] = static_cast<long long>(std::round(nu.weights[j] * d));
    return solve_with<long long>(mu, nu, costs, supplies, demands, d);
  }
  return solve_with<double>(mu, nu, costs, mu.weights, nu.weights, 1.0);
}

double w1_1d_oracle(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (mu.dim() != 1 || nu.dim() != 1)
    throw DimensionMismatch("w1_1d_oracle needs 1-D measures");

  // Integral of |F_mu - F_nu| over the sorted breakpoints.
  struct Step {
    double t;
    double d_mu;
    double d_nu;
  };
  std::vector<Step> steps;
  steps.reserve(mu.size() + nu.size());
  for (int i = 0; i < mu.size(); ++i) steps.push_back({mu.atoms[i][0], mu.weights[i], 0.0});
  for (int j = 0; j < nu.size(); ++j) steps.push_back({nu.atoms[j][0], 0.0, nu.weights[j]});
  std::sort(steps.begin(), steps.end(), [](const Step& a, const Step& b) { return a.t < b.t; });

  double integral = 0.0;
  double f_mu = 0.0;
  double f_nu = 0.0;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    if (k > 0) integral += std::abs(f_mu - f_nu) * (steps[k].t - steps[k - 1].t);
    f_mu += steps[k].d_mu;
    f_nu += steps[k].d_nu;
  }
  return integral;
}

DualWitness dual_witness(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                         const TransportPlan& plan, const MetricSpec& metric,
                         const Tolerances& tols) {
  if (plan.rows != mu.size() || plan.cols != nu.size())
    throw DimensionMismatch("plan shape does not match the measures");

  // c-transform of the sink potentials; a minimum of Lipschitz-1 functions,
  // so Lipschitz-1 itself.
  auto f = [&](const Vec& p) {
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < nu.size(); ++j)
      best = std::min(best, distance(metric, p, nu.atoms[j]) - plan.sink_potentials[j]);
    return best;
  };

  DualWitness witness;
  double e_mu = 0.0;
  double e_nu = 0.0;
  auto append_unique = [&](const Vec& p, double v) {
    for (const Vec& q : witness.support_points)
      if (same_point(q, p)) return;
    witness.support_points.push_back(p);
    witness.values.push_back(v);
  };
  for (int i = 0; i < mu.size(); ++i) {
    const double v = f(mu.atoms[i]);
    e_mu += mu.weights[i] * v;
    append_unique(mu.atoms[i], v);
  }
  for (int j = 0; j < nu.size(); ++j) {
    const double v = f(nu.atoms[j]);
    e_nu += nu.weights[j] * v;
    append_unique(nu.atoms[j], v);
  }
  witness.dual_value = e_mu - e_nu;

  // Both certificate checks abort on failure: a broken witness means the
  // solver produced a wrong basis, never a tolerable condition.
  const int k = static_cast<int>(witness.support_points.size());
  for (int p = 0; p < k; ++p)
    for (int q = p + 1; q < k; ++q) {
      const double d = distance(metric, witness.support_points[p], witness.support_points[q]);
      if (std::abs(witness.values[p] - witness.values[q]) > d + tols.lipschitz_slack)
        throw CertificateFailure("dual witness violates Lipschitz-1 feasibility");
    }
  if (std::abs(witness.dual_value - plan.cost_value) > tols.duality_gap)
    throw CertificateFailure("duality gap " +
                             std::to_string(witness.dual_value - plan.cost_value) +
                             " exceeds tolerance");
  return witness;
}

double lipschitz_modulus(const std::vector<Vec>& points, const std::vector<double>& values,
                         const MetricSpec& metric) {
  if (points.size() != values.size())
    throw DimensionMismatch("points and values counts differ");
  if (points.size() < 2) throw DegenerateInput("lipschitz_modulus needs at least two points");
  double modulus = 0.0;
  for (std::size_t p = 0; p < points.size(); ++p)
    for (std::size_t q = p + 1; q < points.size(); ++q) {
      const double d = distance(metric, points[p], points[q]);
      if (d == 0.0) throw DegenerateInput("duplicate points in lipschitz_modulus");
      modulus = std::max(modulus, std::abs(values[p] - values[q]) / d);
    }
  return modulus;
}

void validate_plan(const TransportPlan& plan, const DiscreteMeasure& mu,
                   const DiscreteMeasure& nu, const MetricSpec& metric) {
  if (plan.rows != mu.size() || plan.cols != nu.size())
    throw InvariantViolation("plan shape mismatch");

  int positive = 0;
  double cost = 0.0;
  for (const TransportPlan::Entry& e : plan.flows) {
    if (e.amount < 0.0) throw InvariantViolation("negative flow in plan");
    if (e.amount > 0.0) ++positive;
    cost += e.amount * distance(metric, mu.atoms[e.i], nu.atoms[e.j]);
  }
  if (positive > mu.size() + nu.size() - 1)
    throw InvariantViolation("plan is not a basic solution: " + std::to_string(positive) +
                             " positive flows");
  if (std::abs(cost - plan.cost_value) > tol::kPlanCost)
    throw InvariantViolation("plan cost does not recompute");

  const std::vector<double> rows = plan.row_sums();
  const std::vector<double> cols = plan.col_sums();
  for (int i = 0; i < mu.size(); ++i)
    if (std::abs(rows[i] - mu.weights[i]) > tol::kMarginal)
      throw InvariantViolation("row marginal mismatch");
  for (int j = 0; j < nu.size(); ++j)
    if (std::abs(cols[j] - nu.weights[j]) > tol::kMarginal)
      throw InvariantViolation("column marginal mismatch");
}

}  // namespace condot
