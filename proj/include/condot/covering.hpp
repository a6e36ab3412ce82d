#pragma once

#include <vector>

#include "condot/duality.hpp"
#include "condot/generator.hpp"
#include "condot/measures.hpp"
#include "condot/metric.hpp"

namespace condot {

// Disjoint half-open grid boxes [low + i*h, low + (i+1)*h) covering the
// y-support; each retained box holds the support atoms it contains and a
// representative (the member with the lowest support index).
struct CoverPartition {
  struct BoxEntry {
    long long flat_index = 0;
    Vec low;                   // inclusive
    Vec high;                  // exclusive
    int representative = -1;   // index into the y-support
    std::vector<int> members;  // support indices, ascending
  };

  AxisBox domain;
  double delta = 0.0;               // requested max diameter
  double cell = 0.0;                // grid step h, with h * sqrt(dim) < delta
  std::vector<long long> cells;     // per-axis cell counts
  std::vector<BoxEntry> boxes;      // sorted by flat_index

  // Index of the retained box containing y, or -1 when y lies outside every
  // retained box (where the assembled discriminator is 0).
  int locate(const Vec& y) const;
};

CoverPartition build_cover(const std::vector<Vec>& y_support, double delta);

// Pairwise continuity data measured exactly on the finite support:
//   cond_w1(i, j) = W1(pi(.|y_i), pi(.|y_j))
//   gen_mod(i, j) = E_z |G(z, y_i) - G(z, y_j)|
//   f[i]          = W1(G(y_i), pi(.|y_i))
struct ModulusTables {
  std::vector<Vec> y_atoms;
  std::vector<double> y_weights;
  Eigen::MatrixXd cond_w1;
  Eigen::MatrixXd gen_mod;
  std::vector<double> f;

  int size() const { return static_cast<int>(y_atoms.size()); }
};

ModulusTables empirical_moduli(const JointMeasure& joint, const GeneratorSpec& g,
                               const Latent& eta,
                               const MetricSpec& metric = MetricSpec::euclidean(),
                               int jobs = 1);

struct PairSlack {
  int i = 0;
  int j = 0;
  double slack = 0.0;
};

// |F(y) - F(y')| <= cond_w1(y, y') + gen_mod(y, y') for every pair. The
// inequality is a theorem; slack below -1e-9 raises InvariantViolation.
std::vector<PairSlack> lemma1_check(const ModulusTables& moduli);

// Largest delta in (0, domain diameter] such that every support pair closer
// than delta has F-difference, conditional modulus and generator modulus all
// <= epsilon / 4. Bisection to 1e-6 relative tolerance; the result is always
// positive because every modulus vanishes below the minimum pairwise
// distance.
double select_delta(const ModulusTables& moduli, double epsilon);

// D(x, y) = f_k(x) for the unique box k containing y, and 0 outside all
// boxes. Every f_k is a c-transform over the representative's generated
// support, hence Lipschitz-1 in x by construction.
struct PiecewiseDiscriminator {
  CoverPartition partition;
  MetricSpec metric;
  // per-box dual data: f_k(x) = min_q (d(x, q) - v(q))
  std::vector<std::vector<Vec>> nu_atoms;
  std::vector<std::vector<double>> nu_potentials;
  std::vector<double> rep_dual_values;  // exact per-representative W1
  // f_k tabulated on the union of the members' real and generated supports
  std::vector<std::vector<Vec>> x_atoms;
  std::vector<std::vector<double>> f_values;

  double evaluate_in_box(int box, const Vec& x) const;
  double evaluate(const Vec& x, const Vec& y) const;
};

// One exact solve per representative; the witness is c-transform-extended to
// every x-atom (real or generated) appearing for any member y of the box,
// which preserves Lipschitz-1 exactly. `slack` is the allowed per-box
// suboptimality (epsilon / 4 in the certificate); exact solves satisfy it
// with margin.
PiecewiseDiscriminator build_piecewise_discriminator(
    const JointMeasure& joint, const GeneratorSpec& g, const Latent& eta,
    const CoverPartition& partition, double slack,
    const MetricSpec& metric = MetricSpec::euclidean(), int jobs = 1);

// The instantiated inequality chain of the epsilon-certificate. All slacks
// must clear -1e-7.
struct CertificateRecord {
  double epsilon = 0.0;
  double delta = 0.0;
  double lhs = 0.0;     // E_y[F(y)]
  double v_deps = 0.0;  // value of the assembled piecewise discriminator
  double rhs = 0.0;     // partial dual value (equals lhs up to 1e-7)
  // chain values
  double bound_f_eps = 0.0;          // eps/4 + E_y[F_eps(y)], >= lhs
  std::vector<double> per_k_slacks;  // worst pointwise-bound slack per box
  double total_f_bound = 0.0;        // eps + V(D_eps), >= lhs
  bool pass = false;

  double gap() const { return lhs - v_deps; }
};

// select_delta -> build_cover -> build_piecewise_discriminator, then V(D_eps)
// evaluated exactly and every step of the inequality chain checked, plus the
// verdicts lhs <= V + eps and V <= rhs + 1e-9. A failed verdict raises
// InvariantViolation: the chain is a theorem once delta satisfies the three
// eps/4 conditions.
CertificateRecord epsilon_certificate(const JointMeasure& joint, const GeneratorSpec& g,
                                      const Latent& eta, double epsilon,
                                      const MetricSpec& metric = MetricSpec::euclidean(),
                                      int jobs = 1);

// One certificate per epsilon of a strictly decreasing positive schedule.
std::vector<CertificateRecord> convergence_study(
    const JointMeasure& joint, const GeneratorSpec& g, const Latent& eta,
    const std::vector<double>& epsilon_schedule,
    const MetricSpec& metric = MetricSpec::euclidean(), int jobs = 1);

}  // namespace condot
