#pragma once

// Shared fixtures and seeded instance generators for the unit and acceptance
// suites. Everything here is deterministic given the Rng seed.

#include <random>
#include <utility>
#include <vector>

#include "condot/duality.hpp"
#include "condot/generator.hpp"
#include "condot/measures.hpp"

namespace condot::testing {

struct Rng {
  explicit Rng(std::uint64_t seed) : eng(seed) {}

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * ((eng() >> 11) * 0x1.0p-53);
  }
  int integer(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(eng() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  bool coin() { return (eng() & 1u) != 0; }

  std::mt19937_64 eng;
};

inline Vec vec1(double a) {
  Vec v(1);
  v << a;
  return v;
}

inline Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

inline Vec random_point(Rng& rng, int dim, double lo = -1.0, double hi = 1.0) {
  Vec p(dim);
  for (int d = 0; d < dim; ++d) p[d] = rng.uniform(lo, hi);
  return p;
}

// Half the instances get equal rational weights (exercising the exact integer
// flow path), the rest generic floating-point weights.
inline std::vector<double> random_weights(Rng& rng, int n) {
  std::vector<double> w(n);
  if (rng.coin()) {
    for (double& x : w) x = 1.0 / n;
  } else {
    double sum = 0.0;
    for (double& x : w) {
      x = rng.uniform(0.05, 1.0);
      sum += x;
    }
    for (double& x : w) x /= sum;
  }
  return w;
}

inline DiscreteMeasure random_measure(Rng& rng, int dim, int max_atoms) {
  const int n = rng.integer(1, max_atoms);
  std::vector<Vec> atoms;
  atoms.reserve(n);
  for (int i = 0; i < n; ++i) atoms.push_back(random_point(rng, dim));
  return make_measure(std::move(atoms), random_weights(rng, n));
}

inline JointMeasure random_joint(Rng& rng, int dim_x, int dim_y, int max_y_atoms,
                                 int max_x_per_y, int min_y_atoms = 1) {
  const int m = rng.integer(min_y_atoms, max_y_atoms);
  std::vector<Vec> xs;
  std::vector<Vec> ys;
  std::vector<double> ws;
  for (int yi = 0; yi < m; ++yi) {
    const Vec y = random_point(rng, dim_y);
    const int nx = rng.integer(1, max_x_per_y);
    for (int xi = 0; xi < nx; ++xi) {
      xs.push_back(random_point(rng, dim_x));
      ys.push_back(y);
      ws.push_back(rng.uniform(0.05, 1.0));
    }
  }
  double sum = 0.0;
  for (double w : ws) sum += w;
  for (double& w : ws) w /= sum;
  return make_joint(std::move(xs), std::move(ys), std::move(ws));
}

inline Eigen::MatrixXd random_matrix(Rng& rng, int rows, int cols, double scale = 1.0) {
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = scale * rng.uniform(-1.0, 1.0);
  return m;
}

inline GeneratorSpec random_affine(Rng& rng, int dim_z, int dim_y, int dim_x) {
  Vec c(dim_x);
  for (int d = 0; d < dim_x; ++d) c[d] = rng.uniform(-0.5, 0.5);
  return make_affine_generator(random_matrix(rng, dim_x, dim_z),
                               random_matrix(rng, dim_x, dim_y), std::move(c));
}

inline GeneratorSpec random_mlp2(Rng& rng, int dim_z, int dim_y, int hidden, int dim_x) {
  std::vector<Eigen::MatrixXd> layers;
  layers.push_back(random_matrix(rng, hidden, dim_z + dim_y));
  layers.push_back(random_matrix(rng, dim_x, hidden));
  const Activation act = rng.coin() ? Activation::Relu : Activation::Tanh;
  return make_mlp_generator(std::move(layers), act, dim_z, dim_y);
}

inline Latent random_discrete_latent(Rng& rng, int dim_z, int max_atoms) {
  return make_discrete_latent(random_measure(rng, dim_z, max_atoms));
}

// y uniform on {0, rho}, pi(x|0) = delta_0, pi(x|rho) = delta_1, while the
// generator swaps: G(0) = delta_1, G(rho) = delta_0. The conditional
// objective is 1, the joint W1 only rho.
struct SwapInstance {
  JointMeasure joint;
  GeneratorSpec generator;
  Latent latent;
};

inline SwapInstance swap_instance(double rho) {
  SwapInstance inst{
      make_joint({vec1(0.0), vec1(1.0)}, {vec1(0.0), vec1(rho)}, {0.5, 0.5}),
      make_affine_generator(Eigen::MatrixXd::Zero(1, 1),
                            Eigen::MatrixXd::Constant(1, 1, -1.0 / rho), vec1(1.0)),
      make_discrete_latent(make_measure({vec1(0.0)}, {1.0}))};
  return inst;
}

// n equally spaced conditions on [0, 1], each with the point conditional
// pi(x|y) = delta_y, and the affine generator G(z, y) = y + 1. F(y) = 1 for
// every y, so the conditional objective is exactly 1.
inline SwapInstance smooth_family(int n) {
  std::vector<Vec> xs;
  std::vector<Vec> ys;
  std::vector<double> ws;
  for (int i = 0; i < n; ++i) {
    const double y = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    xs.push_back(vec1(y));
    ys.push_back(vec1(y));
    ws.push_back(1.0 / n);
  }
  SwapInstance inst{
      make_joint(std::move(xs), std::move(ys), std::move(ws)),
      make_affine_generator(Eigen::MatrixXd::Zero(1, 1), Eigen::MatrixXd::Identity(1, 1),
                            vec1(1.0)),
      make_discrete_latent(make_measure({vec1(0.0)}, {1.0}))};
  return inst;
}

// Conditionals exactly reproducible by the generator: pi(.|y) is the uniform
// two-point law {y - s, y + s} and G(z, y) = z + y with eta uniform on
// {-s, +s}. Every per-condition W1 vanishes.
inline SwapInstance copy_instance(int n_conditions, double s) {
  std::vector<Vec> xs;
  std::vector<Vec> ys;
  std::vector<double> ws;
  for (int i = 0; i < n_conditions; ++i) {
    const double y = static_cast<double>(i);
    xs.push_back(vec1(y - s));
    ys.push_back(vec1(y));
    ws.push_back(0.5 / n_conditions);
    xs.push_back(vec1(y + s));
    ys.push_back(vec1(y));
    ws.push_back(0.5 / n_conditions);
  }
  SwapInstance inst{
      make_joint(std::move(xs), std::move(ys), std::move(ws)),
      make_affine_generator(Eigen::MatrixXd::Identity(1, 1), Eigen::MatrixXd::Identity(1, 1),
                            vec1(0.0)),
      make_discrete_latent(make_measure({vec1(-s), vec1(s)}, {0.5, 0.5}))};
  return inst;
}

}  // namespace condot::testing
