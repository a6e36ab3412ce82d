#pragma once

#include <Eigen/Dense>
#include <vector>

#include "condot/errors.hpp"

namespace condot {

using Vec = Eigen::VectorXd;

// Finitely supported probability measure: distinct atoms in R^n with strictly
// positive weights summing to 1. Treat as immutable after construction; every
// operation returns a new value.
struct DiscreteMeasure {
  std::vector<Vec> atoms;
  std::vector<double> weights;

  int dim() const { return atoms.empty() ? 0 : static_cast<int>(atoms.front().size()); }
  int size() const { return static_cast<int>(atoms.size()); }
};

// Weighted atoms (x, y) in R^{n_x} x R^{n_y}. Pairs are pairwise distinct.
struct JointMeasure {
  std::vector<Vec> x_atoms;
  std::vector<Vec> y_atoms;
  std::vector<double> weights;
  int dim_x = 0;
  int dim_y = 0;

  int size() const { return static_cast<int>(weights.size()); }
};

// Disintegration of a JointMeasure: marginal over y plus one conditional
// measure over x per y-atom. y-atoms keep first-appearance order.
struct ConditionalTable {
  std::vector<Vec> y_atoms;
  std::vector<double> y_weights;
  std::vector<DiscreteMeasure> conditionals;

  int size() const { return static_cast<int>(y_atoms.size()); }
};

// Axis-aligned box [low, high].
struct AxisBox {
  Vec low;
  Vec high;

  double diameter() const { return (high - low).norm(); }
  bool contains(const Vec& p) const {
    for (int i = 0; i < p.size(); ++i)
      if (p[i] < low[i] || p[i] > high[i]) return false;
    return true;
  }
};

// Validates, merges bitwise-duplicate atoms (weights summed) and normalizes.
// Normalization is applied iff |sum(w) - 1| <= 1e-6, otherwise InvalidWeights.
// Coordinates must be finite; -0.0 is canonicalized to +0.0 so equality is
// both bitwise and value equality.
DiscreteMeasure make_measure(std::vector<Vec> atoms, std::vector<double> weights);

// Same contract for joint atoms: (x, y) pairs merged on bitwise equality.
JointMeasure make_joint(std::vector<Vec> x_atoms, std::vector<Vec> y_atoms,
                        std::vector<double> weights);

// pi(x, y) -> { pi(y), pi(x|y) }. Recomposition reproduces the joint weights
// to 1e-12 per atom.
ConditionalTable decompose(const JointMeasure& joint);

// Projection onto y with weight aggregation.
DiscreteMeasure marginal_y(const JointMeasure& joint);

// Per-coordinate min/max over the points, widened by `padding` on both sides.
AxisBox bounding_box(const std::vector<Vec>& points, double padding);

// Exact (bitwise) atom equality after -0.0 canonicalization.
bool same_point(const Vec& a, const Vec& b);

// Measure equality up to atom reordering; used by metric-axiom tests.
bool same_measure(const DiscreteMeasure& a, const DiscreteMeasure& b, double weight_tol);

}  // namespace condot
