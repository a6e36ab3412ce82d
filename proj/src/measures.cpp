#include "condot/measures.hpp"

#include <cmath>
#include <cstring>
#include <string>
#include <unordered_map>

#include "condot/tolerances.hpp"

namespace condot {

namespace {

// Bit-pattern key for exact duplicate detection. Coordinates are
// canonicalized before hashing, so +0.0 / -0.0 never split an atom.
std::string point_key(const Vec& p) {
  std::string key(p.size() * sizeof(double), '\0');
  std::memcpy(key.data(), p.data(), key.size());
  return key;
}

void canonicalize(Vec& p, const char* what) {
  for (int i = 0; i < p.size(); ++i) {
    if (!std::isfinite(p[i]))
      throw ParseError(std::string(what) + " has a non-finite coordinate");
    if (p[i] == 0.0) p[i] = 0.0;  // collapse -0.0
  }
}

void check_weights(const std::vector<double>& weights) {
  if (weights.empty()) throw EmptyInput("measure has no atoms");
  double sum = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w)) throw InvalidWeights("non-finite weight");
    if (w < 0.0) throw InvalidWeights("negative weight " + std::to_string(w));
    sum += w;
  }
  if (sum <= 0.0) throw InvalidWeights("all weights are zero");
  if (std::abs(sum - 1.0) > tol::kWeightSumIngest)
    throw InvalidWeights("weight sum " + std::to_string(sum) + " is off by more than 1e-6");
}

void normalize(std::vector<double>& weights) {
  double sum = 0.0;
  for (double w : weights) sum += w;
  // Already-normalized inputs pass through untouched so a save/load round
  // trip is bit-identical.
  if (std::abs(sum - 1.0) <= tol::kWeightSumInternal) return;
  for (double& w : weights) w /= sum;
}

}  // namespace

bool same_point(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) return false;
  for (int i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

DiscreteMeasure make_measure(std::vector<Vec> atoms, std::vector<double> weights) {
  if (atoms.size() != weights.size())
    throw ParseError("atom and weight counts differ");
  check_weights(weights);

  const int dim = atoms.empty() ? 0 : static_cast<int>(atoms.front().size());
  if (dim < 1) throw DimensionMismatch("atoms must have dimension >= 1");

  DiscreteMeasure out;
  std::unordered_map<std::string, int> seen;
  for (std::size_t a = 0; a < atoms.size(); ++a) {
    if (static_cast<int>(atoms[a].size()) != dim)
      throw DimensionMismatch("ragged coordinate rows");
    canonicalize(atoms[a], "atom");
    auto [it, inserted] = seen.emplace(point_key(atoms[a]), out.size());
    if (inserted) {
      out.atoms.push_back(std::move(atoms[a]));
      out.weights.push_back(weights[a]);
    } else {
      out.weights[it->second] += weights[a];
    }
  }

  // Merging can only remove zero-weight duplicates' issue, not create one;
  // drop atoms whose merged weight is still zero.
  DiscreteMeasure kept;
  for (int i = 0; i < out.size(); ++i) {
    if (out.weights[i] > 0.0) {
      kept.atoms.push_back(out.atoms[i]);
      kept.weights.push_back(out.weights[i]);
    }
  }
  if (kept.atoms.empty()) throw InvalidWeights("all weights are zero");
  normalize(kept.weights);
  return kept;
}

JointMeasure make_joint(std::vector<Vec> x_atoms, std::vector<Vec> y_atoms,
                        std::vector<double> weights) {
  if (x_atoms.size() != weights.size() || y_atoms.size() != weights.size())
    throw ParseError("atom and weight counts differ");
  check_weights(weights);
  if (x_atoms.empty()) throw EmptyInput("joint measure has no atoms");

  const int dim_x = static_cast<int>(x_atoms.front().size());
  const int dim_y = static_cast<int>(y_atoms.front().size());
  if (dim_x < 1 || dim_y < 1) throw DimensionMismatch("atoms must have dimension >= 1");

  JointMeasure out;
  out.dim_x = dim_x;
  out.dim_y = dim_y;
  std::unordered_map<std::string, int> seen;
  for (std::size_t a = 0; a < weights.size(); ++a) {
    if (static_cast<int>(x_atoms[a].size()) != dim_x ||
        static_cast<int>(y_atoms[a].size()) != dim_y)
      throw DimensionMismatch("ragged coordinate rows");
    canonicalize(x_atoms[a], "x atom");
    canonicalize(y_atoms[a], "y atom");
    auto [it, inserted] = seen.emplace(point_key(x_atoms[a]) + point_key(y_atoms[a]),
                                       out.size());
    if (inserted) {
      out.x_atoms.push_back(std::move(x_atoms[a]));
      out.y_atoms.push_back(std::move(y_atoms[a]));
      out.weights.push_back(weights[a]);
    } else {
      out.weights[it->second] += weights[a];
    }
  }

  JointMeasure kept;
  kept.dim_x = dim_x;
  kept.dim_y = dim_y;
  for (int i = 0; i < out.size(); ++i) {
    if (out.weights[i] > 0.0) {
      kept.x_atoms.push_back(out.x_atoms[i]);
      kept.y_atoms.push_back(out.y_atoms[i]);
      kept.weights.push_back(out.weights[i]);
    }
  }
  if (kept.weights.empty()) throw InvalidWeights("all weights are zero");
  normalize(kept.weights);
  return kept;
}

ConditionalTable decompose(const JointMeasure& joint) {
  ConditionalTable table;
  std::unordered_map<std::string, int> y_index;
  std::vector<std::vector<Vec>> x_by_y;
  std::vector<std::vector<double>> w_by_y;

  for (int a = 0; a < joint.size(); ++a) {
    auto [it, inserted] = y_index.emplace(point_key(joint.y_atoms[a]),
                                          static_cast<int>(table.y_atoms.size()));
    if (inserted) {
      table.y_atoms.push_back(joint.y_atoms[a]);
      table.y_weights.push_back(0.0);
      x_by_y.emplace_back();
      w_by_y.emplace_back();
    }
    const int yi = it->second;
    table.y_weights[yi] += joint.weights[a];
    x_by_y[yi].push_back(joint.x_atoms[a]);
    w_by_y[yi].push_back(joint.weights[a]);
  }

  for (std::size_t yi = 0; yi < x_by_y.size(); ++yi) {
    DiscreteMeasure cond;
    cond.atoms = std::move(x_by_y[yi]);
    cond.weights = std::move(w_by_y[yi]);
    for (double& w : cond.weights) w /= table.y_weights[yi];
    table.conditionals.push_back(std::move(cond));
  }
  return table;
}

DiscreteMeasure marginal_y(const JointMeasure& joint) {
  DiscreteMeasure out;
  std::unordered_map<std::string, int> seen;
  for (int a = 0; a < joint.size(); ++a) {
    auto [it, inserted] = seen.emplace(point_key(joint.y_atoms[a]), out.size());
    if (inserted) {
      out.atoms.push_back(joint.y_atoms[a]);
      out.weights.push_back(joint.weights[a]);
    } else {
      out.weights[it->second] += joint.weights[a];
    }
  }
  return out;
}

AxisBox bounding_box(const std::vector<Vec>& points, double padding) {
  if (points.empty()) throw EmptyInput("bounding_box over no points");
  if (padding < 0.0) throw InvalidArgument("padding must be non-negative");
  AxisBox box;
  box.low = points.front();
  box.high = points.front();
  for (const Vec& p : points) {
    if (p.size() != box.low.size()) throw DimensionMismatch("mixed point dimensions");
    box.low = box.low.cwiseMin(p);
    box.high = box.high.cwiseMax(p);
  }
  box.low.array() -= padding;
  box.high.array() += padding;
  return box;
}

bool same_measure(const DiscreteMeasure& a, const DiscreteMeasure& b, double weight_tol) {
  if (a.size() != b.size() || a.dim() != b.dim()) return false;
  std::unordered_map<std::string, double> wa;
  for (int i = 0; i < a.size(); ++i) wa[point_key(a.atoms[i])] = a.weights[i];
  for (int i = 0; i < b.size(); ++i) {
    auto it = wa.find(point_key(b.atoms[i]));
    if (it == wa.end() || std::abs(it->second - b.weights[i]) > weight_tol) return false;
  }
  return true;
}

}  // namespace condot
