#pragma once

#include <string>

#include "condot/measures.hpp"

namespace condot {

// Ground metrics. Euclidean / L1 act on a whole point; the product metrics
// act on concatenated (x, y) points split at `split` coordinates:
//   ProductSum:    d = |x - x'|_2 + |y - y'|_2
//   ProductEuclid: d = |(x,y) - (x',y')|_2
struct MetricSpec {
  enum class Kind { Euclidean, L1, ProductSum, ProductEuclid };

  Kind kind = Kind::Euclidean;
  int split = 0;  // n_x, only meaningful for product metrics

  static MetricSpec euclidean() { return {Kind::Euclidean, 0}; }
  static MetricSpec l1() { return {Kind::L1, 0}; }
  static MetricSpec product_sum(int n_x) { return {Kind::ProductSum, n_x}; }
  static MetricSpec product_euclid(int n_x) { return {Kind::ProductEuclid, n_x}; }

  std::string name() const;
};

double distance(const MetricSpec& metric, const Vec& a, const Vec& b);

// Parses "euclidean" | "l1" (CLI --metric values).
MetricSpec parse_ground_metric(const std::string& name);

}  // namespace condot
