#include "condot/metric.hpp"

namespace condot {

std::string MetricSpec::name() const {
  switch (kind) {
    case Kind::Euclidean: return "euclidean";
    case Kind::L1: return "l1";
    case Kind::ProductSum: return "product-sum";
    case Kind::ProductEuclid: return "product-euclid";
  }
  return "?";
}

double distance(const MetricSpec& metric, const Vec& a, const Vec& b) {
  if (a.size() != b.size())
    throw DimensionMismatch("distance between points of different dimension");
  switch (metric.kind) {
    case MetricSpec::Kind::Euclidean:
    case MetricSpec::Kind::ProductEuclid:
      return (a - b).norm();
    case MetricSpec::Kind::L1:
      return (a - b).lpNorm<1>();
    case MetricSpec::Kind::ProductSum: {
      const int nx = metric.split;
      if (nx <= 0 || nx >= a.size())
        throw DimensionMismatch("product metric split outside point dimension");
      return (a.head(nx) - b.head(nx)).norm() + (a.tail(a.size() - nx) - b.tail(a.size() - nx)).norm();
    }
  }
  return 0.0;
}

MetricSpec parse_ground_metric(const std::string& name) {
  if (name == "euclidean") return MetricSpec::euclidean();
  if (name == "l1") return MetricSpec::l1();
  throw InvalidArgument("unknown metric '" + name + "' (expected euclidean or l1)");
}

}  // namespace condot
