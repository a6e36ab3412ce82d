#include "condot/generator.hpp"

#include <cmath>
#include <random>
#include <string>

namespace condot {

Latent make_discrete_latent(DiscreteMeasure measure) {
  Latent out;
  out.kind = Latent::Kind::Discrete;
  out.measure = std::move(measure);
  return out;
}

Latent realize_gaussian_latent(const Vec& mean, const Vec& std_dev, int sample_count,
                               std::uint64_t seed) {
  if (mean.size() != std_dev.size())
    throw DimensionMismatch("gaussian latent mean and std dimensions differ");
  if (sample_count < 1) throw InvalidArgument("gaussian latent needs sample_count >= 1");
  for (int i = 0; i < std_dev.size(); ++i)
    if (!(std_dev[i] > 0.0)) throw InvalidArgument("gaussian latent std must be positive");

  // Explicit Box-Muller on mt19937_64 words; std::normal_distribution is
  // implementation-defined and would not be reproducible across toolchains.
  std::mt19937_64 rng(seed);
  auto unit = [&rng]() { return (rng() >> 11) * 0x1.0p-53; };  // [0, 1)
  const double two_pi = 2.0 * 3.141592653589793238462643383279502884;

  const int dim = static_cast<int>(mean.size());
  std::vector<Vec> atoms;
  atoms.reserve(sample_count);
  double pending = 0.0;
  bool has_pending = false;
  for (int s = 0; s < sample_count; ++s) {
    Vec z(dim);
    for (int d = 0; d < dim; ++d) {
      double g;
      if (has_pending) {
        g = pending;
        has_pending = false;
      } else {
        const double u1 = 1.0 - unit();  // (0, 1]
        const double u2 = unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        g = r * std::cos(two_pi * u2);
        pending = r * std::sin(two_pi * u2);
        has_pending = true;
      }
      z[d] = mean[d] + std_dev[d] * g;
    }
    atoms.push_back(std::move(z));
  }

  Latent out;
  out.kind = Latent::Kind::Gaussian;
  out.seed = seed;
  out.sample_count = sample_count;
  out.measure = make_measure(std::move(atoms),
                             std::vector<double>(sample_count, 1.0 / sample_count));
  return out;
}

double apply_activation(Activation act, double v) {
  switch (act) {
    case Activation::Relu: return v > 0.0 ? v : 0.0;
    case Activation::Tanh: return std::tanh(v);
    case Activation::Identity: return v;
  }
  return v;
}

int GeneratorSpec::dim_z() const {
  if (is_affine()) return static_cast<int>(std::get<AffineGenerator>(g).A.cols());
  return std::get<MlpGenerator>(g).dim_z;
}

int GeneratorSpec::dim_y() const {
  if (is_affine()) return static_cast<int>(std::get<AffineGenerator>(g).B.cols());
  return std::get<MlpGenerator>(g).dim_y;
}

int GeneratorSpec::dim_x() const {
  if (is_affine()) return static_cast<int>(std::get<AffineGenerator>(g).A.rows());
  return static_cast<int>(std::get<MlpGenerator>(g).layers.back().rows());
}

GeneratorSpec make_affine_generator(Eigen::MatrixXd A, Eigen::MatrixXd B, Vec c) {
  if (A.rows() != B.rows() || A.rows() != c.size())
    throw DimensionMismatch("affine generator: A, B and c row counts differ");
  if (!A.allFinite() || !B.allFinite() || !c.allFinite())
    throw ParseError("affine generator has non-finite entries");
  GeneratorSpec spec;
  spec.g = AffineGenerator{std::move(A), std::move(B), std::move(c)};
  return spec;
}

GeneratorSpec make_mlp_generator(std::vector<Eigen::MatrixXd> layers, Activation activation,
                                 int dim_z, int dim_y) {
  if (layers.empty()) throw ParseError("mlp generator needs at least one layer");
  if (dim_z < 1 || dim_y < 1) throw DimensionMismatch("mlp generator needs dim_z, dim_y >= 1");
  if (layers.front().cols() != dim_z + dim_y)
    throw DimensionMismatch("mlp first layer must act on the concatenated (z, y) input");
  for (std::size_t l = 0; l + 1 < layers.size(); ++l)
    if (layers[l + 1].cols() != layers[l].rows())
      throw DimensionMismatch("mlp layer " + std::to_string(l + 1) + " does not chain");
  for (const auto& w : layers)
    if (!w.allFinite()) throw ParseError("mlp generator has non-finite entries");
  GeneratorSpec spec;
  spec.g = MlpGenerator{std::move(layers), activation, dim_z, dim_y};
  return spec;
}

Vec evaluate(const GeneratorSpec& g, const Vec& z, const Vec& y) {
  if (z.size() != g.dim_z() || y.size() != g.dim_y())
    throw DimensionMismatch("generator input dimensions do not match the spec");
  if (g.is_affine()) {
    const auto& aff = std::get<AffineGenerator>(g.g);
    return aff.A * z + aff.B * y + aff.c;
  }
  const auto& mlp = std::get<MlpGenerator>(g.g);
  Vec h(z.size() + y.size());
  h << z, y;
  for (const Eigen::MatrixXd& w : mlp.layers) {
    Vec pre = w * h;
    for (int i = 0; i < pre.size(); ++i) pre[i] = apply_activation(mlp.activation, pre[i]);
    h = std::move(pre);
  }
  return h;
}

DiscreteMeasure pushforward(const GeneratorSpec& g, const Latent& eta, const Vec& y) {
  std::vector<Vec> images;
  images.reserve(eta.measure.size());
  for (const Vec& z : eta.measure.atoms) images.push_back(evaluate(g, z, y));
  return make_measure(std::move(images), eta.measure.weights);
}

double assumption3_modulus(const GeneratorSpec& g, const Latent& eta, const Vec& y,
                           const Vec& y2) {
  if (y.size() != y2.size()) throw DimensionMismatch("assumption3_modulus y dimensions differ");
  double acc = 0.0;
  for (int i = 0; i < eta.measure.size(); ++i) {
    const Vec a = evaluate(g, eta.measure.atoms[i], y);
    const Vec b = evaluate(g, eta.measure.atoms[i], y2);
    acc += eta.measure.weights[i] * (a - b).norm();
  }
  return acc;
}

double operator_norm(const Eigen::MatrixXd& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  if (m.isZero(0.0)) return 0.0;

  // Power iteration on m^T m, deterministic all-ones start. If the iterate
  // lands in the kernel (the start can be orthogonal to the top singular
  // vector), restart from a basis vector instead of giving up.
  Vec v = Vec::Ones(m.cols());
  v.normalize();
  double sigma = 0.0;
  int basis_restart = 0;
  for (int it = 0; it < 1000; ++it) {
    Vec w = m * v;
    const double norm_w = w.norm();
    if (norm_w == 0.0) {
      if (basis_restart >= m.cols()) return 0.0;
      v = Vec::Unit(m.cols(), basis_restart++);
      continue;
    }
    Vec next = m.transpose() * w;
    const double norm_next = next.norm();
    if (norm_next == 0.0) return norm_w;  // v was already a top pair direction
    next /= norm_next;
    const double sigma_next = (m * next).norm();
    if (it > 0 && std::abs(sigma_next - sigma) <= 1e-10 * std::max(1.0, sigma_next)) {
      return sigma_next;
    }
    sigma = sigma_next;
    v = std::move(next);
  }
  return sigma;
}

double lipschitz_bound_y(const GeneratorSpec& g) {
  if (g.is_affine()) return operator_norm(std::get<AffineGenerator>(g.g).B);
  const auto& mlp = std::get<MlpGenerator>(g.g);
  // y-block of the first layer, then the full norms of the remaining chain;
  // every supported activation is Lipschitz-1.
  double bound = operator_norm(mlp.layers.front().rightCols(mlp.dim_y));
  for (std::size_t l = 1; l < mlp.layers.size(); ++l)
    bound *= operator_norm(mlp.layers[l]);
  return bound;
}

}  // namespace condot
