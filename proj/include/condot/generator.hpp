#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "condot/measures.hpp"

namespace condot {

// Latent distribution eta over R^{n_z}. A gaussian spec is realized once, at
// load time, into a fixed-seed equal-weight sample set and treated as
// discrete from then on; all downstream expectations are exact conditional on
// that realization.
struct Latent {
  enum class Kind { Discrete, Gaussian };

  Kind kind = Kind::Discrete;
  DiscreteMeasure measure;  // realized support
  // gaussian provenance, kept for config echo
  std::uint64_t seed = 0;
  int sample_count = 0;

  int dim() const { return measure.dim(); }
};

Latent make_discrete_latent(DiscreteMeasure measure);

// Deterministic Box-Muller realization on top of mt19937_64: same seed and
// sample_count give a bit-identical sample set.
Latent realize_gaussian_latent(const Vec& mean, const Vec& std_dev, int sample_count,
                               std::uint64_t seed);

enum class Activation { Relu, Tanh, Identity };

double apply_activation(Activation act, double v);

// G(z, y) = A z + B y + c.
struct AffineGenerator {
  Eigen::MatrixXd A;  // n_x x n_z
  Eigen::MatrixXd B;  // n_x x n_y
  Vec c;              // n_x
};

// Feedforward chain on the concatenated input (z first, then y); the
// activation follows every layer. All listed activations are Lipschitz-1.
struct MlpGenerator {
  std::vector<Eigen::MatrixXd> layers;
  Activation activation = Activation::Relu;
  int dim_z = 0;
  int dim_y = 0;
};

struct GeneratorSpec {
  std::variant<AffineGenerator, MlpGenerator> g;

  bool is_affine() const { return std::holds_alternative<AffineGenerator>(g); }
  int dim_z() const;
  int dim_y() const;
  int dim_x() const;
};

GeneratorSpec make_affine_generator(Eigen::MatrixXd A, Eigen::MatrixXd B, Vec c);
GeneratorSpec make_mlp_generator(std::vector<Eigen::MatrixXd> layers, Activation activation,
                                 int dim_z, int dim_y);

Vec evaluate(const GeneratorSpec& g, const Vec& z, const Vec& y);

// Law of G(z, y) under z ~ eta: images of the latent atoms with weights
// carried over, coincident images merged.
DiscreteMeasure pushforward(const GeneratorSpec& g, const Latent& eta, const Vec& y);

// E_{z~eta} |G(z, y) - G(z, y2)|, euclidean norm, exact on the realized
// latent support.
double assumption3_modulus(const GeneratorSpec& g, const Latent& eta, const Vec& y,
                           const Vec& y2);

// Upper bound L_y with assumption3_modulus(y, y') <= L_y |y - y'|.
// Affine: ||B||_2. Mlp: y-block norm of layer 1 times the product of the
// remaining layer norms (activation constants are all 1).
double lipschitz_bound_y(const GeneratorSpec& g);

// Spectral norm by power iteration: deterministic all-ones start, 1000
// iteration cap, 1e-10 relative tolerance.
double operator_norm(const Eigen::MatrixXd& m);

}  // namespace condot
