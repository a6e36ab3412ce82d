#pragma once

#include <string>

#include "condot/generator.hpp"
#include "condot/measures.hpp"

namespace condot {

enum class MeasureFormat { Json, Csv };

// JSON: {"dim": n, "atoms": [[c1,...,cn], ...], "weights": [w1, ...]}
// CSV:  header c1,...,cn,weight; one row per atom.
DiscreteMeasure load_measure(const std::string& path, MeasureFormat format);

// Format inferred from the file extension (.json / .csv).
DiscreteMeasure load_measure(const std::string& path);

// {"dim_x": nx, "dim_y": ny, "atoms": [{"x": [...], "y": [...]}, ...], "weights": [...]}
JointMeasure load_joint(const std::string& path);

// {"kind": "affine", "A": [[...]], "B": [[...]], "c": [...]} or
// {"kind": "mlp", "dim_z":, "dim_y":, "activation":, "layers": [[[...]], ...]}
// with row-major (array-of-rows) matrices.
GeneratorSpec load_generator(const std::string& path);

// Discrete latents mirror the measure JSON plus {"kind": "discrete"};
// gaussian: {"kind": "gaussian", "mean": [...], "std": [...], "samples": N, "seed": S}.
// A gaussian spec is realized here, at load time. `seed_override`, when >= 0,
// replaces a missing "seed" field (CLI --seed).
Latent load_latent(const std::string& path, long long seed_override = -1);

// 17-significant-digit JSON; load_measure(save_measure(m)) is bit-identical.
void save_measure(const DiscreteMeasure& m, const std::string& path);

std::string save_measure_json(const DiscreteMeasure& m);

}  // namespace condot
