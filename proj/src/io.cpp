#include "condot/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "condot/report_json.hpp"

namespace condot {

namespace {

using nlohmann::json;

json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
}

Vec to_vec(const json& arr, const std::string& what) {
  if (!arr.is_array()) throw ParseError(what + " must be an array");
  Vec v(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) throw ParseError(what + " has a non-numeric entry");
    v[static_cast<int>(i)] = arr[i].get<double>();
  }
  return v;
}

Eigen::MatrixXd to_matrix(const json& rows, const std::string& what) {
  if (!rows.is_array() || rows.empty()) throw ParseError(what + " must be an array of rows");
  const std::size_t ncols = rows[0].is_array() ? rows[0].size() : 0;
  if (ncols == 0) throw ParseError(what + " rows must be non-empty arrays");
  Eigen::MatrixXd m(rows.size(), ncols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (!rows[r].is_array() || rows[r].size() != ncols)
      throw ParseError(what + " has ragged rows");
    for (std::size_t c = 0; c < ncols; ++c)
      m(static_cast<int>(r), static_cast<int>(c)) = rows[r][c].get<double>();
  }
  return m;
}

std::vector<double> to_weights(const json& arr) {
  if (!arr.is_array()) throw ParseError("weights must be an array");
  std::vector<double> w;
  w.reserve(arr.size());
  for (const auto& e : arr) {
    if (!e.is_number()) throw ParseError("weights must be numeric");
    w.push_back(e.get<double>());
  }
  return w;
}

DiscreteMeasure measure_from_json(const json& j) {
  if (!j.contains("atoms") || !j.contains("weights"))
    throw ParseError("measure needs 'atoms' and 'weights'");
  std::vector<Vec> atoms;
  for (const auto& a : j.at("atoms")) atoms.push_back(to_vec(a, "atom"));
  DiscreteMeasure m = make_measure(std::move(atoms), to_weights(j.at("weights")));
  if (j.contains("dim") && j.at("dim").get<int>() != m.dim())
    throw DimensionMismatch("declared dim does not match the atoms");
  return m;
}

DiscreteMeasure measure_from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::string header;
  if (!std::getline(in, header)) throw ParseError("'" + path + "' is empty");
  if (header.rfind("weight") == std::string::npos)
    throw ParseError("csv header must end with a 'weight' column");

  std::vector<Vec> atoms;
  std::vector<double> weights;
  std::string line;
  int ncols = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    std::vector<double> values;
    while (std::getline(row, cell, ',')) {
      try {
        values.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ParseError("'" + path + "': non-numeric cell '" + cell + "'");
      }
    }
    if (values.size() < 2) throw ParseError("'" + path + "': row needs coordinates and a weight");
    if (ncols < 0) ncols = static_cast<int>(values.size());
    if (static_cast<int>(values.size()) != ncols)
      throw DimensionMismatch("'" + path + "': ragged coordinate rows");
    Vec p(ncols - 1);
    for (int i = 0; i + 1 < ncols; ++i) p[i] = values[i];
    atoms.push_back(std::move(p));
    weights.push_back(values.back());
  }
  return make_measure(std::move(atoms), std::move(weights));
}

}  // namespace

DiscreteMeasure load_measure(const std::string& path, MeasureFormat format) {
  if (format == MeasureFormat::Csv) return measure_from_csv(path);
  return measure_from_json(parse_file(path));
}

DiscreteMeasure load_measure(const std::string& path) {
  const auto dot = path.find_last_of('.');
  const std::string ext = dot == std::string::npos ? "" : path.substr(dot);
  return load_measure(path, ext == ".csv" ? MeasureFormat::Csv : MeasureFormat::Json);
}

JointMeasure load_joint(const std::string& path) {
  const json j = parse_file(path);
  if (!j.contains("atoms") || !j.contains("weights"))
    throw ParseError("joint measure needs 'atoms' and 'weights'");
  std::vector<Vec> xs;
  std::vector<Vec> ys;
  for (const auto& a : j.at("atoms")) {
    if (!a.contains("x") || !a.contains("y"))
      throw ParseError("joint atoms need 'x' and 'y' coordinates");
    xs.push_back(to_vec(a.at("x"), "x atom"));
    ys.push_back(to_vec(a.at("y"), "y atom"));
  }
  JointMeasure m = make_joint(std::move(xs), std::move(ys), to_weights(j.at("weights")));
  if (j.contains("dim_x") && j.at("dim_x").get<int>() != m.dim_x)
    throw DimensionMismatch("declared dim_x does not match the atoms");
  if (j.contains("dim_y") && j.at("dim_y").get<int>() != m.dim_y)
    throw DimensionMismatch("declared dim_y does not match the atoms");
  return m;
}

GeneratorSpec load_generator(const std::string& path) {
  const json j = parse_file(path);
  const std::string kind = j.value("kind", "");
  if (kind == "affine") {
    Eigen::MatrixXd a = to_matrix(j.at("A"), "A");
    Eigen::MatrixXd b = to_matrix(j.at("B"), "B");
    return make_affine_generator(std::move(a), std::move(b), to_vec(j.at("c"), "c"));
  }
  if (kind == "mlp") {
    if (!j.contains("layers")) throw ParseError("mlp generator needs 'layers'");
    std::vector<Eigen::MatrixXd> layers;
    for (const auto& l : j.at("layers")) layers.push_back(to_matrix(l, "layer"));
    const std::string act = j.value("activation", "relu");
    Activation activation;
    if (act == "relu")
      activation = Activation::Relu;
    else if (act == "tanh")
      activation = Activation::Tanh;
    else if (act == "identity")
      activation = Activation::Identity;
    else
      throw ParseError("unknown activation '" + act + "'");
    return make_mlp_generator(std::move(layers), activation, j.at("dim_z").get<int>(),
                              j.at("dim_y").get<int>());
  }
  throw ParseError("generator kind must be 'affine' or 'mlp'");
}

Latent load_latent(const std::string& path, long long seed_override) {
  const json j = parse_file(path);
  const std::string kind = j.value("kind", "discrete");
  if (kind == "discrete") return make_discrete_latent(measure_from_json(j));
  if (kind == "gaussian") {
    const Vec mean = to_vec(j.at("mean"), "mean");
    const Vec std_dev = to_vec(j.at("std"), "std");
    const int samples = j.at("samples").get<int>();
    std::uint64_t seed = 0;
    if (j.contains("seed"))
      seed = j.at("seed").get<std::uint64_t>();
    else if (seed_override >= 0)
      seed = static_cast<std::uint64_t>(seed_override);
    return realize_gaussian_latent(mean, std_dev, samples, seed);
  }
  throw ParseError("latent kind must be 'discrete' or 'gaussian'");
}

std::string save_measure_json(const DiscreteMeasure& m) {
  ReportValue root = ReportValue::object();
  root["dim"] = m.dim();
  ReportValue atoms = ReportValue::array();
  for (const Vec& a : m.atoms) {
    ReportValue row = ReportValue::array();
    for (int d = 0; d < a.size(); ++d) row.push_back(a[d]);
    atoms.push_back(std::move(row));
  }
  root["atoms"] = std::move(atoms);
  ReportValue weights = ReportValue::array();
  for (double w : m.weights) weights.push_back(w);
  root["weights"] = std::move(weights);
  return root.dump();
}

void save_measure(const DiscreteMeasure& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << save_measure_json(m);
}

}  // namespace condot
