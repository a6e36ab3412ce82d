// condot command line: exact conditional-transport objectives, duality
// certificates and covering studies on finitely supported inputs.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "condot/covering.hpp"
#include "condot/duality.hpp"
#include "condot/io.hpp"
#include "condot/report_json.hpp"
#include "condot/tolerances.hpp"
#include "condot/transport.hpp"
#include "condot/version.hpp"

namespace {

using namespace condot;

struct CommonOptions {
  std::string joint_path;
  std::string generator_path;
  std::string latent_path;
  std::string metric = "euclidean";
  std::string product_metric = "sum";
  long long seed = 0;
  int jobs = 1;
  std::string out_path;
  bool emit_witness = false;
  bool emit_plan = false;
  double gap_tol = tol::kDualityGap;
  double lip_tol = tol::kLipschitzSlack;
  double chain_tol = tol::kChainSlack;
};

void add_common_flags(CLI::App* cmd, CommonOptions& opt, bool needs_instance) {
  if (needs_instance) {
    cmd->add_option("--joint", opt.joint_path, "joint measure JSON")->required();
    cmd->add_option("--generator", opt.generator_path, "generator JSON")->required();
    cmd->add_option("--latent", opt.latent_path, "latent JSON")->required();
  }
  cmd->add_option("--metric", opt.metric, "ground metric on X: euclidean|l1");
  cmd->add_option("--product-metric", opt.product_metric, "product metric: sum|euclid");
  cmd->add_option("--seed", opt.seed, "seed for gaussian latents that do not carry one");
  cmd->add_option("--jobs", opt.jobs, "parallel solves (1 = serial)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--out", opt.out_path, "write the report here instead of stdout");
  cmd->add_flag("--emit-witness", opt.emit_witness, "include dual witnesses in the report");
  cmd->add_flag("--emit-plan", opt.emit_plan, "include the transport plan in the report");
  cmd->add_option("--gap-tol", opt.gap_tol, "duality gap tolerance")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--lip-tol", opt.lip_tol, "Lipschitz feasibility tolerance")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--chain-tol", opt.chain_tol, "certificate chain tolerance")
      ->check(CLI::PositiveNumber);
}

ReportValue vec_json(const Vec& v) {
  ReportValue arr = ReportValue::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

ReportValue tool_json() {
  ReportValue t = ReportValue::object();
  t["name"] = kToolName;
  t["version"] = kToolVersion;
  return t;
}

ReportValue tolerances_json(const CommonOptions& opt) {
  ReportValue t = ReportValue::object();
  t["duality_gap"] = opt.gap_tol;
  t["lipschitz_slack"] = opt.lip_tol;
  t["chain_slack"] = opt.chain_tol;
  return t;
}

ReportValue config_json(const CommonOptions& opt) {
  ReportValue c = ReportValue::object();
  if (!opt.joint_path.empty()) c["joint"] = opt.joint_path;
  if (!opt.generator_path.empty()) c["generator"] = opt.generator_path;
  if (!opt.latent_path.empty()) c["latent"] = opt.latent_path;
  c["metric"] = opt.metric;
  c["product_metric"] = opt.product_metric;
  c["seed"] = opt.seed;
  c["jobs"] = opt.jobs;
  return c;
}

void emit(const CommonOptions& opt, const std::string& text) {
  if (opt.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(opt.out_path);
  if (!out) throw ParseError("cannot write '" + opt.out_path + "'");
  out << text;
}

struct Instance {
  JointMeasure joint;
  GeneratorSpec generator;
  Latent latent;
};

Instance load_instance(const CommonOptions& opt) {
  return {load_joint(opt.joint_path), load_generator(opt.generator_path),
          load_latent(opt.latent_path, opt.seed)};
}

Tolerances tolerances(const CommonOptions& opt) {
  Tolerances t;
  t.duality_gap = opt.gap_tol;
  t.lipschitz_slack = opt.lip_tol;
  t.chain_slack = opt.chain_tol;
  return t;
}

int cmd_w1(const CommonOptions& opt, const std::string& mu_path, const std::string& nu_path,
           bool oracle_only) {
  const DiscreteMeasure mu = load_measure(mu_path);
  const DiscreteMeasure nu = load_measure(nu_path);

  ReportValue root = ReportValue::object();
  root["tool"] = tool_json();
  ReportValue cfg = config_json(opt);
  cfg["mu"] = mu_path;
  cfg["nu"] = nu_path;
  root["config"] = std::move(cfg);
  root["tolerances"] = tolerances_json(opt);

  if (oracle_only) {
    root["value"] = w1_1d_oracle(mu, nu);
    emit(opt, root.dump());
    return 0;
  }

  const MetricSpec metric = parse_ground_metric(opt.metric);
  const auto [value, plan] = w1_exact(mu, nu, metric);
  root["value"] = value;

  if (opt.emit_plan) {
    ReportValue pj = ReportValue::object();
    pj["cost"] = plan.cost_value;
    ReportValue entries = ReportValue::array();
    for (const auto& e : plan.flows) {
      ReportValue entry = ReportValue::object();
      entry["i"] = e.i;
      entry["j"] = e.j;
      entry["flow"] = e.amount;
      entries.push_back(std::move(entry));
    }
    pj["entries"] = std::move(entries);
    ReportValue us = ReportValue::array();
    for (double u : plan.source_potentials) us.push_back(u);
    pj["source_potentials"] = std::move(us);
    ReportValue vs = ReportValue::array();
    for (double v : plan.sink_potentials) vs.push_back(v);
    pj["sink_potentials"] = std::move(vs);
    root["plan"] = std::move(pj);
  }
  if (opt.emit_witness) {
    const DualWitness w = dual_witness(mu, nu, plan, metric, tolerances(opt));
    ReportValue wj = ReportValue::object();
    wj["dual_value"] = w.dual_value;
    ReportValue support = ReportValue::array();
    for (std::size_t k = 0; k < w.support_points.size(); ++k) {
      ReportValue row = ReportValue::object();
      row["p"] = vec_json(w.support_points[k]);
      row["value"] = w.values[k];
      support.push_back(std::move(row));
    }
    wj["support"] = std::move(support);
    root["witness"] = std::move(wj);
  }

  emit(opt, root.dump());
  return 0;
}

int cmd_objectives(const CommonOptions& opt, bool corrupt_lhs) {
  const Instance inst = load_instance(opt);
  const MetricSpec metric = parse_ground_metric(opt.metric);
  const ProductMetric pm = parse_product_metric(opt.product_metric);
  ObjectiveReport report =
      objective_report(inst.joint, inst.generator, inst.latent, metric, pm, opt.jobs);

  if (corrupt_lhs) report.lhs_value *= 1.5;  // test hook
  if (std::abs(report.lhs_value - report.rhs_value) > opt.gap_tol)
    throw InvariantViolation("objective report violates |lhs - rhs| <= gap tolerance");

  ReportValue root = ReportValue::object();
  root["tool"] = tool_json();
  root["config"] = config_json(opt);
  root["tolerances"] = tolerances_json(opt);
  root["lhs"] = report.lhs_value;
  root["rhs"] = report.rhs_value;
  root["joint"] = report.joint_value;
  root["gap_conditional_vs_joint"] = report.lhs_value - report.joint_value;

  ReportValue per_y = ReportValue::array();
  for (const auto& t : report.per_y_terms) {
    ReportValue row = ReportValue::object();
    row["index"] = t.y_index;
    row["y"] = vec_json(t.y);
    row["weight"] = t.weight;
    row["w1"] = t.w1;
    per_y.push_back(std::move(row));
  }
  root["per_y"] = std::move(per_y);

  if (opt.emit_witness) {
    ReportValue witness = ReportValue::array();
    for (const auto& w : report.witness) {
      ReportValue row = ReportValue::object();
      row["index"] = w.y_index;
      row["y"] = vec_json(w.y);
      row["weight"] = w.weight;
      row["dual_value"] = w.dual_value;
      ReportValue f = ReportValue::array();
      for (std::size_t k = 0; k < w.x_atoms.size(); ++k) {
        ReportValue fe = ReportValue::object();
        fe["x"] = vec_json(w.x_atoms[k]);
        fe["value"] = w.values[k];
        f.push_back(std::move(fe));
      }
      row["f"] = std::move(f);
      witness.push_back(std::move(row));
    }
    root["witness"] = std::move(witness);
  }

  emit(opt, root.dump());
  return 0;
}

ReportValue certificate_json(const CertificateRecord& cert) {
  ReportValue root = ReportValue::object();
  root["epsilon"] = cert.epsilon;
  root["delta"] = cert.delta;
  root["lhs"] = cert.lhs;
  root["v_deps"] = cert.v_deps;
  root["rhs"] = cert.rhs;
  root["gap"] = cert.gap();
  ReportValue chain = ReportValue::object();
  chain["bound_F_eps"] = cert.bound_f_eps;
  ReportValue slacks = ReportValue::array();
  for (double s : cert.per_k_slacks) slacks.push_back(s);
  chain["per_k_slacks"] = std::move(slacks);
  chain["total_F_bound"] = cert.total_f_bound;
  root["chain"] = std::move(chain);
  root["pass"] = cert.pass;
  return root;
}

int cmd_certify(const CommonOptions& opt, double epsilon) {
  const Instance inst = load_instance(opt);
  const MetricSpec metric = parse_ground_metric(opt.metric);
  const CertificateRecord cert =
      epsilon_certificate(inst.joint, inst.generator, inst.latent, epsilon, metric, opt.jobs);

  ReportValue root = certificate_json(cert);
  root["tool"] = tool_json();
  ReportValue cfg = config_json(opt);
  cfg["epsilon"] = epsilon;
  root["config"] = std::move(cfg);
  root["tolerances"] = tolerances_json(opt);
  emit(opt, root.dump());
  return 0;
}

int cmd_converge(const CommonOptions& opt, const std::string& schedule_text) {
  std::vector<double> schedule;
  std::stringstream ss(schedule_text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      schedule.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw InvalidArgument("schedule entry '" + item + "' is not a number");
    }
  }

  const Instance inst = load_instance(opt);
  const MetricSpec metric = parse_ground_metric(opt.metric);
  const auto rows =
      convergence_study(inst.joint, inst.generator, inst.latent, schedule, metric, opt.jobs);

  std::string csv = "epsilon,delta,lhs,v_deps,gap\n";
  for (const auto& r : rows) {
    csv += ReportValue::format_double(r.epsilon) + "," + ReportValue::format_double(r.delta) +
           "," + ReportValue::format_double(r.lhs) + "," + ReportValue::format_double(r.v_deps) +
           "," + ReportValue::format_double(r.gap()) + "\n";
  }
  emit(opt, csv);
  return 0;
}

int cmd_lemma(const CommonOptions& opt, bool corrupt_f) {
  const Instance inst = load_instance(opt);
  const MetricSpec metric = parse_ground_metric(opt.metric);
  ModulusTables moduli =
      empirical_moduli(inst.joint, inst.generator, inst.latent, metric, opt.jobs);
  if (corrupt_f && !moduli.f.empty()) moduli.f[0] += 10.0;  // test hook

  const std::vector<PairSlack> slacks = lemma1_check(moduli);

  ReportValue root = ReportValue::object();
  root["tool"] = tool_json();
  root["config"] = config_json(opt);
  root["tolerances"] = tolerances_json(opt);
  double min_slack = slacks.empty() ? 0.0 : slacks.front().slack;
  ReportValue pairs = ReportValue::array();
  for (const auto& s : slacks) {
    min_slack = std::min(min_slack, s.slack);
    ReportValue row = ReportValue::object();
    row["i"] = s.i;
    row["j"] = s.j;
    row["slack"] = s.slack;
    pairs.push_back(std::move(row));
  }
  root["pairs"] = std::move(pairs);
  root["min_slack"] = min_slack;
  root["pass"] = true;
  emit(opt, root.dump());
  return 0;
}

int cmd_cover(const CommonOptions& opt, double delta) {
  const JointMeasure joint = load_joint(opt.joint_path);
  const ConditionalTable table = decompose(joint);
  const CoverPartition cover = build_cover(table.y_atoms, delta);

  ReportValue root = ReportValue::object();
  root["tool"] = tool_json();
  ReportValue cfg = config_json(opt);
  cfg["delta"] = delta;
  root["config"] = std::move(cfg);
  root["delta"] = cover.delta;
  root["cell"] = cover.cell;
  ReportValue domain = ReportValue::object();
  domain["low"] = vec_json(cover.domain.low);
  domain["high"] = vec_json(cover.domain.high);
  root["domain"] = std::move(domain);
  ReportValue boxes = ReportValue::array();
  for (const auto& b : cover.boxes) {
    ReportValue row = ReportValue::object();
    row["low"] = vec_json(b.low);
    row["high"] = vec_json(b.high);
    row["representative"] = b.representative;
    ReportValue members = ReportValue::array();
    for (int m : b.members) members.push_back(m);
    row["members"] = std::move(members);
    boxes.push_back(std::move(row));
  }
  root["boxes"] = std::move(boxes);
  emit(opt, root.dump());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact conditional Wasserstein objectives, duality witnesses and "
               "covering certificates on finitely supported measures"};
  app.require_subcommand(1);

  CommonOptions opt;
  std::string mu_path, nu_path, schedule_text;
  double epsilon = 0.0, delta = 0.0;
  bool corrupt_lhs = false, corrupt_f = false;

  CLI::App* w1 = app.add_subcommand("w1", "exact W1 between two measure files");
  w1->add_option("mu", mu_path, "first measure (json or csv)")->required();
  w1->add_option("nu", nu_path, "second measure (json or csv)")->required();
  add_common_flags(w1, opt, false);

  CLI::App* oracle = app.add_subcommand("oracle1d", "1-D CDF oracle for W1");
  oracle->add_option("mu", mu_path, "first measure (1-D)")->required();
  oracle->add_option("nu", nu_path, "second measure (1-D)")->required();
  add_common_flags(oracle, opt, false);

  CLI::App* objectives =
      app.add_subcommand("objectives", "conditional, partial-dual and joint objectives");
  add_common_flags(objectives, opt, true);
  objectives->add_flag("--corrupt-lhs", corrupt_lhs)->group("");

  CLI::App* certify = app.add_subcommand("certify", "epsilon-certificate for the exchange");
  certify->add_option("--epsilon", epsilon, "certificate accuracy")->required();
  add_common_flags(certify, opt, true);

  CLI::App* converge = app.add_subcommand("converge", "certificates along an epsilon schedule");
  converge->add_option("--schedule", schedule_text, "comma-separated decreasing epsilons")
      ->required();
  add_common_flags(converge, opt, true);

  CLI::App* lemma = app.add_subcommand("lemma", "pairwise continuity slack table");
  add_common_flags(lemma, opt, true);
  lemma->add_flag("--corrupt-f", corrupt_f)->group("");

  CLI::App* cover = app.add_subcommand("cover", "box cover of the y-support");
  cover->add_option("--delta", delta, "maximum box diameter")->required();
  cover->add_option("--joint", opt.joint_path, "joint measure JSON")->required();
  add_common_flags(cover, opt, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(w1)) return cmd_w1(opt, mu_path, nu_path, false);
    if (app.got_subcommand(oracle)) return cmd_w1(opt, mu_path, nu_path, true);
    if (app.got_subcommand(objectives)) return cmd_objectives(opt, corrupt_lhs);
    if (app.got_subcommand(certify)) return cmd_certify(opt, epsilon);
    if (app.got_subcommand(converge)) return cmd_converge(opt, schedule_text);
    if (app.got_subcommand(lemma)) return cmd_lemma(opt, corrupt_f);
    if (app.got_subcommand(cover)) return cmd_cover(opt, delta);
  } catch (const condot::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
