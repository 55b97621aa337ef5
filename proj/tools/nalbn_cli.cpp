// Command-line front end: sampling, masking, scoring, search, population
// analysis, structure comparison and the Monte Carlo experiments.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "nalbn/csv_io.hpp"
#include "nalbn/equivalence.hpp"
#include "nalbn/errors.hpp"
#include "nalbn/experiments.hpp"
#include "nalbn/network_io.hpp"
#include "nalbn/population.hpp"
#include "nalbn/sampling.hpp"
#include "nalbn/scoring.hpp"
#include "nalbn/search.hpp"

using namespace nalbn;

namespace {

constexpr int kExitError = 1;
constexpr int kExitConfig = 2;
constexpr int kExitCheck = 3;

std::string fmt(double v, const char* spec = "%.10g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::size_t index_of(const std::vector<Variable>& vars, const std::string& name) {
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (vars[i].name == name) return i;
  throw ConfigError("unknown variable '" + name + "'");
}

std::string join_names(const ParentSet& parents, const std::vector<Variable>& vars) {
  std::string out;
  for (std::size_t p = 0; p < parents.size(); ++p) out += (p ? ";" : "") + vars[parents[p]].name;
  return out;
}

struct PenaltyOptions {
  std::string kind = "bic";
  double alpha = 0.3;
  double coef = 0.0;  // 0: 1/N

  void add_to(CLI::App* cmd) {
    cmd->add_option("--penalty", kind, "aic, bic, none, power, or power:ALPHA[:COEF]");
    cmd->add_option("--alpha", alpha, "power-law exponent");
    cmd->add_option("--coef", coef, "power-law coefficient (default 1/N)");
  }

  Penalty resolve(std::size_t num_nodes) const {
    const double c = coef > 0.0 ? coef : 1.0 / static_cast<double>(num_nodes);
    if (kind == "power") return Penalty::power_law(c, alpha);
    return Penalty::parse(kind, c);
  }
};

ScoreMode parse_mode(const std::string& s) {
  if (s == "global") return ScoreMode::global;
  if (s == "decomposable") return ScoreMode::decomposable;
  throw ConfigError("--score must be global or decomposable");
}

Dataset load_data(const std::string& path, const std::string& schema_path) {
  if (schema_path.empty()) return read_csv(std::filesystem::path(path));
  const auto schema = load_structure(schema_path);
  return read_csv(std::filesystem::path(path), schema.variables);
}

NodeOrder parse_order(const std::string& text, const std::vector<Variable>& vars) {
  if (text.empty()) return NodeOrder::identity(vars.size());
  std::vector<std::size_t> perm;
  for (const auto& name : split(text, ',')) perm.push_back(index_of(vars, name));
  try {
    return NodeOrder(perm);
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("--order: ") + e.what());
  }
}

// ---- subcommands ----------------------------------------------------------

int cmd_sample(const std::string& net_path, std::size_t n, std::uint64_t seed, const std::string& out) {
  const auto net = resolve_network(net_path);
  const auto data = forward_sample(net, n, Seed{seed});
  if (out.empty() || out == "-")
    write_csv(std::cout, data);
  else
    write_csv(std::filesystem::path(out), data);
  return 0;
}

int cmd_mask(const std::string& data_path, const std::string& schema, const std::string& mode,
             const std::vector<double>& probs, std::size_t k, std::uint64_t seed, const std::string& out) {
  const auto data = load_data(data_path, schema);
  MissingnessModel model;
  if (mode == "bernoulli") {
    if (probs.size() == 1)
      model = MissingnessModel::bernoulli(std::vector<double>(data.num_variables(), probs.front()));
    else
      model = MissingnessModel::bernoulli(probs);
  } else if (mode == "kper") {
    model = MissingnessModel::k_per_record(k);
  } else {
    throw ConfigError("--mode must be bernoulli or kper");
  }
  const auto masked = apply_mcar(data, model, Seed{seed});
  if (out.empty() || out == "-")
    write_csv(std::cout, masked);
  else
    write_csv(std::filesystem::path(out), masked);
  return 0;
}

int cmd_score(const std::string& structure_path, const std::string& data_path, const PenaltyOptions& popt,
              bool decomposable) {
  const auto structure = load_structure(structure_path);
  const auto data = read_csv(std::filesystem::path(data_path), structure.variables);
  const auto penalty = popt.resolve(structure.variables.size());
  std::vector<NodeScore> nodes;
  double total;
  if (decomposable) {
    auto s = score_decomposable(data, structure.dag, penalty);
    nodes = std::move(s.nodes);
    total = s.total;
  } else {
    nodes = score_global_nodes(data, structure.dag, penalty);
    total = score_global(data, structure.dag, penalty);
  }
  std::cout << "node,name,parents,n_i,df,nal,score\n";
  std::uint64_t df_total = 0;
  long double nal_total = 0.0L;
  for (const auto& s : nodes) {
    std::cout << s.node << ',' << structure.variables[s.node].name << ',' << join_names(s.parents, structure.variables)
              << ',' << s.n_i << ',' << s.df << ',' << fmt(s.nal) << ',' << fmt(s.score) << '\n';
    df_total += s.df;
    nal_total += s.nal;
  }
  std::cout << "total,,," << data.num_records() << ',' << df_total << ',' << fmt(static_cast<double>(nal_total))
            << ',' << fmt(total) << '\n';
  return 0;
}

int cmd_learn(const std::string& data_path, const std::string& schema, const std::string& order_text,
              std::size_t max_parents, const PenaltyOptions& popt, const std::string& score,
              const std::string& profile_out, const std::string& out) {
  const auto data = load_data(data_path, schema);
  const auto& vars = data.variables();
  const SearchSpace space{parse_order(order_text, vars), max_parents};
  const auto penalty = popt.resolve(vars.size());
  FamilyScoreTable table(data);
  const Dag learned = learn_structure(table, space, penalty, parse_mode(score));
  if (!profile_out.empty()) {
    const auto profile = complexity_profile(table, space);
    std::ofstream p(profile_out, std::ios::binary);
    if (!p) throw Error("cannot write '" + profile_out + "'");
    p << "t,score,edges\n";
    for (const auto& point : profile) p << point.t << ',' << fmt(point.best_score) << ',' << format_edges(point.dag, vars) << '\n';
  }
  const NetworkStructure result{vars, learned};
  if (out.empty() || out == "-")
    std::cout << structure_to_json(result).dump(2) << '\n';
  else
    save_structure(result, out);
  std::cerr << "df=" << df_complexity(learned, vars) << " edges=" << learned.num_edges() << '\n';
  return 0;
}

std::vector<Dag> read_candidate_list(const std::string& path, std::size_t num_nodes) {
  const auto doc = read_json_file(path);
  std::vector<Dag> out;
  try {
    for (const auto& entry : doc.at("dags")) {
      Dag g(entry.get<std::vector<ParentSet>>());
      if (g.num_nodes() != num_nodes) throw ConfigError("candidate dag with wrong node count in " + path);
      validate_dag(g);
      out.push_back(std::move(g));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("bad candidate list '" + path + "': " + e.what());
  }
  return out;
}

int cmd_population(const std::string& net_path, const std::string& candidates, const std::string& missing_spec,
                   std::size_t max_parents) {
  if (missing_spec.rfind("mar", 0) == 0 || missing_spec.rfind("nmar", 0) == 0)
    throw ConfigError("only MCAR missingness is supported");
  const auto net = resolve_network(net_path);
  MissingnessModel missing;
  try {
    missing = MissingnessModel::parse(missing_spec);
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  std::vector<Dag> dags;
  if (candidates == "order")
    dags = SearchSpace{NodeOrder(topological_order(net.dag())), max_parents}.enumerate();
  else
    dags = read_candidate_list(candidates, net.num_nodes());
  const auto report = check_identifiability(net, dags, missing);
  std::cout << "dag_id,df,population_nal,contains_truth,maximizer,minimal_maximizer,edges\n";
  for (std::size_t i = 0; i < report.entries.size(); ++i) {
    const auto& e = report.entries[i];
    std::cout << i << ',' << e.df << ',' << fmt(e.population_nal, "%.12g") << ',' << e.contains_truth << ','
              << e.maximizer << ',' << e.minimal_maximizer << ',' << format_edges(e.dag, net.variables()) << '\n';
  }
  std::cout << "# beta=" << fmt(report.beta) << '\n';
  std::cout << "# definition_holds=" << (report.satisfies_definition ? "yes" : "no") << '\n';
  std::cout << "# identifiable=" << (report.truth_identified ? "yes" : "no") << '\n';
  std::cout << "# class_identified=" << (report.class_identified ? "yes" : "no") << '\n';
  return 0;
}

int cmd_compare(const std::string& truth_path, const std::string& estimate_path) {
  const auto truth = load_structure(truth_path);
  const auto estimate = load_structure(estimate_path);
  if (truth.variables != estimate.variables) throw SchemaMismatch("truth and estimate have different variables");
  const auto c = compare_edges(truth.dag, estimate.dag);
  std::cout << "precision=" << fmt(c.precision, "%.6f") << '\n'
            << "recall=" << fmt(c.recall, "%.6f") << '\n'
            << "f_score=" << fmt(c.f_score, "%.6f") << '\n'
            << "equivalent=" << (dags_equivalent(truth.dag, estimate.dag) ? "yes" : "no") << '\n';
  return 0;
}

struct ExperimentOverrides {
  std::string config;
  std::size_t jobs = 0;
  bool jobs_set = false;
  std::string out;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::size_t replicates = 0;
  bool check = false;
};

int cmd_experiment(const ExperimentOverrides& o) {
  ExperimentConfig config;
  try {
    config = load_experiment_config(o.config);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if (o.jobs_set) config.jobs = o.jobs;
  if (!o.out.empty()) config.output_dir = o.out;
  if (o.seed_set) config.seed = o.seed;
  if (o.replicates > 0) {
    if (config.two_node) config.two_node->replicates = o.replicates;
    if (config.recovery) config.recovery->replicates = o.replicates;
    if (config.rates) config.rates->replicates = o.replicates;
  }
  const Seed seed{config.seed};
  std::vector<CheckResult> checks;
  if (config.two_node) {
    const auto cells = run_two_node(*config.two_node, seed, config.jobs);
    write_two_node_csv(config.output_dir / "table1.csv", cells);
    if (o.check) for (auto& c : check_two_node(cells)) checks.push_back(std::move(c));
  }
  if (config.recovery) {
    const auto cells = run_recovery(*config.recovery, seed, config.jobs);
    write_recovery_csv(config.output_dir / "recovery.csv", cells);
    if (o.check) for (auto& c : check_recovery(cells)) checks.push_back(std::move(c));
  }
  if (config.rates) {
    const auto rows = run_rate_probe(*config.rates, seed, config.jobs);
    write_rates_csv(config.output_dir / "rates.csv", rows);
    if (o.check) for (auto& c : check_rates(rows)) checks.push_back(std::move(c));
  }
  if (!o.check) return 0;
  checks.push_back(check_q_star_identity(seed, 200));
  bool ok = true;
  for (const auto& c : checks) {
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    ok = ok && c.pass;
  }
  return ok ? 0 : kExitCheck;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structure learning of discrete Bayesian networks with node-average likelihood"};
  app.require_subcommand(1);

  std::string net, data, schema, out, order, score = "decomposable", profile, structure, truth, estimate;
  std::string mode = "bernoulli", candidates = "order", missing = "none";
  std::size_t n = 1000, k = 1, max_parents = 3;
  std::uint64_t seed = 1;
  std::vector<double> probs;
  bool decomposable = false;
  PenaltyOptions popt;
  ExperimentOverrides exp;

  auto* sample = app.add_subcommand("sample", "draw complete records from a network");
  sample->add_option("--net", net, "network file, or two-node / synthetic8")->required();
  sample->add_option("--n", n, "number of records")->required();
  sample->add_option("--seed", seed, "random seed");
  sample->add_option("--out", out, "output CSV (default stdout)");

  auto* mask = app.add_subcommand("mask", "delete cells completely at random");
  mask->add_option("--in,--data", data, "input CSV")->required();
  mask->add_option("--schema", schema, "structure or network file giving the variables");
  mask->add_option("--mode", mode, "bernoulli or kper");
  mask->add_option("--p", probs, "observation probability per variable (one value applies to all)")->delimiter(',');
  mask->add_option("--k", k, "cells deleted per record (kper)");
  mask->add_option("--seed", seed, "random seed");
  mask->add_option("--out", out, "output CSV (default stdout)");

  auto* scorecmd = app.add_subcommand("score", "score a structure against data");
  scorecmd->add_option("--net-structure", structure, "structure or network file")->required();
  scorecmd->add_option("--data", data, "CSV data")->required();
  popt.add_to(scorecmd);
  scorecmd->add_flag("--decomposable", decomposable, "lambda at each node's observed count");

  auto* learn = app.add_subcommand("learn", "exhaustive order-constrained structure search");
  learn->add_option("--data", data, "CSV data")->required();
  learn->add_option("--schema", schema, "structure or network file giving the variables");
  learn->add_option("--order", order, "comma-separated variable names (default: column order)");
  learn->add_option("--max-parents", max_parents, "in-degree bound");
  popt.add_to(learn);
  learn->add_option("--score", score, "decomposable or global");
  learn->add_option("--profile", profile, "write the complexity profile CSV here");
  learn->add_option("--out", out, "output structure file (default stdout)");

  auto* population = app.add_subcommand("population", "population NAL and identifiability report");
  population->add_option("--net", net, "ground-truth network")->required();
  population->add_option("--candidates", candidates, "'order' or a JSON file {\"dags\": [...]}");
  population->add_option("--missing", missing, "none, bernoulli:p1,p2,... or kper:k");
  population->add_option("--max-parents", max_parents, "in-degree bound for 'order'");

  auto* compare = app.add_subcommand("compare", "compare an estimate with the true structure");
  compare->add_option("--truth", truth, "structure file")->required();
  compare->add_option("--estimate", estimate, "structure file")->required();

  auto* experiment = app.add_subcommand("experiment", "run Monte Carlo experiments from a config");
  experiment->add_option("--config", exp.config, "JSON config")->required();
  auto* jobs_opt = experiment->add_option("--jobs", exp.jobs, "worker threads (0: all cores)");
  experiment->add_option("--out", exp.out, "output directory");
  auto* seed_opt = experiment->add_option("--seed", exp.seed, "base seed");
  experiment->add_option("--replicates", exp.replicates, "override every replicate count");
  experiment->add_flag("--check", exp.check, "compare results with reference thresholds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*sample) return cmd_sample(net, n, seed, out);
    if (*mask) return cmd_mask(data, schema, mode, probs, k, seed, out);
    if (*scorecmd) return cmd_score(structure, data, popt, decomposable);
    if (*learn) return cmd_learn(data, schema, order, max_parents, popt, score, profile, out);
    if (*population) return cmd_population(net, candidates, missing, max_parents);
    if (*compare) return cmd_compare(truth, estimate);
    if (*experiment) {
      exp.jobs_set = jobs_opt->count() > 0;
      exp.seed_set = seed_opt->count() > 0;
      return cmd_experiment(exp);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
