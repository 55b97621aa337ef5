#include "nalbn/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "nalbn/em.hpp"
#include "nalbn/equivalence.hpp"
#include "nalbn/errors.hpp"
#include "nalbn/network_io.hpp"
#include "nalbn/sampling.hpp"
#include "nalbn/scoring.hpp"

namespace nalbn {

namespace {

using nlohmann::json;

// Stream tags keep the experiment families on unrelated seeds.
constexpr std::uint64_t kTwoNodeStream = 0x74776f6e6f6465ULL;
constexpr std::uint64_t kRecoveryStream = 0x7265636f76ULL;
constexpr std::uint64_t kRateStream = 0x7261746573ULL;
constexpr std::uint64_t kQStarStream = 0x7173746172ULL;

// Non-commutative nesting of derive_seed.
Seed child(Seed seed, std::uint64_t stream) { return Seed{mix64(derive_seed(seed, stream).value)}; }

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string format_number(double v, const char* fmt) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

double default_coefficient(std::size_t num_nodes) { return 1.0 / static_cast<double>(num_nodes); }

std::vector<Penalty> parse_penalties(const std::vector<std::string>& specs, std::size_t num_nodes) {
  std::vector<Penalty> out;
  for (const auto& s : specs) out.push_back(Penalty::parse(s, default_coefficient(num_nodes)));
  return out;
}

double sample_sd(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  long double mean = 0.0L;
  for (double x : xs) mean += x;
  mean /= static_cast<long double>(xs.size());
  long double ss = 0.0L;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return static_cast<double>(std::sqrt(ss / static_cast<long double>(xs.size() - 1)));
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const auto m = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= m;
  my /= m;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

// beta over every family the search space can produce.
double beta_of_space(const SearchSpace& space, const MissingnessModel& missing) {
  double beta = 2.0;
  for (std::size_t i = 0; i < space.num_nodes(); ++i)
    for (auto subset : space.candidates(i)) {
      subset.push_back(i);
      const double theta = missing.observation_probability(subset, space.num_nodes());
      if (theta > 0.0) beta = std::min(beta, theta);
    }
  return beta > 1.0 ? 0.0 : beta;
}

// ---- config parsing ------------------------------------------------------

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }) == allowed.end())
      throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <class T>
void read_if(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("bad value for '" + std::string(key) + "' in " + where);
  }
}

ScoreMode parse_score(const json& obj, ScoreMode fallback, const std::string& where) {
  std::string s;
  read_if(obj, "score", s, where);
  if (s.empty()) return fallback;
  if (s == "global") return ScoreMode::global;
  if (s == "decomposable") return ScoreMode::decomposable;
  throw ConfigError("score must be 'global' or 'decomposable' in " + where);
}

void check_sizes(const std::vector<std::size_t>& sizes, std::size_t replicates, const std::string& where) {
  if (sizes.empty()) throw ConfigError("sample_sizes is empty in " + where);
  for (auto n : sizes)
    if (n < 1) throw ConfigError("sample sizes must be at least 1 in " + where);
  if (replicates < 1) throw ConfigError("replicates must be at least 1 in " + where);
}

void check_penalties(const std::vector<std::string>& specs, const std::string& where) {
  if (specs.empty()) throw ConfigError("penalties is empty in " + where);
  for (const auto& s : specs) {
    try {
      (void)Penalty::parse(s, 1.0);
    } catch (const InvalidArgument& e) {
      throw ConfigError(std::string(e.what()) + " in " + where);
    }
  }
}

void check_missingness(const std::vector<std::string>& specs, const std::string& where) {
  if (specs.empty()) throw ConfigError("missingness list is empty in " + where);
  for (const auto& s : specs) {
    try {
      (void)MissingnessModel::parse(s);
    } catch (const InvalidArgument& e) {
      throw ConfigError(std::string(e.what()) + " in " + where);
    }
  }
}

TwoNodeConfig parse_two_node(const json& obj) {
  const std::string where = "two_node";
  reject_unknown(obj, {"betas", "sample_sizes", "penalties", "replicates", "score"}, where);
  TwoNodeConfig c;
  read_if(obj, "betas", c.betas, where);
  read_if(obj, "sample_sizes", c.sample_sizes, where);
  read_if(obj, "penalties", c.penalties, where);
  read_if(obj, "replicates", c.replicates, where);
  c.score = parse_score(obj, c.score, where);
  if (c.betas.empty()) throw ConfigError("betas is empty in two_node");
  for (double b : c.betas)
    if (!(b > 0.0 && b <= 1.0)) throw ConfigError("betas must lie in (0, 1] in two_node");
  check_sizes(c.sample_sizes, c.replicates, where);
  check_penalties(c.penalties, where);
  return c;
}

RecoveryConfig parse_recovery(const json& obj) {
  const std::string where = "recovery";
  reject_unknown(obj, {"network", "sample_sizes", "missingness", "penalties", "max_parents", "replicates", "score"},
                 where);
  RecoveryConfig c;
  read_if(obj, "network", c.network, where);
  read_if(obj, "sample_sizes", c.sample_sizes, where);
  read_if(obj, "missingness", c.missingness, where);
  read_if(obj, "penalties", c.penalties, where);
  read_if(obj, "max_parents", c.max_parents, where);
  read_if(obj, "replicates", c.replicates, where);
  c.score = parse_score(obj, c.score, where);
  check_sizes(c.sample_sizes, c.replicates, where);
  check_penalties(c.penalties, where);
  check_missingness(c.missingness, where);
  return c;
}

RateProbeConfig parse_rates(const json& obj) {
  const std::string where = "rates";
  reject_unknown(obj, {"network", "truth", "alternative", "sample_sizes", "regimes", "replicates"}, where);
  RateProbeConfig c;
  read_if(obj, "network", c.network, where);
  read_if(obj, "truth", c.truth, where);
  read_if(obj, "alternative", c.alternative, where);
  read_if(obj, "sample_sizes", c.sample_sizes, where);
  read_if(obj, "regimes", c.regimes, where);
  read_if(obj, "replicates", c.replicates, where);
  check_sizes(c.sample_sizes, c.replicates, where);
  check_missingness(c.regimes, where);
  return c;
}

// ---- published two-node table ---------------------------------------------

constexpr double kPublishedBetas[] = {1.0, 0.99, 0.95, 0.90, 0.75};
constexpr std::size_t kPublishedSizes[] = {100, 1000, 10000, 100000};
constexpr const char* kPublishedPenalties[] = {"power:0.2", "power:0.3", "power:0.4", "power:0.5", "power:0.6",
                                               "power:0.7", "power:0.8", "bic",       "aic"};
// [n][beta][penalty], percent wrong.
constexpr double kPublished[4][5][9] = {
    {{0.0, 0.0, 0.0, 0.3, 0.9, 3.5, 10.6, 2.8, 16.0},
     {0.0, 0.0, 0.0, 0.5, 1.7, 6.6, 17.0, 4.5, 22.9},
     {0.0, 0.0, 0.2, 0.9, 3.8, 12.8, 24.0, 8.7, 31.2},
     {0.0, 0.0, 0.0, 0.7, 6.9, 16.6, 31.5, 12.5, 37.0},
     {0.0, 0.0, 1.1, 7.0, 18.5, 29.9, 40.2, 27.3, 44.4}},
    {{0.0, 0.0, 0.0, 0.0, 0.0, 0.2, 3.6, 0.7, 13.9},
     {0.0, 0.0, 0.0, 0.0, 0.0, 1.6, 13.3, 2.9, 33.5},
     {0.0, 0.0, 0.0, 0.0, 0.4, 12.1, 28.8, 17.1, 42.0},
     {0.0, 0.0, 0.0, 0.1, 3.6, 19.1, 34.7, 23.0, 43.9},
     {0.0, 0.0, 0.0, 1.9, 15.8, 33.2, 42.4, 36.2, 47.2}},
    {{0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.8, 0.2, 15.0},
     {0.0, 0.0, 0.0, 0.0, 0.0, 2.7, 24.7, 13.9, 44.1},
     {0.0, 0.0, 0.0, 0.0, 1.5, 21.3, 37.7, 31.6, 47.8},
     {0.0, 0.0, 0.0, 0.0, 7.0, 28.9, 41.5, 36.5, 47.5},
     {0.0, 0.0, 0.0, 1.8, 22.3, 41.2, 50.5, 47.3, 53.8}},
    {{0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 17.7},
     {0.0, 0.0, 0.0, 0.0, 0.0, 11.8, 37.8, 35.8, 50.4},
     {0.0, 0.0, 0.0, 0.0, 3.5, 31.3, 44.6, 43.3, 49.8},
     {0.0, 0.0, 0.0, 0.0, 13.1, 36.1, 47.2, 46.0, 50.5},
     {0.0, 0.0, 0.0, 1.0, 21.4, 38.5, 45.5, 45.3, 48.2}},
};

constexpr double kPublishedReplicates = 1000.0;

}  // namespace

// ---- builtin networks ------------------------------------------------------

BayesNet two_node_network() {
  std::vector<Variable> vars{{"X1", 2}, {"X2", 2}};
  Cpt cpt{NodeTable(1, 2, {0.4, 0.6}), NodeTable(1, 2, {0.3, 0.7})};
  return BayesNet(std::move(vars), Dag(2), std::move(cpt));
}

BayesNet synthetic8_network() {
  std::vector<Variable> vars{{"A", 3}, {"B", 2}, {"C", 4}, {"D", 2}, {"E", 3}, {"F", 2}, {"G", 3}, {"H", 2}};
  Dag dag(std::vector<ParentSet>{{}, {0}, {0}, {1, 2}, {3}, {}, {4, 5}, {6}});
  // Each row puts 0.8 on (sum of parent values) mod q and spreads the rest.
  Cpt cpt;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const auto& pa = dag.parents(i);
    const auto q = vars[i].cardinality;
    const auto configs = parent_configurations(vars, pa);
    std::vector<double> probs(configs * q, 0.2 / static_cast<double>(q - 1));
    for (std::size_t j = 0; j < configs; ++j) {
      std::size_t rest = j, sum = 0;
      for (std::size_t p = pa.size(); p-- > 0;) {
        sum += rest % vars[pa[p]].cardinality;
        rest /= vars[pa[p]].cardinality;
      }
      probs[j * q + sum % q] = 0.8;
    }
    cpt.emplace_back(configs, q, std::move(probs));
  }
  return BayesNet(std::move(vars), std::move(dag), std::move(cpt));
}

BayesNet resolve_network(const std::string& name_or_path) {
  if (name_or_path == "two-node") return two_node_network();
  if (name_or_path == "synthetic8") return synthetic8_network();
  return load_network(name_or_path);
}

// ---- config ----------------------------------------------------------------

ExperimentConfig parse_experiment_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown(doc, {"seed", "jobs", "output_dir", "two_node", "recovery", "rates"}, "config");
  ExperimentConfig c;
  read_if(doc, "seed", c.seed, "config");
  read_if(doc, "jobs", c.jobs, "config");
  std::string out;
  read_if(doc, "output_dir", out, "config");
  if (!out.empty()) c.output_dir = out;
  if (doc.contains("two_node")) c.two_node = parse_two_node(doc["two_node"]);
  if (doc.contains("recovery")) c.recovery = parse_recovery(doc["recovery"]);
  if (doc.contains("rates")) c.rates = parse_rates(doc["rates"]);
  if (!c.two_node && !c.recovery && !c.rates) throw ConfigError("config selects no experiment");
  return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_experiment_config(buf.str());
}

// ---- parallel driver -------------------------------------------------------

void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, count);
  if (jobs <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

// ---- two-node study --------------------------------------------------------

std::vector<TwoNodeCell> run_two_node(const TwoNodeConfig& config, Seed seed, std::size_t jobs) {
  const auto net = two_node_network();
  const auto penalties = parse_penalties(config.penalties, net.num_nodes());
  const Seed family = child(seed, kTwoNodeStream);
  std::vector<TwoNodeCell> cells;
  for (double beta : config.betas) {
    const auto missing = MissingnessModel::bernoulli({beta, 1.0});
    for (auto n : config.sample_sizes) {
      const Seed cell_seed = child(child(family, std::bit_cast<std::uint64_t>(beta)), n);
      // wrong[r * P + p]
      std::vector<char> wrong(config.replicates * penalties.size(), 0);
      parallel_for(config.replicates, jobs, [&](std::size_t r) {
        const Seed rs = child(cell_seed, r);
        const auto data = apply_mcar(forward_sample(net, n, derive_seed(rs, 1)), missing, derive_seed(rs, 2));
        const auto x1 = count_sufficient_stats(data, 0, {});
        const auto x2 = count_sufficient_stats(data, 1, {});
        const auto x2_given_x1 = count_sufficient_stats(data, 1, {0});
        const double nal_x1 = node_nal(x1), nal_x2 = node_nal(x2), nal_x2_pa = node_nal(x2_given_x1);
        const auto df_x1 = family_df(net.variables(), 0, {});
        const auto df_x2 = family_df(net.variables(), 1, {});
        const auto df_x2_pa = family_df(net.variables(), 1, {0});
        for (std::size_t p = 0; p < penalties.size(); ++p) {
          double s0, s1;
          if (config.score == ScoreMode::global) {
            s0 = penalized(nal_x1 + nal_x2, df_x1 + df_x2, penalties[p], n);
            s1 = penalized(nal_x1 + nal_x2_pa, df_x1 + df_x2_pa, penalties[p], n);
          } else {
            // The X1 term is shared and cancels.
            s0 = x2.n_i > 0 ? penalized(nal_x2, df_x2, penalties[p], x2.n_i) : kNegInf;
            s1 = x2_given_x1.n_i > 0 ? penalized(nal_x2_pa, df_x2_pa, penalties[p], x2_given_x1.n_i) : kNegInf;
          }
          wrong[r * penalties.size() + p] = s1 > s0;
        }
      });
      for (std::size_t p = 0; p < penalties.size(); ++p) {
        TwoNodeCell cell{beta, n, config.penalties[p], 0, config.replicates, 0.0, 0.0};
        for (std::size_t r = 0; r < config.replicates; ++r) cell.wrong += wrong[r * penalties.size() + p];
        const double frac = static_cast<double>(cell.wrong) / static_cast<double>(cell.replicates);
        cell.wrong_pct = 100.0 * frac;
        cell.mc_se = 100.0 * std::sqrt(frac * (1.0 - frac) / static_cast<double>(cell.replicates));
        cells.push_back(std::move(cell));
      }
    }
  }
  return cells;
}

// ---- recovery study --------------------------------------------------------

std::vector<RecoveryCell> run_recovery(const RecoveryConfig& config, Seed seed, std::size_t jobs) {
  const auto net = resolve_network(config.network);
  const auto& truth = net.dag();
  const auto true_df = df_complexity(truth, net.variables());
  const SearchSpace space{NodeOrder(topological_order(truth)), config.max_parents};
  const auto penalties = parse_penalties(config.penalties, net.num_nodes());
  const Seed family = child(seed, kRecoveryStream);

  struct Outcome {
    double f = 0.0;
    double df = 0.0;
    bool recovered = false;
  };
  std::vector<RecoveryCell> cells;
  for (const auto& spec : config.missingness) {
    const auto missing = MissingnessModel::parse(spec);
    missing.validate(net.num_nodes());
    const double beta = beta_of_space(space, missing);
    for (auto n : config.sample_sizes) {
      const Seed cell_seed = child(child(family, fnv1a(spec)), n);
      std::vector<Outcome> outcomes(config.replicates * penalties.size());
      parallel_for(config.replicates, jobs, [&](std::size_t r) {
        const Seed rs = child(cell_seed, r);
        const auto data = apply_mcar(forward_sample(net, n, derive_seed(rs, 1)), missing, derive_seed(rs, 2));
        FamilyScoreTable table(data);
        std::vector<ProfilePoint> profile;
        if (config.score == ScoreMode::global) profile = complexity_profile(table, space);
        for (std::size_t p = 0; p < penalties.size(); ++p) {
          const Dag learned = config.score == ScoreMode::global
                                  ? select_from_profile(profile, penalties[p], n).dag
                                  : learn_structure(table, space, penalties[p], ScoreMode::decomposable);
          outcomes[r * penalties.size() + p] = Outcome{edge_f_score(truth, learned),
                                                       static_cast<double>(df_complexity(learned, net.variables())),
                                                       learned == truth};
        }
      });
      for (std::size_t p = 0; p < penalties.size(); ++p) {
        RecoveryCell cell;
        cell.n = n;
        cell.missingness = spec;
        cell.beta = beta;
        cell.penalty = config.penalties[p];
        cell.true_df = true_df;
        cell.replicates = config.replicates;
        for (std::size_t r = 0; r < config.replicates; ++r) {
          const auto& o = outcomes[r * penalties.size() + p];
          cell.mean_f += o.f;
          cell.mean_df += o.df;
          cell.recovery_rate += o.recovered ? 1.0 : 0.0;
        }
        const auto reps = static_cast<double>(config.replicates);
        cell.mean_f /= reps;
        cell.mean_df /= reps;
        cell.recovery_rate /= reps;
        cells.push_back(std::move(cell));
      }
    }
  }
  return cells;
}

// ---- rate probe ------------------------------------------------------------

std::vector<RateRow> run_rate_probe(const RateProbeConfig& config, Seed seed, std::size_t jobs) {
  if (config.sample_sizes.size() < 2)
    throw InsufficientGrid("rate probe needs at least two sample sizes, got " +
                           std::to_string(config.sample_sizes.size()));
  const auto net = resolve_network(config.network);
  const auto num_nodes = net.num_nodes();
  const Dag truth = config.truth.empty() ? net.dag() : Dag(config.truth);
  Dag alternative;
  if (config.alternative.empty()) {
    if (num_nodes < 2 || truth.has_edge(0, 1)) throw ConfigError("no default alternative: give 'alternative'");
    auto pa = truth.parents(1);
    pa.push_back(0);
    alternative = truth.with_parents(1, pa);
  } else {
    alternative = Dag(config.alternative);
  }
  for (const Dag* g : std::initializer_list<const Dag*>{&truth, &alternative}) {
    if (g->num_nodes() != num_nodes) throw ConfigError("rate probe structure does not match the network");
    try {
      validate_dag(*g);
    } catch (const Error& e) {
      throw ConfigError(std::string("rate probe structure: ") + e.what());
    }
  }
  if (!is_subgraph(truth, alternative) || truth == alternative)
    throw ConfigError("rate probe alternative must strictly contain the truth");

  const Seed family = child(seed, kRateStream);
  std::vector<RateRow> rows;
  for (const auto& regime : config.regimes) {
    const auto missing = MissingnessModel::parse(regime);
    missing.validate(num_nodes);
    std::vector<double> log_n, log_sd;
    const auto first = rows.size();
    for (auto n : config.sample_sizes) {
      const Seed cell_seed = child(child(family, fnv1a(regime)), n);
      std::vector<double> diffs(config.replicates);
      parallel_for(config.replicates, jobs, [&](std::size_t r) {
        const Seed rs = child(cell_seed, r);
        const auto data = apply_mcar(forward_sample(net, n, derive_seed(rs, 1)), missing, derive_seed(rs, 2));
        diffs[r] = nal(data, alternative) - nal(data, truth);
      });
      const double sd = sample_sd(diffs);
      rows.push_back(RateRow{regime, n, sd, 0.0});
      log_n.push_back(std::log(static_cast<double>(n)));
      log_sd.push_back(std::log(sd));
    }
    const double slope = ls_slope(log_n, log_sd);
    for (auto i = first; i < rows.size(); ++i) rows[i].slope = slope;
  }
  return rows;
}

// ---- CSV -------------------------------------------------------------------

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  return out;
}

}  // namespace

void write_two_node_csv(const std::filesystem::path& path, std::span<const TwoNodeCell> cells) {
  auto out = open_output(path);
  out << "beta,n,penalty,wrong_pct,mc_se\n";
  for (const auto& c : cells)
    out << format_number(c.beta, "%g") << ',' << c.n << ',' << c.penalty << ',' << format_number(c.wrong_pct, "%.1f")
        << ',' << format_number(c.mc_se, "%.2f") << '\n';
}

void write_recovery_csv(const std::filesystem::path& path, std::span<const RecoveryCell> cells) {
  auto out = open_output(path);
  out << "n,beta,penalty,mean_f,mean_df,recovery_rate\n";
  for (const auto& c : cells)
    out << c.n << ',' << format_number(c.beta, "%.4f") << ',' << c.penalty << ',' << format_number(c.mean_f, "%.4f")
        << ',' << format_number(c.mean_df, "%.2f") << ',' << format_number(c.recovery_rate, "%.3f") << '\n';
}

void write_rates_csv(const std::filesystem::path& path, std::span<const RateRow> rows) {
  auto out = open_output(path);
  out << "regime,n,sd,slope\n";
  for (const auto& r : rows)
    out << r.regime << ',' << r.n << ',' << format_number(r.sd, "%.6e") << ',' << format_number(r.slope, "%.4f")
        << '\n';
}

// ---- checks ----------------------------------------------------------------

std::optional<double> published_wrong_pct(double beta, std::size_t n, const std::string& penalty) {
  std::optional<std::size_t> bi, ni, pi;
  for (std::size_t i = 0; i < std::size(kPublishedBetas); ++i)
    if (std::abs(kPublishedBetas[i] - beta) < 1e-12) bi = i;
  for (std::size_t i = 0; i < std::size(kPublishedSizes); ++i)
    if (kPublishedSizes[i] == n) ni = i;
  for (std::size_t i = 0; i < std::size(kPublishedPenalties); ++i)
    if (penalty == kPublishedPenalties[i]) pi = i;
  if (!bi || !ni || !pi) return std::nullopt;
  return kPublished[*ni][*bi][*pi];
}

std::vector<CheckResult> check_two_node(std::span<const TwoNodeCell> cells) {
  std::vector<CheckResult> out;
  const std::vector<std::string> gated{"aic", "bic", "power:0.2", "power:0.3", "power:0.4"};
  std::size_t compared = 0, failed = 0;
  std::string failures;
  for (const auto& c : cells) {
    if (c.n != 100 && c.n != 100000) continue;
    if (std::find(gated.begin(), gated.end(), c.penalty) == gated.end()) continue;
    const auto ref = published_wrong_pct(c.beta, c.n, c.penalty);
    if (!ref) continue;
    ++compared;
    const double p = *ref / 100.0;
    const double tol = 100.0 * 3.0 * std::sqrt(p * (1.0 - p) / kPublishedReplicates);
    const bool ok = *ref == 0.0 ? c.wrong_pct <= 0.5 : std::abs(c.wrong_pct - *ref) <= tol;
    if (!ok) {
      ++failed;
      failures += " [beta=" + format_number(c.beta, "%g") + " n=" + std::to_string(c.n) + " " + c.penalty +
                  ": " + format_number(c.wrong_pct, "%.1f") + " vs " + format_number(*ref, "%.1f") + "]";
    }
  }
  out.push_back({"published two-node table", compared > 0 && failed == 0,
                 std::to_string(compared - failed) + "/" + std::to_string(compared) + " cells within tolerance" +
                     failures});

  const TwoNodeCell *small = nullptr, *large = nullptr;
  for (const auto& c : cells)
    if (c.penalty == "bic" && std::abs(c.beta - 0.99) < 1e-12) {
      if (c.n == 100) small = &c;
      if (c.n == 100000) large = &c;
    }
  if (small && large)
    out.push_back({"bic growth at beta 0.99", large->wrong_pct > small->wrong_pct && large->wrong_pct > 25.0,
                   format_number(small->wrong_pct, "%.1f") + " -> " + format_number(large->wrong_pct, "%.1f")});

  std::size_t power_cells = 0, power_bad = 0;
  for (const auto& c : cells)
    if (c.penalty == "power:0.3") {
      ++power_cells;
      if (c.wrong_pct > 0.5) ++power_bad;
    }
  if (power_cells > 0)
    out.push_back({"power:0.3 consistency", power_bad == 0,
                   std::to_string(power_cells - power_bad) + "/" + std::to_string(power_cells) + " cells <= 0.5%"});
  return out;
}

std::vector<CheckResult> check_rates(std::span<const RateRow> rows) {
  std::vector<CheckResult> out;
  std::map<std::string, double> slopes;
  for (const auto& r : rows) slopes[r.regime] = r.slope;
  for (const auto& [regime, slope] : slopes) {
    const double target = MissingnessModel::parse(regime).is_complete() ? -1.0 : -0.5;
    out.push_back({"rate slope " + regime, std::abs(slope - target) <= 0.15,
                   format_number(slope, "%.3f") + " (target " + format_number(target, "%.1f") + ")"});
  }
  return out;
}

std::vector<CheckResult> check_recovery(std::span<const RecoveryCell> cells) {
  std::vector<CheckResult> out;
  std::map<std::string, std::vector<const RecoveryCell*>> bic, power;
  for (const auto& c : cells) {
    if (c.penalty == "bic" && !MissingnessModel::parse(c.missingness).is_complete() && c.n >= 10000)
      bic[c.missingness].push_back(&c);
    if (c.penalty == "power:0.3") power[c.missingness].push_back(&c);
  }
  for (auto& [spec, list] : bic) {
    std::sort(list.begin(), list.end(), [](auto a, auto b) { return a->n < b->n; });
    bool ok = true;
    std::string detail;
    for (std::size_t i = 0; i < list.size(); ++i) {
      const double gap = list[i]->mean_df - static_cast<double>(list[i]->true_df);
      ok = ok && gap > 0.0;
      if (i > 0) ok = ok && gap > list[i - 1]->mean_df - static_cast<double>(list[i - 1]->true_df);
      detail += (i ? ", " : "") + std::string("n=") + std::to_string(list[i]->n) + " gap " + format_number(gap, "%.2f");
    }
    out.push_back({"bic overshoot " + spec, ok && list.size() >= 2, detail});
  }
  for (auto& [spec, list] : power) {
    const auto* top = *std::max_element(list.begin(), list.end(), [](auto a, auto b) { return a->n < b->n; });
    const double gap = top->mean_df - static_cast<double>(top->true_df);
    out.push_back({"power:0.3 df " + spec, std::abs(gap) <= 1.0,
                   "n=" + std::to_string(top->n) + " gap " + format_number(gap, "%.2f")});
  }
  return out;
}

CheckResult check_q_star_identity(Seed seed, std::size_t cases) {
  Rng rng(child(seed, kQStarStream));
  std::size_t done = 0, attempts = 0;
  double worst = 0.0;
  while (done < cases && attempts < cases * 100) {
    ++attempts;
    const std::size_t nodes = 2 + rng.below(3);
    std::vector<Variable> vars;
    for (std::size_t i = 0; i < nodes; ++i) vars.push_back({"V" + std::to_string(i), 2 + rng.below(2)});
    std::vector<ParentSet> parents(nodes);
    for (std::size_t i = 1; i < nodes; ++i)
      for (std::size_t p = 0; p < i; ++p)
        if (rng.below(2) == 1) parents[i].push_back(p);
    const Dag dag(parents);
    const std::size_t n = 60 + rng.below(200);
    std::vector<std::vector<Cell>> columns(nodes, std::vector<Cell>(n));
    for (std::size_t i = 0; i < nodes; ++i)
      for (auto& cell : columns[i])
        cell = rng.uniform() < 0.2 ? kMissing : static_cast<Cell>(rng.below(vars[i].cardinality));
    const Dataset data(vars, std::move(columns));
    const auto counts = family_counts(data, dag);
    bool positive = true;
    for (const auto& c : counts)
      for (auto nj : c.n_ij) positive = positive && nj > 0;
    if (!positive) continue;
    const double expected = static_cast<double>(n) * nal(data, dag);
    const double got = q_star(q_star_input_at_maximizer(counts));
    worst = std::max(worst, std::abs(got - expected));
    ++done;
  }
  return {"q_star identity", done == cases && worst <= 1e-9,
          std::to_string(done) + " cases, max |Q* - n*nal| = " + format_number(worst, "%.3e")};
}

}  // namespace nalbn
