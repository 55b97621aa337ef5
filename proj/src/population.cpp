#include "nalbn/population.hpp"

#include <algorithm>
#include <cmath>

#include "nalbn/equivalence.hpp"
#include "nalbn/errors.hpp"

namespace nalbn {

namespace {

std::size_t checked_state_count(std::span<const Variable> variables, std::size_t max_states) {
  double states = 1.0;
  for (const auto& v : variables) states *= static_cast<double>(v.cardinality);
  if (states > static_cast<double>(max_states)) throw StateSpaceTooLarge(states, max_states);
  return static_cast<std::size_t>(states);
}

std::vector<std::size_t> cardinalities_of(std::span<const Variable> variables) {
  std::vector<std::size_t> cards;
  for (const auto& v : variables) cards.push_back(v.cardinality);
  return cards;
}

// Advances `values` like an odometer with the last node fastest.
void increment(std::vector<std::int32_t>& values, const std::vector<std::size_t>& cards) {
  for (std::size_t i = cards.size(); i-- > 0;) {
    if (static_cast<std::size_t>(++values[i]) < cards[i]) return;
    values[i] = 0;
  }
}

std::size_t family_config(const std::vector<std::int32_t>& x, std::span<const Variable> variables,
                          const ParentSet& parents) {
  std::size_t j = 0;
  for (auto p : parents) j = j * variables[p].cardinality + static_cast<std::size_t>(x[p]);
  return j;
}

}  // namespace

JointTable::JointTable(std::vector<std::size_t> cardinalities, std::vector<double> probs)
    : cards_(std::move(cardinalities)), probs_(std::move(probs)) {
  std::size_t states = 1;
  for (auto q : cards_) states *= q;
  if (states != probs_.size()) throw TableMismatch("joint table size does not match cardinalities");
}

void JointTable::decode(std::size_t state, std::vector<std::int32_t>& values) const {
  values.resize(cards_.size());
  for (std::size_t i = cards_.size(); i-- > 0;) {
    values[i] = static_cast<std::int32_t>(state % cards_[i]);
    state /= cards_[i];
  }
}

double total_variation(const JointTable& a, const JointTable& b) {
  if (a.cardinalities() != b.cardinalities()) throw TableMismatch("joint tables over different state spaces");
  long double acc = 0.0L;
  for (std::size_t s = 0; s < a.num_states(); ++s) acc += std::abs(static_cast<long double>(a[s]) - b[s]);
  return static_cast<double>(acc / 2.0L);
}

JointTable joint_distribution(const BayesNet& net, std::size_t max_states) {
  const auto& vars = net.variables();
  const auto states = checked_state_count(vars, max_states);
  auto cards = cardinalities_of(vars);
  std::vector<double> probs(states);
  std::vector<std::int32_t> x(vars.size(), 0);
  for (std::size_t s = 0; s < states; ++s) {
    double p = 1.0;
    for (std::size_t i = 0; i < vars.size() && p > 0.0; ++i)
      p *= net.table(i).prob(family_config(x, vars, net.dag().parents(i)), static_cast<std::size_t>(x[i]));
    probs[s] = p;
    increment(x, cards);
  }
  return JointTable(std::move(cards), std::move(probs));
}

FamilyTheta induced_family(const JointTable& joint0, std::span<const Variable> variables, std::size_t node,
                           const ParentSet& parents) {
  FamilyTheta f;
  f.node = node;
  f.parents = parents;
  f.cardinality = variables[node].cardinality;
  f.num_configs = parent_configurations(variables, parents);
  std::vector<long double> mass(f.num_configs * f.cardinality, 0.0L);
  std::vector<std::int32_t> x(variables.size(), 0);
  const auto& cards = joint0.cardinalities();
  for (std::size_t s = 0; s < joint0.num_states(); ++s) {
    const double p = joint0[s];
    if (p > 0.0)
      mass[static_cast<std::size_t>(x[node]) * f.num_configs + family_config(x, variables, parents)] += p;
    increment(x, cards);
  }
  f.theta_ij.assign(f.num_configs, 0.0);
  f.theta_ikj.assign(f.num_configs * f.cardinality, 0.0);
  f.uniform_fill.assign(f.num_configs, false);
  for (std::size_t j = 0; j < f.num_configs; ++j) {
    long double mj = 0.0L;
    for (std::size_t k = 0; k < f.cardinality; ++k) mj += mass[k * f.num_configs + j];
    f.theta_ij[j] = static_cast<double>(mj);
    for (std::size_t k = 0; k < f.cardinality; ++k) {
      if (mj > 0.0L)
        f.theta_ikj[k * f.num_configs + j] = static_cast<double>(mass[k * f.num_configs + j] / mj);
      else
        f.theta_ikj[k * f.num_configs + j] = 1.0 / static_cast<double>(f.cardinality);
    }
    f.uniform_fill[j] = !(mj > 0.0L);
  }
  return f;
}

InducedTable induced_theta_mcar(const Dag& g, const JointTable& joint0, std::span<const Variable> variables,
                                const MissingnessModel& missing) {
  if (g.num_nodes() != variables.size()) throw NodeCountMismatch(g.num_nodes(), variables.size());
  validate_dag(g);
  missing.validate(variables.size());
  InducedTable table;
  for (std::size_t i = 0; i < g.num_nodes(); ++i) {
    auto f = induced_family(joint0, variables, i, g.parents(i));
    std::vector<std::size_t> subset = g.parents(i);
    subset.push_back(i);
    f.theta_i = missing.observation_probability(subset, variables.size());
    table.families.push_back(std::move(f));
  }
  return table;
}

InducedTable induced_theta_mcar(const Dag& g, const BayesNet& net0, const MissingnessModel& missing,
                                std::size_t max_states) {
  return induced_theta_mcar(g, joint_distribution(net0, max_states), net0.variables(), missing);
}

JointTable induced_joint(const Dag& g, const BayesNet& net0, std::size_t max_states) {
  const auto& vars = net0.variables();
  if (g.num_nodes() != vars.size()) throw NodeCountMismatch(g.num_nodes(), vars.size());
  validate_dag(g);
  const auto joint0 = joint_distribution(net0, max_states);
  std::vector<FamilyTheta> families;
  for (std::size_t i = 0; i < g.num_nodes(); ++i) families.push_back(induced_family(joint0, vars, i, g.parents(i)));
  std::vector<double> probs(joint0.num_states());
  std::vector<std::int32_t> x(vars.size(), 0);
  for (std::size_t s = 0; s < probs.size(); ++s) {
    double p = 1.0;
    for (std::size_t i = 0; i < vars.size() && p > 0.0; ++i)
      p *= families[i].conditional(static_cast<std::size_t>(x[i]), family_config(x, vars, g.parents(i)));
    probs[s] = p;
    increment(x, joint0.cardinalities());
  }
  return JointTable(joint0.cardinalities(), std::move(probs));
}

double family_population_nal(const FamilyTheta& family) {
  long double acc = 0.0L;
  for (std::size_t j = 0; j < family.num_configs; ++j) {
    const double w = family.theta_ij[j];
    if (w <= 0.0) continue;
    long double inner = 0.0L;
    for (std::size_t k = 0; k < family.cardinality; ++k) {
      const long double t = family.conditional(k, j);
      if (t > 0.0L) inner += t * std::log(t);
    }
    acc += w * inner;
  }
  return static_cast<double>(acc);
}

double population_nal(const Dag& g, const InducedTable& table) {
  if (table.families.size() != g.num_nodes())
    throw TableMismatch("induced table has " + std::to_string(table.families.size()) + " families for " +
                        std::to_string(g.num_nodes()) + " nodes");
  long double total = 0.0L;
  for (std::size_t i = 0; i < g.num_nodes(); ++i) {
    const auto& f = table.families[i];
    if (f.node != i || f.parents != g.parents(i))
      throw TableMismatch("induced table family " + std::to_string(i) + " does not match the dag's parent set");
    total += family_population_nal(f);
  }
  return static_cast<double>(total);
}

std::vector<std::size_t> IdentifiabilityReport::minimal_maximizers() const {
  std::vector<std::size_t> out;
  for (std::size_t e = 0; e < entries.size(); ++e)
    if (entries[e].minimal_maximizer) out.push_back(e);
  return out;
}

IdentifiabilityReport check_identifiability(const BayesNet& net0, std::span<const Dag> candidates,
                                            const MissingnessModel& missing, std::size_t max_states) {
  const auto& vars = net0.variables();
  const auto joint0 = joint_distribution(net0, max_states);
  IdentifiabilityReport report;
  report.truth_nal = population_nal(net0.dag(), induced_theta_mcar(net0.dag(), joint0, vars, missing));
  report.max_nal = -std::numeric_limits<double>::infinity();
  for (const auto& g : candidates) {
    IdentifiabilityEntry e;
    e.dag = g;
    e.population_nal = population_nal(g, induced_theta_mcar(g, joint0, vars, missing));
    e.df = df_complexity(g, vars);
    e.contains_truth = is_subgraph(net0.dag(), g);
    report.max_nal = std::max(report.max_nal, e.population_nal);
    report.entries.push_back(std::move(e));
  }
  for (auto& e : report.entries) e.maximizer = e.population_nal >= report.max_nal - kNalEqualityTolerance;
  for (auto& e : report.entries) {
    if (!e.maximizer) continue;
    e.minimal_maximizer = std::none_of(report.entries.begin(), report.entries.end(), [&](const auto& other) {
      return other.maximizer && other.dag != e.dag && is_subgraph(other.dag, e.dag);
    });
  }

  report.satisfies_definition = std::all_of(report.entries.begin(), report.entries.end(), [&](const auto& e) {
    return e.contains_truth ? e.population_nal <= report.truth_nal + kNalEqualityTolerance
                            : e.population_nal < report.truth_nal - kNalEqualityTolerance;
  });
  const auto minimal = report.minimal_maximizers();
  report.truth_identified = minimal.size() == 1 && report.entries[minimal.front()].dag == net0.dag();
  report.class_identified = !minimal.empty() && std::all_of(minimal.begin(), minimal.end(), [&](std::size_t idx) {
    return dags_equivalent(report.entries[idx].dag, net0.dag());
  });
  report.beta = candidates.empty() ? 1.0 : beta_of_collection(candidates, missing);
  return report;
}

double beta_of_collection(std::span<const Dag> candidates, const MissingnessModel& missing) {
  if (candidates.empty()) throw InvalidArgument("beta of an empty candidate collection");
  const auto num_nodes = candidates.front().num_nodes();
  missing.validate(num_nodes);
  double beta = 2.0;
  for (const auto& g : candidates) {
    if (g.num_nodes() != num_nodes) throw NodeCountMismatch(g.num_nodes(), num_nodes);
    for (std::size_t i = 0; i < num_nodes; ++i) {
      std::vector<std::size_t> subset = g.parents(i);
      subset.push_back(i);
      const double theta = missing.observation_probability(subset, num_nodes);
      if (theta > 0.0) beta = std::min(beta, theta);
    }
  }
  return beta > 1.0 ? 0.0 : beta;
}

}  // namespace nalbn
