#include "nalbn/em.hpp"

#include <cmath>
#include <limits>

#include "nalbn/errors.hpp"

namespace nalbn {

namespace {

void check_distribution(std::span<const double> values, std::size_t node, const char* what) {
  long double sum = 0.0L;
  for (double v : values) {
    if (!(v >= 0.0 && v <= 1.0))
      throw NonNormalizedParameters(std::string(what) + " of node " + std::to_string(node) +
                                    " has an entry outside [0, 1]");
    sum += v;
  }
  if (std::abs(static_cast<double>(sum) - 1.0) > kNormalizationTolerance)
    throw NonNormalizedParameters(std::string(what) + " of node " + std::to_string(node) + " does not sum to 1");
}

void check_table(const NodeTable& t, const SufficientCounts& c, const char* what) {
  if (t.num_configs() != c.num_configs || t.cardinality() != c.cardinality)
    throw TableMismatch(std::string(what) + " of node " + std::to_string(c.node) + " has the wrong shape");
  for (std::size_t j = 0; j < t.num_configs(); ++j) check_distribution(t.row(j), c.node, what);
}

}  // namespace

double q_star(const QStarInput& input) {
  long double total = 0.0L;
  bool minus_infinity = false;
  for (const auto& f : input.families) {
    const auto& c = f.counts;
    if (f.reference_config.size() != c.num_configs)
      throw TableMismatch("reference configuration distribution of node " + std::to_string(c.node) +
                          " has the wrong size");
    check_distribution(f.reference_config, c.node, "reference configuration distribution");
    check_table(f.reference, c, "reference table");
    check_table(f.target, c, "target table");
    const auto missing = static_cast<long double>(c.n - c.n_i);
    for (std::size_t j = 0; j < c.num_configs; ++j)
      for (std::size_t k = 0; k < c.cardinality; ++k) {
        const long double w = static_cast<long double>(c.count(k, j)) +
                              missing * f.reference_config[j] * f.reference.prob(j, k);
        if (w == 0.0L) continue;
        const double p = f.target.prob(j, k);
        if (p == 0.0) {
          minus_infinity = true;
          continue;
        }
        total += w * std::log(static_cast<long double>(p));
      }
  }
  if (minus_infinity) return -std::numeric_limits<double>::infinity();
  return static_cast<double>(total);
}

QStarMaximizer q_star_maximizer(std::span<const SufficientCounts> counts) {
  QStarMaximizer out;
  for (const auto& c : counts) {
    if (c.n_i == 0) throw UnobservableNode(c.node);
    std::vector<double> probs(c.num_configs * c.cardinality);
    std::vector<bool> undefined(c.num_configs, false);
    for (std::size_t j = 0; j < c.num_configs; ++j) {
      const auto nj = c.n_ij[j];
      undefined[j] = nj == 0;
      for (std::size_t k = 0; k < c.cardinality; ++k)
        probs[j * c.cardinality + k] = nj == 0 ? 1.0 / static_cast<double>(c.cardinality)
                                               : static_cast<double>(c.count(k, j)) / static_cast<double>(nj);
    }
    out.cpt.emplace_back(c.num_configs, c.cardinality, std::move(probs));
    out.undefined.push_back(std::move(undefined));
  }
  return out;
}

QStarInput q_star_input_at_maximizer(std::span<const SufficientCounts> counts) {
  const auto fitted = q_star_maximizer(counts);
  QStarInput input;
  for (std::size_t f = 0; f < counts.size(); ++f) {
    const auto& c = counts[f];
    std::vector<double> config(c.num_configs);
    for (std::size_t j = 0; j < c.num_configs; ++j)
      config[j] = static_cast<double>(c.n_ij[j]) / static_cast<double>(c.n_i);
    input.families.push_back(QStarFamily{c, std::move(config), fitted.cpt[f], fitted.cpt[f]});
  }
  return input;
}

std::vector<SufficientCounts> family_counts(const Dataset& data, const Dag& dag) {
  if (dag.num_nodes() != data.num_variables()) throw NodeCountMismatch(dag.num_nodes(), data.num_variables());
  std::vector<SufficientCounts> out;
  for (std::size_t i = 0; i < dag.num_nodes(); ++i) out.push_back(count_sufficient_stats(data, i, dag.parents(i)));
  return out;
}

}  // namespace nalbn
