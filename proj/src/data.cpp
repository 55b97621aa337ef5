#include "nalbn/data.hpp"

#include <algorithm>

#include "nalbn/errors.hpp"

namespace nalbn {

Dataset::Dataset(std::vector<Variable> variables, std::vector<std::vector<Cell>> columns)
    : variables_(std::move(variables)), columns_(std::move(columns)) {
  validate_variables(variables_);
  if (columns_.size() != variables_.size())
    throw SchemaMismatch("dataset has " + std::to_string(columns_.size()) + " columns for " +
                         std::to_string(variables_.size()) + " variables");
  num_records_ = columns_.empty() ? 0 : columns_.front().size();
  for (std::size_t v = 0; v < columns_.size(); ++v) {
    if (columns_[v].size() != num_records_) throw SchemaMismatch("dataset columns differ in length");
    const auto q = static_cast<Cell>(variables_[v].cardinality);
    for (std::size_t s = 0; s < num_records_; ++s) {
      const Cell c = columns_[v][s];
      if (c != kMissing && (c < 0 || c >= q))
        throw SchemaMismatch("record " + std::to_string(s) + ": value " + std::to_string(c) +
                             " out of range for variable '" + variables_[v].name + "'");
    }
  }
}

Dataset Dataset::from_rows(std::vector<Variable> variables, const std::vector<std::vector<Cell>>& rows) {
  std::vector<std::vector<Cell>> columns(variables.size(), std::vector<Cell>(rows.size()));
  for (std::size_t s = 0; s < rows.size(); ++s) {
    if (rows[s].size() != variables.size())
      throw SchemaMismatch("record " + std::to_string(s) + " has " + std::to_string(rows[s].size()) +
                           " cells, expected " + std::to_string(variables.size()));
    for (std::size_t v = 0; v < variables.size(); ++v) columns[v][s] = rows[s][v];
  }
  return Dataset(std::move(variables), std::move(columns));
}

std::size_t Dataset::missing_count() const {
  std::size_t total = 0;
  for (const auto& col : columns_) total += static_cast<std::size_t>(std::count(col.begin(), col.end(), kMissing));
  return total;
}

SufficientCounts count_sufficient_stats(const Dataset& data, std::size_t node, const ParentSet& parents) {
  const auto width = data.num_variables();
  if (node >= width) throw IndexOutOfRange("node index " + std::to_string(node) + " out of range");
  for (std::size_t m = 0; m < parents.size(); ++m) {
    if (parents[m] >= width) throw IndexOutOfRange("parent index " + std::to_string(parents[m]) + " out of range");
    if (parents[m] == node) throw MalformedParents(node, "node listed among its own parents");
    if (m > 0 && parents[m - 1] >= parents[m]) throw MalformedParents(node, "parents not sorted or duplicated");
  }

  const auto& vars = data.variables();
  SufficientCounts out;
  out.node = node;
  out.parents = parents;
  out.cardinality = vars[node].cardinality;
  out.num_configs = parent_configurations(vars, parents);
  out.n = static_cast<std::int64_t>(data.num_records());
  out.n_ij.assign(out.num_configs, 0);
  out.n_ikj.assign(out.num_configs * out.cardinality, 0);

  const auto child = data.column(node);
  std::vector<std::span<const Cell>> cols;
  std::vector<std::size_t> cards;
  for (auto p : parents) {
    cols.push_back(data.column(p));
    cards.push_back(vars[p].cardinality);
  }

  const auto records = data.num_records();
  for (std::size_t s = 0; s < records; ++s) {
    const Cell k = child[s];
    if (k == kMissing) continue;
    std::size_t j = 0;
    bool observed = true;
    for (std::size_t m = 0; m < cols.size(); ++m) {
      const Cell v = cols[m][s];
      if (v == kMissing) {
        observed = false;
        break;
      }
      j = j * cards[m] + static_cast<std::size_t>(v);
    }
    if (!observed) continue;
    ++out.n_ikj[static_cast<std::size_t>(k) * out.num_configs + j];
  }

  for (std::size_t k = 0; k < out.cardinality; ++k)
    for (std::size_t j = 0; j < out.num_configs; ++j) out.n_ij[j] += out.count(k, j);
  for (auto c : out.n_ij) out.n_i += c;
  return out;
}

ObservedTable estimate_theta(const SufficientCounts& counts) {
  ObservedTable t;
  t.cardinality = counts.cardinality;
  t.num_configs = counts.num_configs;
  if (counts.n > 0) t.theta_i = static_cast<double>(counts.n_i) / static_cast<double>(counts.n);
  t.theta_ij.resize(counts.num_configs);
  t.theta_ikj.resize(counts.num_configs * counts.cardinality);
  for (std::size_t j = 0; j < counts.num_configs; ++j) {
    if (counts.n_i > 0) t.theta_ij[j] = static_cast<double>(counts.n_ij[j]) / static_cast<double>(counts.n_i);
    if (counts.n_ij[j] == 0) continue;
    for (std::size_t k = 0; k < counts.cardinality; ++k)
      t.theta_ikj[k * counts.num_configs + j] =
          static_cast<double>(counts.count(k, j)) / static_cast<double>(counts.n_ij[j]);
  }
  return t;
}

}  // namespace nalbn
