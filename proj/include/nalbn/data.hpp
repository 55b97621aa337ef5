#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "nalbn/model.hpp"

namespace nalbn {

using Cell = std::int32_t;
inline constexpr Cell kMissing = -1;

/// n records over a fixed schema. Cells are category codes or kMissing.
/// Stored column-major; immutable after construction.
class Dataset {
 public:
  Dataset() = default;
  /// Takes one column per variable; validates widths and category ranges.
  Dataset(std::vector<Variable> variables, std::vector<std::vector<Cell>> columns);
  static Dataset from_rows(std::vector<Variable> variables, const std::vector<std::vector<Cell>>& rows);

  std::size_t num_records() const noexcept { return num_records_; }
  std::size_t num_variables() const noexcept { return variables_.size(); }
  const std::vector<Variable>& variables() const noexcept { return variables_; }

  Cell at(std::size_t record, std::size_t variable) const { return columns_[variable][record]; }
  bool is_missing(std::size_t record, std::size_t variable) const { return at(record, variable) == kMissing; }
  std::span<const Cell> column(std::size_t variable) const { return columns_.at(variable); }
  const std::vector<std::vector<Cell>>& columns() const noexcept { return columns_; }

  std::size_t missing_count() const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<Variable> variables_;
  std::vector<std::vector<Cell>> columns_;
  std::size_t num_records_ = 0;
};

/// Counts n_i, n_ij and n_ikj for one (node, parent set) family. Only records
/// where the node and every parent are observed contribute.
struct SufficientCounts {
  std::size_t node = 0;
  ParentSet parents;
  std::size_t cardinality = 0;   // q(X_i)
  std::size_t num_configs = 1;   // q(Pa_i)
  std::int64_t n = 0;            // records in the dataset
  std::int64_t n_i = 0;
  std::vector<std::int64_t> n_ij;   // per parent configuration j
  std::vector<std::int64_t> n_ikj;  // k-major: index k * num_configs + j

  std::int64_t count(std::size_t k, std::size_t j) const { return n_ikj[k * num_configs + j]; }
};

SufficientCounts count_sufficient_stats(const Dataset& data, std::size_t node, const ParentSet& parents);

/// Plug-in estimators theta_i = n_i/n, theta_ij = n_ij/n_i,
/// theta_ikj = n_ikj/n_ij. A ratio with a zero denominator is std::nullopt.
struct ObservedTable {
  std::size_t cardinality = 0;
  std::size_t num_configs = 1;
  std::optional<double> theta_i;
  std::vector<std::optional<double>> theta_ij;
  std::vector<std::optional<double>> theta_ikj;  // k-major like SufficientCounts

  const std::optional<double>& conditional(std::size_t k, std::size_t j) const {
    return theta_ikj[k * num_configs + j];
  }
};

ObservedTable estimate_theta(const SufficientCounts& counts);

}  // namespace nalbn
