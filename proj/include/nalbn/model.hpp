#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace nalbn {

/// A categorical variable; values are encoded 0..cardinality-1.
struct Variable {
  std::string name;
  std::size_t cardinality = 2;

  friend bool operator==(const Variable&, const Variable&) = default;
};

/// Sorted, duplicate-free list of parent node indices.
using ParentSet = std::vector<std::size_t>;

/// Directed graph stored as one parent set per node.
///
/// A Dag is a plain value; it may hold an invalid graph until checked with
/// validate_dag(). Loaders and search routines only ever produce valid ones.
class Dag {
 public:
  Dag() = default;
  explicit Dag(std::size_t num_nodes) : parents_(num_nodes) {}
  explicit Dag(std::vector<ParentSet> parents) : parents_(std::move(parents)) {}

  std::size_t num_nodes() const noexcept { return parents_.size(); }
  const ParentSet& parents(std::size_t node) const { return parents_.at(node); }
  const std::vector<ParentSet>& parent_sets() const noexcept { return parents_; }

  bool has_edge(std::size_t from, std::size_t to) const;
  std::size_t num_edges() const noexcept;
  /// All edges as (parent, child), ordered by child then parent.
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;

  /// Returns a copy with `parents` installed at `node` (sorted).
  Dag with_parents(std::size_t node, ParentSet parents) const;

  friend bool operator==(const Dag&, const Dag&) = default;
  friend auto operator<=>(const Dag& a, const Dag& b) { return a.parents_ <=> b.parents_; }

 private:
  std::vector<ParentSet> parents_;
};

/// Throws MalformedParents (self-loop, unsorted, duplicate or out-of-range
/// parent) or CycleDetected.
void validate_dag(const Dag& dag);

/// Topological order, lowest index first among the nodes that are ready.
/// Requires a valid dag.
std::vector<std::size_t> topological_order(const Dag& dag);

/// True iff every edge of `g1` is also an edge of `g2`.
bool is_subgraph(const Dag& g1, const Dag& g2);

/// A permutation of node indices; position 0 comes first.
class NodeOrder {
 public:
  NodeOrder() = default;
  explicit NodeOrder(std::vector<std::size_t> permutation);
  static NodeOrder identity(std::size_t num_nodes);

  std::size_t size() const noexcept { return order_.size(); }
  std::size_t at(std::size_t position) const { return order_.at(position); }
  std::size_t rank(std::size_t node) const { return rank_.at(node); }
  const std::vector<std::size_t>& nodes() const noexcept { return order_; }

  bool precedes(std::size_t a, std::size_t b) const { return rank(a) < rank(b); }
  /// Every parent precedes its child.
  bool is_compatible(const Dag& dag) const;
  /// Nodes placed before `node`, sorted by index.
  std::vector<std::size_t> predecessors(std::size_t node) const;

  friend bool operator==(const NodeOrder& a, const NodeOrder& b) { return a.order_ == b.order_; }

 private:
  std::vector<std::size_t> order_;
  std::vector<std::size_t> rank_;
};

std::size_t parent_configurations(std::span<const Variable> variables, const ParentSet& parents);

/// df(X_i | Pa_i) = q(Pa_i) * (q(X_i) - 1).
std::uint64_t family_df(std::span<const Variable> variables, std::size_t node, const ParentSet& parents);

/// df(G) = sum_i q(Pa_i) * (q(X_i) - 1).
std::uint64_t df_complexity(const Dag& dag, std::span<const Variable> variables);

/// Row-major parent configuration index, last parent fastest-varying.
/// `values` holds one value per parent, in the parent set's order.
std::size_t config_index(std::span<const Variable> variables, const ParentSet& parents,
                         std::span<const std::int32_t> values);

/// Conditional probability table of one node, stored row-major:
/// entry (config j, state k) lives at j * cardinality + k.
class NodeTable {
 public:
  NodeTable() = default;
  NodeTable(std::size_t num_configs, std::size_t cardinality, std::vector<double> probs);

  std::size_t num_configs() const noexcept { return num_configs_; }
  std::size_t cardinality() const noexcept { return cardinality_; }
  double prob(std::size_t config, std::size_t state) const { return probs_[config * cardinality_ + state]; }
  std::span<const double> row(std::size_t config) const {
    return std::span<const double>(probs_).subspan(config * cardinality_, cardinality_);
  }
  const std::vector<double>& values() const noexcept { return probs_; }

 private:
  std::size_t num_configs_ = 0;
  std::size_t cardinality_ = 0;
  std::vector<double> probs_;
};

using Cpt = std::vector<NodeTable>;

inline constexpr double kRowSumTolerance = 1e-12;

/// Ground-truth or fitted discrete network (G, P). Immutable once built.
class BayesNet {
 public:
  /// Validates names, cardinalities, the dag, and CPT shapes and rows.
  BayesNet(std::vector<Variable> variables, Dag dag, Cpt cpt);

  const std::vector<Variable>& variables() const noexcept { return variables_; }
  const Dag& dag() const noexcept { return dag_; }
  const Cpt& cpt() const noexcept { return cpt_; }
  const NodeTable& table(std::size_t node) const { return cpt_.at(node); }
  std::size_t num_nodes() const noexcept { return variables_.size(); }

 private:
  std::vector<Variable> variables_;
  Dag dag_;
  Cpt cpt_;
};

/// Checks cardinality >= 2 and unique, non-empty names.
void validate_variables(std::span<const Variable> variables);

/// Renders a dag as "A->B;C->D" using variable names (or indices when empty).
std::string format_edges(const Dag& dag, std::span<const Variable> variables = {});

}  // namespace nalbn
