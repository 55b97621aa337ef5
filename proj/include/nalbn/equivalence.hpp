#pragma once

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include "nalbn/model.hpp"

namespace nalbn {

/// Undirected edge set; each edge stored once as (min, max), sorted.
class Skeleton {
 public:
  explicit Skeleton(const Dag& dag);

  bool adjacent(std::size_t a, std::size_t b) const;
  const std::vector<std::pair<std::size_t, std::size_t>>& edges() const noexcept { return edges_; }

  friend bool operator==(const Skeleton&, const Skeleton&) = default;

 private:
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
};

/// Converging pairs a -> c <- b with a, b non-adjacent, as {a, c, b}, a < b.
std::vector<std::array<std::size_t, 3>> v_structures(const Dag& dag);

/// Same skeleton and same v-structures.
bool dags_equivalent(const Dag& g1, const Dag& g2);

/// Directed-edge agreement between a reference dag and an estimate.
struct EdgeComparison {
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
  double precision = 1.0;  // 1 when the estimate has no edges
  double recall = 1.0;     // 1 when the truth has no edges
  double f_score = 1.0;
};

EdgeComparison compare_edges(const Dag& truth, const Dag& estimate);

/// Harmonic mean of directed-edge precision and recall; 1 when both dags
/// are empty, 0 when there is no true positive but some disagreement.
double edge_f_score(const Dag& truth, const Dag& estimate);

}  // namespace nalbn
