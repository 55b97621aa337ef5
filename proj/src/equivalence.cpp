#include "nalbn/equivalence.hpp"

#include <algorithm>

#include "nalbn/errors.hpp"

namespace nalbn {

Skeleton::Skeleton(const Dag& dag) {
  for (const auto& [from, to] : dag.edges()) edges_.emplace_back(std::min(from, to), std::max(from, to));
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

bool Skeleton::adjacent(std::size_t a, std::size_t b) const {
  return std::binary_search(edges_.begin(), edges_.end(), std::make_pair(std::min(a, b), std::max(a, b)));
}

std::vector<std::array<std::size_t, 3>> v_structures(const Dag& dag) {
  const Skeleton skeleton(dag);
  std::vector<std::array<std::size_t, 3>> out;
  for (std::size_t c = 0; c < dag.num_nodes(); ++c) {
    const auto& pa = dag.parents(c);
    for (std::size_t x = 0; x < pa.size(); ++x)
      for (std::size_t y = x + 1; y < pa.size(); ++y)
        if (!skeleton.adjacent(pa[x], pa[y])) out.push_back({pa[x], c, pa[y]});
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool dags_equivalent(const Dag& g1, const Dag& g2) {
  if (g1.num_nodes() != g2.num_nodes()) throw NodeCountMismatch(g1.num_nodes(), g2.num_nodes());
  return Skeleton(g1) == Skeleton(g2) && v_structures(g1) == v_structures(g2);
}

EdgeComparison compare_edges(const Dag& truth, const Dag& estimate) {
  if (truth.num_nodes() != estimate.num_nodes()) throw NodeCountMismatch(truth.num_nodes(), estimate.num_nodes());
  EdgeComparison r;
  for (std::size_t i = 0; i < truth.num_nodes(); ++i) {
    const auto& t = truth.parents(i);
    const auto& e = estimate.parents(i);
    for (auto p : e) {
      if (std::binary_search(t.begin(), t.end(), p))
        ++r.true_positives;
      else
        ++r.false_positives;
    }
    for (auto p : t)
      if (!std::binary_search(e.begin(), e.end(), p)) ++r.false_negatives;
  }
  const auto tp = static_cast<double>(r.true_positives);
  if (r.true_positives + r.false_positives > 0) r.precision = tp / static_cast<double>(r.true_positives + r.false_positives);
  if (r.true_positives + r.false_negatives > 0) r.recall = tp / static_cast<double>(r.true_positives + r.false_negatives);
  if (r.true_positives == 0)
    r.f_score = (r.false_positives + r.false_negatives == 0) ? 1.0 : 0.0;
  else
    r.f_score = 2.0 * r.precision * r.recall / (r.precision + r.recall);
  return r;
}

double edge_f_score(const Dag& truth, const Dag& estimate) { return compare_edges(truth, estimate).f_score; }

}  // namespace nalbn
