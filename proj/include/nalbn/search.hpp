#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "nalbn/data.hpp"
#include "nalbn/model.hpp"
#include "nalbn/scoring.hpp"

namespace nalbn {

/// Absolute tolerance below which two scores count as tied.
inline constexpr double kScoreTieTolerance = 1e-12;

/// Order-compatible DAGs with bounded in-degree.
struct SearchSpace {
  NodeOrder order;
  std::size_t max_parents = 3;

  std::size_t num_nodes() const noexcept { return order.size(); }
  /// Subsets of the node's predecessors with at most max_parents members,
  /// by size, then lexicographically.
  std::vector<ParentSet> candidates(std::size_t node) const;
  std::size_t candidate_count(std::size_t node) const;
  /// Number of DAGs in the space (saturates at UINT64_MAX).
  std::uint64_t dag_count() const;
  /// Every DAG of the space, node 0's choice varying slowest. Throws
  /// InvalidArgument when there are more than `limit`.
  std::vector<Dag> enumerate(std::uint64_t limit = 1000000) const;
};

struct FamilyStat {
  double nal = kNegInf;
  std::int64_t n_i = 0;
  std::uint64_t df = 0;
};

/// Memoized NAL per (node, parent set) over one dataset. Not thread-safe.
class FamilyScoreTable {
 public:
  explicit FamilyScoreTable(const Dataset& data) : data_(&data) {}

  const Dataset& data() const noexcept { return *data_; }
  const FamilyStat& get(std::size_t node, const ParentSet& parents);
  std::size_t size() const noexcept { return memo_.size(); }

 private:
  const Dataset* data_;
  std::map<std::pair<std::size_t, ParentSet>, FamilyStat> memo_;
};

enum class ScoreMode {
  decomposable,  // lambda evaluated at each n_i
  global,        // lambda evaluated at n
};

/// Best candidate for one node by nal - lambda * df. Ties (within
/// kScoreTieTolerance) go to smaller df, then the lexicographically smaller
/// parent list. Throws AllCandidatesUnobservable if every candidate has n_i = 0.
NodeScore best_parent_set(FamilyScoreTable& table, std::size_t node, const SearchSpace& space,
                          const Penalty& penalty, ScoreMode mode = ScoreMode::decomposable);
NodeScore best_parent_set(const Dataset& data, std::size_t node, const SearchSpace& space, const Penalty& penalty,
                          ScoreMode mode = ScoreMode::decomposable);

/// Per-node winners of best_parent_set assembled into a DAG.
Dag assemble_best_parents(FamilyScoreTable& table, const SearchSpace& space, const Penalty& penalty,
                          ScoreMode mode);

/// Decomposable mode assembles per-node winners; global mode selects from
/// the complexity profile.
Dag learn_structure(FamilyScoreTable& table, const SearchSpace& space, const Penalty& penalty,
                    ScoreMode mode = ScoreMode::decomposable);
Dag learn_structure(const Dataset& data, const SearchSpace& space, const Penalty& penalty,
                    ScoreMode mode = ScoreMode::decomposable);

struct ProfilePoint {
  std::uint64_t t = 0;       // total df
  double best_score = 0.0;   // best NAL among DAGs with df == t
  Dag dag;
};

/// Best NAL at each exact total df t, keeping only the t whose best NAL
/// strictly exceeds that of every smaller t. Among equally good DAGs at one
/// t, the lexicographically smallest parent-set list wins.
std::vector<ProfilePoint> complexity_profile(FamilyScoreTable& table, const SearchSpace& space);
std::vector<ProfilePoint> complexity_profile(const Dataset& data, const SearchSpace& space);

/// The point maximizing best_score - lambda_n * t; ties go to smaller t.
const ProfilePoint& select_from_profile(const std::vector<ProfilePoint>& profile, const Penalty& penalty,
                                        std::uint64_t sample_size);

}  // namespace nalbn
