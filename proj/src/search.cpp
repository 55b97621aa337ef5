#include "nalbn/search.hpp"

#include <algorithm>
#include <limits>

#include "nalbn/errors.hpp"

namespace nalbn {

namespace {

void check_space(const Dataset& data, const SearchSpace& space) {
  if (space.num_nodes() != data.num_variables())
    throw SchemaMismatch("search space has " + std::to_string(space.num_nodes()) + " nodes, dataset has " +
                         std::to_string(data.num_variables()) + " variables");
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// All size-m subsets of `pool` in lexicographic order, appended to `out`.
void append_subsets(const std::vector<std::size_t>& pool, std::size_t m, std::vector<ParentSet>& out) {
  if (m > pool.size()) return;
  std::vector<std::size_t> idx(m);
  for (std::size_t i = 0; i < m; ++i) idx[i] = i;
  while (true) {
    ParentSet s(m);
    for (std::size_t i = 0; i < m; ++i) s[i] = pool[idx[i]];
    out.push_back(std::move(s));
    std::size_t i = m;
    while (i > 0 && idx[i - 1] == pool.size() - m + (i - 1)) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t r = i; r < m; ++r) idx[r] = idx[r - 1] + 1;
  }
}

struct Option {
  std::uint64_t df;
  double nal;
};

// Per-df maxima that strictly improve on every smaller df.
std::vector<Option> pareto_frontier(std::vector<Option> options) {
  std::sort(options.begin(), options.end(), [](const Option& a, const Option& b) {
    return a.df != b.df ? a.df < b.df : a.nal > b.nal;
  });
  std::vector<Option> frontier;
  for (const auto& o : options) {
    if (!frontier.empty() && (o.df == frontier.back().df || o.nal <= frontier.back().nal + kScoreTieTolerance))
      continue;
    frontier.push_back(o);
  }
  return frontier;
}

}  // namespace

std::vector<ParentSet> SearchSpace::candidates(std::size_t node) const {
  const auto pool = order.predecessors(node);
  std::vector<ParentSet> out;
  const auto top = std::min(max_parents, pool.size());
  for (std::size_t m = 0; m <= top; ++m) append_subsets(pool, m, out);
  return out;
}

std::size_t SearchSpace::candidate_count(std::size_t node) const {
  const auto r = order.rank(node);
  std::uint64_t total = 0;
  for (std::size_t m = 0; m <= std::min(max_parents, r); ++m) total += binomial(r, m);
  return static_cast<std::size_t>(total);
}

std::uint64_t SearchSpace::dag_count() const {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < num_nodes(); ++i) {
    const std::uint64_t c = candidate_count(i);
    if (total > std::numeric_limits<std::uint64_t>::max() / c) return std::numeric_limits<std::uint64_t>::max();
    total *= c;
  }
  return total;
}

std::vector<Dag> SearchSpace::enumerate(std::uint64_t limit) const {
  const auto total = dag_count();
  if (total > limit)
    throw InvalidArgument("search space holds " + std::to_string(total) + " dags, limit is " + std::to_string(limit));
  std::vector<std::vector<ParentSet>> cands(num_nodes());
  for (std::size_t i = 0; i < num_nodes(); ++i) cands[i] = candidates(i);
  std::vector<Dag> out;
  out.reserve(static_cast<std::size_t>(total));
  std::vector<std::size_t> pick(num_nodes(), 0);
  while (true) {
    std::vector<ParentSet> parents(num_nodes());
    for (std::size_t i = 0; i < num_nodes(); ++i) parents[i] = cands[i][pick[i]];
    out.emplace_back(std::move(parents));
    std::size_t i = num_nodes();
    while (i > 0 && ++pick[i - 1] == cands[i - 1].size()) pick[--i] = 0;
    if (i == 0) return out;
  }
}

const FamilyStat& FamilyScoreTable::get(std::size_t node, const ParentSet& parents) {
  auto key = std::make_pair(node, parents);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  const auto counts = count_sufficient_stats(*data_, node, parents);
  FamilyStat stat{node_nal(counts), counts.n_i, family_df(data_->variables(), node, parents)};
  return memo_.emplace(std::move(key), stat).first->second;
}

NodeScore best_parent_set(FamilyScoreTable& table, std::size_t node, const SearchSpace& space,
                          const Penalty& penalty, ScoreMode mode) {
  const auto& data = table.data();
  check_space(data, space);
  if (node >= data.num_variables())
    throw IndexOutOfRange("node " + std::to_string(node) + " outside schema of " +
                          std::to_string(data.num_variables()));
  NodeScore best{node, {}, kNegInf, 0, 0, kNegInf};
  bool found = false;
  for (auto& parents : space.candidates(node)) {
    const auto& stat = table.get(node, parents);
    if (stat.n_i == 0) continue;
    const auto m = mode == ScoreMode::global ? static_cast<std::uint64_t>(data.num_records())
                                             : static_cast<std::uint64_t>(stat.n_i);
    const double s = penalized(stat.nal, stat.df, penalty, m);
    bool better = !found || s > best.score + kScoreTieTolerance;
    if (!better && s >= best.score - kScoreTieTolerance)
      better = stat.df < best.df || (stat.df == best.df && parents < best.parents);
    if (better) {
      best = NodeScore{node, std::move(parents), stat.nal, stat.n_i, stat.df, s};
      found = true;
    }
  }
  if (!found) throw AllCandidatesUnobservable(node);
  return best;
}

NodeScore best_parent_set(const Dataset& data, std::size_t node, const SearchSpace& space, const Penalty& penalty,
                          ScoreMode mode) {
  FamilyScoreTable table(data);
  return best_parent_set(table, node, space, penalty, mode);
}

Dag assemble_best_parents(FamilyScoreTable& table, const SearchSpace& space, const Penalty& penalty,
                          ScoreMode mode) {
  std::vector<ParentSet> parents(space.num_nodes());
  for (std::size_t i = 0; i < space.num_nodes(); ++i)
    parents[i] = best_parent_set(table, i, space, penalty, mode).parents;
  return Dag(std::move(parents));
}

Dag learn_structure(FamilyScoreTable& table, const SearchSpace& space, const Penalty& penalty, ScoreMode mode) {
  if (mode == ScoreMode::decomposable) return assemble_best_parents(table, space, penalty, mode);
  const auto profile = complexity_profile(table, space);
  return select_from_profile(profile, penalty, table.data().num_records()).dag;
}

Dag learn_structure(const Dataset& data, const SearchSpace& space, const Penalty& penalty, ScoreMode mode) {
  FamilyScoreTable table(data);
  return learn_structure(table, space, penalty, mode);
}

std::vector<ProfilePoint> complexity_profile(FamilyScoreTable& table, const SearchSpace& space) {
  const auto& data = table.data();
  check_space(data, space);
  const std::size_t n_nodes = space.num_nodes();

  // Candidate lists sorted lexicographically for reconstruction; frontier
  // options for the dynamic program.
  std::vector<std::vector<ParentSet>> cands(n_nodes);
  std::vector<std::vector<Option>> frontier(n_nodes);
  std::vector<std::uint64_t> max_df(n_nodes, 0);
  for (std::size_t i = 0; i < n_nodes; ++i) {
    cands[i] = space.candidates(i);
    std::sort(cands[i].begin(), cands[i].end());
    std::vector<Option> options;
    for (const auto& pa : cands[i]) {
      const auto& stat = table.get(i, pa);
      if (stat.n_i > 0) options.push_back({stat.df, stat.nal});
    }
    if (options.empty()) throw AllCandidatesUnobservable(i);
    frontier[i] = pareto_frontier(std::move(options));
    max_df[i] = frontier[i].back().df;
  }

  // suffix[i][t]: best sum of NAL over nodes i.. with total df exactly t.
  std::vector<std::uint64_t> suffix_max(n_nodes + 1, 0);
  for (std::size_t i = n_nodes; i-- > 0;) suffix_max[i] = suffix_max[i + 1] + max_df[i];
  std::vector<std::vector<double>> suffix(n_nodes + 1);
  suffix[n_nodes] = {0.0};
  for (std::size_t i = n_nodes; i-- > 0;) {
    auto& cur = suffix[i];
    cur.assign(suffix_max[i] + 1, kNegInf);
    const auto& next = suffix[i + 1];
    for (const auto& o : frontier[i])
      for (std::uint64_t rest = 0; rest < next.size(); ++rest) {
        if (next[rest] == kNegInf) continue;
        const double v = o.nal + next[rest];
        if (v > cur[o.df + rest]) cur[o.df + rest] = v;
      }
  }

  std::vector<ProfilePoint> profile;
  double running = kNegInf;
  const auto& top = suffix[0];
  for (std::uint64_t t = 0; t < top.size(); ++t) {
    if (top[t] == kNegInf) continue;
    if (running != kNegInf && top[t] <= running + kScoreTieTolerance) continue;
    running = top[t];

    std::vector<ParentSet> parents(n_nodes);
    std::uint64_t remaining = t;
    for (std::size_t i = 0; i < n_nodes; ++i) {
      const double target = suffix[i][remaining];
      const auto& next = suffix[i + 1];
      bool placed = false;
      for (const auto& pa : cands[i]) {
        const auto& stat = table.get(i, pa);
        if (stat.n_i == 0 || stat.df > remaining) continue;
        const auto rest = remaining - stat.df;
        if (rest >= next.size() || next[rest] == kNegInf) continue;
        if (stat.nal + next[rest] >= target - kScoreTieTolerance) {
          parents[i] = pa;
          remaining = rest;
          placed = true;
          break;
        }
      }
      if (!placed) throw Error("complexity profile reconstruction failed at node " + std::to_string(i));
    }
    profile.push_back(ProfilePoint{t, top[t], Dag(std::move(parents))});
  }
  return profile;
}

std::vector<ProfilePoint> complexity_profile(const Dataset& data, const SearchSpace& space) {
  FamilyScoreTable table(data);
  return complexity_profile(table, space);
}

const ProfilePoint& select_from_profile(const std::vector<ProfilePoint>& profile, const Penalty& penalty,
                                        std::uint64_t sample_size) {
  if (profile.empty()) throw InvalidArgument("empty complexity profile");
  const double lambda = lambda_value(penalty, sample_size);
  const ProfilePoint* best = &profile.front();
  double best_score = best->best_score - lambda * static_cast<double>(best->t);
  for (const auto& p : profile) {
    const double s = p.best_score - lambda * static_cast<double>(p.t);
    if (s > best_score + kScoreTieTolerance) {
      best = &p;
      best_score = s;
    }
  }
  return *best;
}

}  // namespace nalbn
