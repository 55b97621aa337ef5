#include "nalbn/model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

#include "nalbn/errors.hpp"

namespace nalbn {

namespace {

std::string join_path(const std::vector<std::size_t>& path) {
  std::ostringstream out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out << " -> ";
    out << path[i];
  }
  return out.str();
}

}  // namespace

CycleDetected::CycleDetected(std::vector<std::size_t> path)
    : Error("cycle detected: " + join_path(path)), path_(std::move(path)) {}

MalformedParents::MalformedParents(std::size_t node, const std::string& what)
    : Error("malformed parents of node " + std::to_string(node) + ": " + what), node_(node) {}

NodeCountMismatch::NodeCountMismatch(std::size_t lhs, std::size_t rhs)
    : Error("node count mismatch: " + std::to_string(lhs) + " vs " + std::to_string(rhs)) {}

StateSpaceTooLarge::StateSpaceTooLarge(double states, std::size_t cap)
    : Error("joint state space of " + std::to_string(states) + " states exceeds cap " + std::to_string(cap)) {}

AllCandidatesUnobservable::AllCandidatesUnobservable(std::size_t node)
    : Error("every candidate parent set of node " + std::to_string(node) + " has no observed records"),
      node_(node) {}

UnobservableNode::UnobservableNode(std::size_t node)
    : Error("node " + std::to_string(node) + " has no observed records"), node_(node) {}

bool Dag::has_edge(std::size_t from, std::size_t to) const {
  const auto& pa = parents_.at(to);
  return std::binary_search(pa.begin(), pa.end(), from);
}

std::size_t Dag::num_edges() const noexcept {
  std::size_t total = 0;
  for (const auto& pa : parents_) total += pa.size();
  return total;
}

std::vector<std::pair<std::size_t, std::size_t>> Dag::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  out.reserve(num_edges());
  for (std::size_t child = 0; child < parents_.size(); ++child)
    for (auto p : parents_[child]) out.emplace_back(p, child);
  return out;
}

Dag Dag::with_parents(std::size_t node, ParentSet parents) const {
  Dag copy = *this;
  std::sort(parents.begin(), parents.end());
  copy.parents_.at(node) = std::move(parents);
  return copy;
}

void validate_dag(const Dag& dag) {
  const std::size_t n = dag.num_nodes();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& pa = dag.parents(i);
    for (std::size_t k = 0; k < pa.size(); ++k) {
      if (pa[k] >= n) throw MalformedParents(i, "parent index " + std::to_string(pa[k]) + " out of range");
      if (pa[k] == i) throw MalformedParents(i, "self-loop");
      if (k > 0 && pa[k - 1] >= pa[k]) throw MalformedParents(i, "parents not sorted or duplicated");
    }
  }

  // Iterative DFS colouring; reports the first cycle found as a node path.
  enum class Colour { white, grey, black };
  std::vector<Colour> colour(n, Colour::white);
  std::vector<std::size_t> stack_nodes;
  std::vector<std::size_t> stack_next;
  for (std::size_t root = 0; root < n; ++root) {
    if (colour[root] != Colour::white) continue;
    stack_nodes.assign(1, root);
    stack_next.assign(1, 0);
    colour[root] = Colour::grey;
    while (!stack_nodes.empty()) {
      const std::size_t v = stack_nodes.back();
      const auto& pa = dag.parents(v);
      if (stack_next.back() < pa.size()) {
        const std::size_t u = pa[stack_next.back()++];
        if (colour[u] == Colour::grey) {
          // Walking parents, so the stack runs child -> parent; reverse it.
          auto it = std::find(stack_nodes.begin(), stack_nodes.end(), u);
          std::vector<std::size_t> path(it, stack_nodes.end());
          std::reverse(path.begin(), path.end());
          path.push_back(path.front());
          throw CycleDetected(std::move(path));
        }
        if (colour[u] == Colour::white) {
          colour[u] = Colour::grey;
          stack_nodes.push_back(u);
          stack_next.push_back(0);
        }
      } else {
        colour[v] = Colour::black;
        stack_nodes.pop_back();
        stack_next.pop_back();
      }
    }
  }
}

std::vector<std::size_t> topological_order(const Dag& dag) {
  const std::size_t n = dag.num_nodes();
  std::vector<std::size_t> pending(n);
  std::vector<std::vector<std::size_t>> children(n);
  for (std::size_t i = 0; i < n; ++i) {
    pending[i] = dag.parents(i).size();
    for (auto p : dag.parents(i)) children[p].push_back(i);
  }
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t i = 0; i < n; ++i)
    if (pending[i] == 0) ready.push(i);
  std::vector<std::size_t> order;
  order.reserve(n);
  while (!ready.empty()) {
    const auto v = ready.top();
    ready.pop();
    order.push_back(v);
    for (auto c : children[v])
      if (--pending[c] == 0) ready.push(c);
  }
  if (order.size() != n) validate_dag(dag);  // throws with the offending cycle
  return order;
}

bool is_subgraph(const Dag& g1, const Dag& g2) {
  if (g1.num_nodes() != g2.num_nodes()) throw NodeCountMismatch(g1.num_nodes(), g2.num_nodes());
  for (std::size_t i = 0; i < g1.num_nodes(); ++i) {
    const auto& a = g1.parents(i);
    const auto& b = g2.parents(i);
    if (!std::includes(b.begin(), b.end(), a.begin(), a.end())) return false;
  }
  return true;
}

NodeOrder::NodeOrder(std::vector<std::size_t> permutation) : order_(std::move(permutation)) {
  rank_.assign(order_.size(), order_.size());
  for (std::size_t pos = 0; pos < order_.size(); ++pos) {
    const auto node = order_[pos];
    if (node >= order_.size() || rank_[node] != order_.size())
      throw InvalidArgument("node order is not a permutation");
    rank_[node] = pos;
  }
}

NodeOrder NodeOrder::identity(std::size_t num_nodes) {
  std::vector<std::size_t> perm(num_nodes);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  return NodeOrder(std::move(perm));
}

bool NodeOrder::is_compatible(const Dag& dag) const {
  if (dag.num_nodes() != size()) throw NodeCountMismatch(dag.num_nodes(), size());
  for (std::size_t i = 0; i < dag.num_nodes(); ++i)
    for (auto p : dag.parents(i))
      if (!precedes(p, i)) return false;
  return true;
}

std::vector<std::size_t> NodeOrder::predecessors(std::size_t node) const {
  std::vector<std::size_t> out(order_.begin(), order_.begin() + static_cast<std::ptrdiff_t>(rank(node)));
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t parent_configurations(std::span<const Variable> variables, const ParentSet& parents) {
  std::size_t configs = 1;
  for (auto p : parents) {
    const auto q = variables[p].cardinality;
    if (configs > (std::size_t{1} << 40) / q) throw InvalidArgument("parent configuration count overflows");
    configs *= q;
  }
  return configs;
}

std::uint64_t family_df(std::span<const Variable> variables, std::size_t node, const ParentSet& parents) {
  return static_cast<std::uint64_t>(parent_configurations(variables, parents)) *
         static_cast<std::uint64_t>(variables[node].cardinality - 1);
}

std::uint64_t df_complexity(const Dag& dag, std::span<const Variable> variables) {
  if (dag.num_nodes() != variables.size()) throw NodeCountMismatch(dag.num_nodes(), variables.size());
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < dag.num_nodes(); ++i) total += family_df(variables, i, dag.parents(i));
  return total;
}

std::size_t config_index(std::span<const Variable> variables, const ParentSet& parents,
                         std::span<const std::int32_t> values) {
  std::size_t j = 0;
  for (std::size_t m = 0; m < parents.size(); ++m)
    j = j * variables[parents[m]].cardinality + static_cast<std::size_t>(values[m]);
  return j;
}

NodeTable::NodeTable(std::size_t num_configs, std::size_t cardinality, std::vector<double> probs)
    : num_configs_(num_configs), cardinality_(cardinality), probs_(std::move(probs)) {
  if (probs_.size() != num_configs_ * cardinality_)
    throw TableMismatch("node table holds " + std::to_string(probs_.size()) + " entries, expected " +
                        std::to_string(num_configs_ * cardinality_));
}

void validate_variables(std::span<const Variable> variables) {
  std::set<std::string> seen;
  for (const auto& v : variables) {
    if (v.name.empty()) throw InvalidArgument("variable with empty name");
    if (v.cardinality < 2) throw InvalidArgument("variable '" + v.name + "' has cardinality below 2");
    if (!seen.insert(v.name).second) throw InvalidArgument("duplicate variable name '" + v.name + "'");
  }
}

BayesNet::BayesNet(std::vector<Variable> variables, Dag dag, Cpt cpt)
    : variables_(std::move(variables)), dag_(std::move(dag)), cpt_(std::move(cpt)) {
  validate_variables(variables_);
  if (dag_.num_nodes() != variables_.size()) throw NodeCountMismatch(dag_.num_nodes(), variables_.size());
  validate_dag(dag_);
  if (cpt_.size() != variables_.size())
    throw TableMismatch("cpt has " + std::to_string(cpt_.size()) + " node tables for " +
                        std::to_string(variables_.size()) + " variables");
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    const auto& t = cpt_[i];
    const auto& name = variables_[i].name;
    const auto configs = parent_configurations(variables_, dag_.parents(i));
    if (t.num_configs() != configs || t.cardinality() != variables_[i].cardinality)
      throw TableMismatch("cpt of node '" + name + "' has shape " + std::to_string(t.num_configs()) + "x" +
                          std::to_string(t.cardinality()) + ", expected " + std::to_string(configs) + "x" +
                          std::to_string(variables_[i].cardinality));
    for (std::size_t j = 0; j < configs; ++j) {
      double sum = 0.0;
      for (double p : t.row(j)) {
        if (!(p >= 0.0 && p <= 1.0))
          throw TableMismatch("cpt of node '" + name + "' has an entry outside [0,1] in row " + std::to_string(j));
        sum += p;
      }
      if (std::abs(sum - 1.0) > kRowSumTolerance)
        throw TableMismatch("cpt row " + std::to_string(j) + " of node '" + name + "' does not sum to 1");
    }
  }
}

std::string format_edges(const Dag& dag, std::span<const Variable> variables) {
  std::ostringstream out;
  bool first = true;
  for (const auto& [from, to] : dag.edges()) {
    if (!first) out << ';';
    first = false;
    if (variables.empty())
      out << from << "->" << to;
    else
      out << variables[from].name << "->" << variables[to].name;
  }
  return out.str();
}

}  // namespace nalbn
