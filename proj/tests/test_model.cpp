#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "nalbn/errors.hpp"
#include "nalbn/model.hpp"
#include "nalbn/network_io.hpp"

using namespace nalbn;
using testing_util::vars;

TEST_CASE("validate_dag accepts a chain and rejects cycles and self-loops") {
  CHECK_NOTHROW(validate_dag(Dag({{}, {0}})));
  CHECK_THROWS_AS(validate_dag(Dag({{1}, {0}})), CycleDetected);
  CHECK_THROWS_AS(validate_dag(Dag(std::vector<ParentSet>{{0}})), MalformedParents);
  CHECK_THROWS_AS(validate_dag(Dag({{}, {0, 0}})), MalformedParents);
  CHECK_THROWS_AS(validate_dag(Dag({{}, {5}})), MalformedParents);
  CHECK_THROWS_AS(validate_dag(Dag({{}, {}, {1, 0}})), MalformedParents);
}

TEST_CASE("cycle path names the nodes on the cycle") {
  try {
    validate_dag(Dag({{2}, {0}, {1}}));
    FAIL("expected a cycle");
  } catch (const CycleDetected& e) {
    CHECK(e.path().size() >= 3);
  }
}

TEST_CASE("df of small networks") {
  const auto v = vars({2, 2});
  CHECK(df_complexity(Dag(2), v) == 2);
  CHECK(df_complexity(Dag({{}, {0}}), v) == 3);
  const auto w = vars({3, 4, 2});
  CHECK(df_complexity(Dag({{}, {0}, {0, 1}}), w) == 2 + 3 * 3 + 12 * 1);
}

TEST_CASE("ALARM-shaped structure has df 473") {
  const auto s = load_structure(std::string(NALBN_SOURCE_DIR) + "/networks/alarm_structure.json");
  CHECK(s.variables.size() == 37);
  CHECK(s.dag.num_edges() == 45);
  CHECK(df_complexity(s.dag, s.variables) == 473);
}

TEST_CASE("df grows strictly under edge addition and matches the oracle") {
  const std::vector<std::size_t> cards{2, 3, 4};
  const auto v = vars(cards);
  const auto dags = oracle::all_dags(3);
  REQUIRE(dags.size() == 25);
  for (const auto& a : dags) {
    CHECK(df_complexity(Dag(a), v) == oracle::df(cards, a));
    for (const auto& b : dags)
      if (a != b && oracle::contains(b, a)) CHECK(df_complexity(Dag(a), v) < df_complexity(Dag(b), v));
  }
  CHECK(df_complexity(Dag(3), v) == 1 + 2 + 3);
}

TEST_CASE("is_subgraph is a partial order") {
  const auto dags = oracle::all_dags(3);
  CHECK(is_subgraph(Dag(3), Dag({{}, {0}, {0, 1}})));
  CHECK_FALSE(is_subgraph(Dag({{}, {0}}), Dag(2)));
  for (const auto& a : dags) {
    CHECK(is_subgraph(Dag(a), Dag(a)));
    for (const auto& b : dags) {
      const bool ab = is_subgraph(Dag(a), Dag(b));
      CHECK(ab == oracle::contains(b, a));
      if (ab && is_subgraph(Dag(b), Dag(a))) CHECK(a == b);
      for (const auto& c : dags)
        if (ab && is_subgraph(Dag(b), Dag(c))) CHECK(is_subgraph(Dag(a), Dag(c)));
    }
  }
}

TEST_CASE("node order compatibility and predecessors") {
  NodeOrder order({2, 0, 1});
  CHECK(order.rank(2) == 0);
  CHECK(order.predecessors(1) == std::vector<std::size_t>{0, 2});
  CHECK(order.is_compatible(Dag({{2}, {0, 2}, {}})));
  CHECK_FALSE(order.is_compatible(Dag({{1}, {}, {}})));
  CHECK_THROWS_AS(NodeOrder({0, 0, 1}), InvalidArgument);
}

TEST_CASE("topological order prefers lower indices") {
  CHECK(topological_order(Dag({{2}, {}, {1}})) == std::vector<std::size_t>{1, 2, 0});
}

TEST_CASE("config index is row-major, last parent fastest") {
  const auto v = vars({3, 2, 4});
  const std::vector<std::int32_t> vals{2, 3};
  CHECK(config_index(v, {0, 2}, vals) == 2 * 4 + 3);
  CHECK(parent_configurations(v, {0, 2}) == 12);
  CHECK(parent_configurations(v, {}) == 1);
}

TEST_CASE("BayesNet validates CPT rows") {
  const auto v = vars({2, 2});
  CHECK_NOTHROW(BayesNet(v, Dag(2), {NodeTable(1, 2, {0.4, 0.6}), NodeTable(1, 2, {0.3, 0.7})}));
  CHECK_THROWS_AS(BayesNet(v, Dag(2), {NodeTable(1, 2, {0.4, 0.5}), NodeTable(1, 2, {0.3, 0.7})}), Error);
  CHECK_THROWS_AS(BayesNet(v, Dag({{}, {0}}), {NodeTable(1, 2, {0.4, 0.6}), NodeTable(1, 2, {0.3, 0.7})}),
                  Error);
  CHECK_THROWS_AS(BayesNet(vars({2, 1}), Dag(2), {NodeTable(1, 2, {0.4, 0.6}), NodeTable(1, 1, {1.0})}), Error);
}

TEST_CASE("format_edges renders names") {
  CHECK(format_edges(Dag({{}, {0}, {0, 1}}), vars({2, 2, 2})) == "X1->X2;X1->X3;X2->X3");
  CHECK(format_edges(Dag(2)).empty());
}
