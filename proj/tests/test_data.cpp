#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "helpers.hpp"
#include "nalbn/data.hpp"
#include "nalbn/errors.hpp"
#include "nalbn/sampling.hpp"

using namespace nalbn;
using testing_util::vars;

namespace {

Dataset four_records() { return Dataset::from_rows(vars({2, 2}), {{0, 0}, {0, 1}, {1, 1}, {1, 1}}); }

}  // namespace

TEST_CASE("hand counts on the four-record dataset") {
  const auto d = four_records();
  const auto c = count_sufficient_stats(d, 1, {0});
  CHECK(c.n == 4);
  CHECK(c.n_i == 4);
  CHECK(c.n_ij == std::vector<std::int64_t>{2, 2});
  CHECK(c.count(0, 0) == 1);
  CHECK(c.count(0, 1) == 0);
  CHECK(c.count(1, 0) == 1);
  CHECK(c.count(1, 1) == 2);

  const auto m = count_sufficient_stats(d, 1, {});
  CHECK(m.n_i == 4);
  CHECK(m.n_ij == std::vector<std::int64_t>{4});
  CHECK(m.count(0, 0) == 1);
  CHECK(m.count(1, 0) == 3);
}

TEST_CASE("fully missing parent column gives zero counts") {
  const auto d = Dataset::from_rows(vars({2, 2}), {{kMissing, 0}, {kMissing, 1}, {kMissing, 1}});
  const auto c = count_sufficient_stats(d, 1, {0});
  CHECK(c.n_i == 0);
  for (auto v : c.n_ij) CHECK(v == 0);
  for (auto v : c.n_ikj) CHECK(v == 0);
}

TEST_CASE("plug-in estimates on the four-record dataset") {
  const auto t = estimate_theta(count_sufficient_stats(four_records(), 1, {0}));
  CHECK(*t.theta_i == 1.0);
  CHECK(*t.theta_ij[0] == 0.5);
  CHECK(*t.theta_ij[1] == 0.5);
  CHECK(*t.conditional(0, 0) == 0.5);
  CHECK(*t.conditional(0, 1) == 0.0);
  CHECK(*t.conditional(1, 0) == 0.5);
  CHECK(*t.conditional(1, 1) == 1.0);
}

TEST_CASE("empty configuration leaves the column undefined") {
  const auto d = Dataset::from_rows(vars({2, 2}), {{0, 0}, {0, 1}});
  const auto t = estimate_theta(count_sufficient_stats(d, 1, {0}));
  CHECK(t.theta_ij[1].has_value());
  CHECK(*t.theta_ij[1] == 0.0);
  CHECK_FALSE(t.conditional(0, 1).has_value());
  CHECK_FALSE(t.conditional(1, 1).has_value());
  const auto none = estimate_theta(count_sufficient_stats(Dataset::from_rows(vars({2, 2}), {{kMissing, 0}}), 1, {0}));
  CHECK(*none.theta_i == 0.0);
  CHECK_FALSE(none.theta_ij[0].has_value());
}

TEST_CASE("dataset validation") {
  CHECK_THROWS_AS(Dataset::from_rows(vars({2, 2}), {{0, 2}}), SchemaMismatch);
  CHECK_THROWS_AS(Dataset::from_rows(vars({2, 2}), {{0}}), SchemaMismatch);
  CHECK_THROWS_AS(count_sufficient_stats(four_records(), 2, {}), IndexOutOfRange);
  CHECK_THROWS_AS(count_sufficient_stats(four_records(), 1, {1}), MalformedParents);
  CHECK(four_records().missing_count() == 0);
}

TEST_CASE("counts agree with a brute-force tally on random data") {
  std::mt19937_64 gen(11);
  const std::vector<std::size_t> cards{3, 2, 4, 2};
  for (int trial = 0; trial < 40; ++trial) {
    const auto rows = oracle::random_records(gen, cards, 1 + trial * 3, 0.2);
    const auto d = testing_util::to_dataset(cards, rows);
    for (std::size_t node = 0; node < 4; ++node)
      for (const ParentSet& pa : {ParentSet{}, ParentSet{(node + 1) % 4}, ParentSet{0, 1, 2, 3}}) {
        ParentSet parents;
        for (auto p : pa)
          if (p != node) parents.push_back(p);
        const auto c = count_sufficient_stats(d, node, parents);
        const auto o = oracle::tally(rows, cards, node, parents);
        REQUIRE(c.n_i == o.n_i);
        std::int64_t sum_j = 0;
        for (std::size_t j = 0; j < c.num_configs; ++j) {
          CHECK(c.n_ij[j] == o.n_j[j]);
          std::int64_t sum_k = 0;
          for (std::size_t k = 0; k < c.cardinality; ++k) {
            CHECK(c.count(k, j) == o.n_jk[j][k]);
            sum_k += c.count(k, j);
          }
          CHECK(sum_k == c.n_ij[j]);
          sum_j += c.n_ij[j];
        }
        CHECK(sum_j == c.n_i);
        CHECK(c.n_i <= c.n);
      }
  }
}

TEST_CASE("identical datasets give identical counts") {
  const auto net = testing_util::to_net({2, 3}, {{}, {0}}, {{{0.3, 0.7}}, {{0.2, 0.5, 0.3}, {0.6, 0.1, 0.3}}});
  const auto a = apply_mcar(forward_sample(net, 300, Seed{4}), MissingnessModel::bernoulli({0.7, 0.9}), Seed{5});
  const auto b = Dataset(a.variables(), a.columns());
  const auto ca = count_sufficient_stats(a, 1, {0});
  const auto cb = count_sufficient_stats(b, 1, {0});
  CHECK(ca.n_ij == cb.n_ij);
  CHECK(ca.n_ikj == cb.n_ikj);
}

TEST_CASE("plug-in estimators are unbiased under MCAR") {
  // X1 -> X2 with X1 observed w.p. 0.75 and X2 w.p. 0.8.
  const auto net = testing_util::to_net({2, 3}, {{}, {0}}, {{{0.3, 0.7}}, {{0.2, 0.5, 0.3}, {0.6, 0.1, 0.3}}});
  const auto missing = MissingnessModel::bernoulli({0.75, 0.8});
  constexpr int kRuns = 2000;
  constexpr std::size_t kN = 40;
  // Accumulators per (k, j): sum, sum of squares, count of defined runs.
  std::vector<double> sum(6, 0.0), sq(6, 0.0), defined(6, 0.0);
  double sum_i = 0.0, sq_i = 0.0, sum_j0 = 0.0, sq_j0 = 0.0;
  for (int r = 0; r < kRuns; ++r) {
    const auto d = apply_mcar(forward_sample(net, kN, Seed{1000u + r}), missing, Seed{900000u + r});
    const auto t = estimate_theta(count_sufficient_stats(d, 1, {0}));
    sum_i += *t.theta_i;
    sq_i += *t.theta_i * *t.theta_i;
    if (t.theta_ij[0]) {
      sum_j0 += *t.theta_ij[0];
      sq_j0 += *t.theta_ij[0] * *t.theta_ij[0];
    }
    for (std::size_t k = 0; k < 3; ++k)
      for (std::size_t j = 0; j < 2; ++j)
        if (const auto& v = t.conditional(k, j)) {
          sum[k * 2 + j] += *v;
          sq[k * 2 + j] += *v * *v;
          defined[k * 2 + j] += 1.0;
        }
  }
  auto within = [](double s, double s2, double m, double truth) {
    const double mean = s / m;
    const double se = std::sqrt(std::max(s2 / m - mean * mean, 1e-12) / m);
    return std::abs(mean - truth) <= 3.0 * se;
  };
  CHECK(within(sum_i, sq_i, kRuns, 0.75 * 0.8));
  CHECK(within(sum_j0, sq_j0, kRuns, 0.3));
  for (std::size_t k = 0; k < 3; ++k)
    for (std::size_t j = 0; j < 2; ++j) {
      INFO("k=" << k << " j=" << j);
      CHECK(defined[k * 2 + j] > 1900);
      CHECK(within(sum[k * 2 + j], sq[k * 2 + j], defined[k * 2 + j], net.table(1).prob(j, k)));
    }
}
