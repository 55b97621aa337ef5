#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "nalbn/errors.hpp"
#include "nalbn/experiments.hpp"
#include "nalbn/sampling.hpp"
#include "nalbn/scoring.hpp"

using namespace nalbn;
using testing_util::vars;

namespace {

Dataset four_records() { return Dataset::from_rows(vars({2, 2}), {{0, 0}, {0, 1}, {1, 1}, {1, 1}}); }

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) sxy += (x[i] - mx) * (y[i] - my), sxx += (x[i] - mx) * (x[i] - mx);
  return sxy / sxx;
}

}  // namespace

TEST_CASE("node NAL hand values") {
  const auto d = four_records();
  const double h = 0.25 * std::log(0.25) + 0.75 * std::log(0.75);
  CHECK(node_nal(count_sufficient_stats(d, 1, {})) == doctest::Approx(h).epsilon(1e-14));
  CHECK(node_nal(count_sufficient_stats(d, 1, {})) == doctest::Approx(-0.5623).epsilon(1e-4));
  CHECK(node_nal(count_sufficient_stats(d, 1, {0})) == doctest::Approx(-0.5 * std::log(2.0)).epsilon(1e-14));
  CHECK(node_nal(count_sufficient_stats(d, 1, {0})) == doctest::Approx(-0.3466).epsilon(1e-4));
  const auto constant = Dataset::from_rows(vars({3}), {{2}, {2}, {2}});
  CHECK(node_nal(count_sufficient_stats(constant, 0, {})) == 0.0);
}

TEST_CASE("NAL of the empty DAG on the four records") {
  const auto d = four_records();
  CHECK(nal(d, Dag(2)) == doctest::Approx(-std::log(2.0) + 0.25 * std::log(0.25) + 0.75 * std::log(0.75)));
  CHECK(nal(d, Dag(2)) == doctest::Approx(-1.2555).epsilon(1e-4));
  const auto holes = Dataset::from_rows(vars({2, 2}), {{kMissing, 0}, {kMissing, 1}});
  CHECK(nal(holes, Dag(2)) == kNegInf);
  CHECK_THROWS_AS(nal(d, Dag(3)), SchemaMismatch);
}

TEST_CASE("penalty schedules") {
  CHECK(lambda_value(Penalty::bic(), 7) == doctest::Approx(0.5 * std::log(7.0) / 7.0));
  // m = e^2 is not an integer, so only the closed form is checked.
  CHECK(0.5 * 2.0 / std::exp(2.0) == doctest::Approx(0.1353).epsilon(1e-4));
  CHECK(lambda_value(Penalty::aic(), 100) == doctest::Approx(0.01));
  CHECK(lambda_value(Penalty::power_law(0.5, 0.5), 100) == doctest::Approx(0.05));
  CHECK(lambda_value(Penalty::none(), 100) == 0.0);
  CHECK_THROWS_AS(lambda_value(Penalty::bic(), 0), ZeroSampleSize);
  CHECK_THROWS_AS(Penalty::power_law(0.0, 0.5), InvalidArgument);
  CHECK_THROWS_AS(Penalty::power_law(1.0, 1.0), InvalidArgument);
  const auto p = Penalty::parse("power:0.3", 0.5);
  CHECK(p.kind == PenaltyKind::power_law);
  CHECK(p.coefficient == 0.5);
  CHECK(p.exponent == 0.3);
  CHECK(Penalty::parse("power:0.3:2", 0.5).coefficient == 2.0);
  CHECK(Penalty::parse("bic", 0.5).kind == PenaltyKind::bic);
  CHECK_THROWS_AS(Penalty::parse("mdl", 0.5), InvalidArgument);
}

TEST_CASE("global score hand case") {
  const auto d = four_records();
  CHECK(score_global(d, Dag(2), Penalty::none()) == nal(d, Dag(2)));
  CHECK(penalized(-1.2555, 2, Penalty::power_law(0.5, 0.5), 100) == doctest::Approx(-1.3555));
  CHECK(score_global(d, Dag(2), Penalty::power_law(0.1, 0.5)) ==
        doctest::Approx(nal(d, Dag(2)) - 0.05 * 2).epsilon(1e-14));
}

TEST_CASE("decomposable equals global on complete data") {
  std::mt19937_64 gen(3);
  const std::vector<std::size_t> cards{2, 3, 2};
  for (const auto& g : oracle::all_dags(3)) {
    const auto d = testing_util::to_dataset(cards, oracle::random_records(gen, cards, 60, 0.0));
    for (const auto& pen : {Penalty::bic(), Penalty::aic(), Penalty::power_law(0.2, 0.3)})
      CHECK(score_decomposable(d, Dag(g), pen).total == doctest::Approx(score_global(d, Dag(g), pen)).epsilon(1e-12));
    CHECK(score_decomposable(d, Dag(g), Penalty::none()).total == doctest::Approx(nal(d, Dag(g))).epsilon(1e-12));
  }
}

TEST_CASE("decomposable score uses each node's sample size") {
  const auto d = Dataset::from_rows(vars({2, 2}), {{0, 0}, {1, kMissing}, {0, 1}, {1, 1}});
  const auto s = score_decomposable(d, Dag(2), Penalty::aic());
  CHECK(s.nodes[0].n_i == 4);
  CHECK(s.nodes[1].n_i == 3);
  CHECK(s.nodes[1].score == doctest::Approx(s.nodes[1].nal - 1.0 / 3.0));
  const auto g = score_global_nodes(d, Dag(2), Penalty::aic());
  CHECK(g[1].score == doctest::Approx(g[1].nal - 0.25));
}

TEST_CASE("NAL matches the oracle and the standard average on complete data") {
  std::mt19937_64 gen(21);
  const std::vector<std::size_t> cards{3, 2, 2};
  const auto dags = oracle::all_dags(3);
  for (int trial = 0; trial < 200; ++trial) {
    const auto rows = oracle::random_records(gen, cards, 1 + trial % 50, 0.0);
    const auto d = testing_util::to_dataset(cards, rows);
    const auto& g = dags[static_cast<std::size_t>(trial) % dags.size()];
    CHECK(std::abs(nal(d, Dag(g)) - standard_avg_loglik(d, Dag(g))) <= 1e-12);
    CHECK(std::abs(nal(d, Dag(g)) - oracle::nal(rows, cards, g)) <= 1e-12);
  }
}

TEST_CASE("NAL differs from the standard average on a masked hand case") {
  const std::vector<std::size_t> cards{2, 2, 2};
  const oracle::Records rows{{0, 0, 1}, {0, 1, 1}, {1, 1, 0}, {1, 0, 0}, {0, 0, 0}, {kMissing, 1, 1}};
  const auto d = testing_util::to_dataset(cards, rows);
  const Dag g({{}, {0}, {1}});
  CHECK(nal(d, g) == doctest::Approx(oracle::nal(rows, cards, g.parent_sets())).epsilon(1e-14));
  CHECK(standard_avg_loglik(d, g) ==
        doctest::Approx(oracle::standard_avg_loglik(rows, cards, g.parent_sets())).epsilon(1e-14));
  CHECK(std::abs(nal(d, g) - standard_avg_loglik(d, g)) > 1e-3);
}

TEST_CASE("single complete record scores zero") {
  const auto d = Dataset::from_rows(vars({2, 3}), {{1, 2}});
  CHECK(nal(d, Dag({{}, {0}})) == 0.0);
  CHECK(standard_avg_loglik(d, Dag({{}, {0}})) == 0.0);
}

TEST_CASE("unpenalized node score never drops when parents are added") {
  std::mt19937_64 gen(5);
  const std::vector<std::size_t> cards{2, 3, 2, 2};
  for (int trial = 0; trial < 50; ++trial) {
    const auto d = testing_util::to_dataset(cards, oracle::random_records(gen, cards, 30, 0.0));
    for (std::size_t node = 0; node < 4; ++node) {
      ParentSet pa;
      double prev = node_nal(count_sufficient_stats(d, node, pa));
      for (std::size_t p = 0; p < 4; ++p) {
        if (p == node) continue;
        pa.push_back(p);
        const double cur = node_nal(count_sufficient_stats(d, node, pa));
        CHECK(cur >= prev - 1e-12);
        prev = cur;
      }
    }
  }
}

TEST_CASE("power-law score strictly decreases in the coefficient") {
  const auto d = forward_sample(synthetic8_network(), 200, Seed{1});
  const auto g = synthetic8_network().dag();
  double prev = score_global(d, g, Penalty::power_law(0.01, 0.3));
  for (double c : {0.1, 0.5, 1.0, 2.0}) {
    const double cur = score_global(d, g, Penalty::power_law(c, 0.3));
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("NAL converges at rate n^-1/2") {
  // Chain on X1 -> X2 under a dependent net, evaluated against its
  // population NAL computed by exact marginalization.
  const std::vector<std::size_t> cards{2, 2};
  const oracle::Parents g0{{}, {0}};
  const std::vector<oracle::Table> cpt{{{0.4, 0.6}}, {{0.3, 0.7}, {0.8, 0.2}}};
  const auto net = testing_util::to_net(cards, g0, cpt);
  const double target = oracle::population_nal(cards, oracle::joint(cards, g0, cpt), g0);
  std::vector<double> lx, ly;
  for (std::size_t n : {100u, 1000u, 10000u}) {
    double s = 0, s2 = 0;
    for (std::uint64_t r = 0; r < 500; ++r) {
      const double diff = nal(forward_sample(net, n, Seed{n * 7919 + r}), Dag(g0)) - target;
      s += diff;
      s2 += diff * diff;
    }
    const double mean = s / 500;
    lx.push_back(std::log(static_cast<double>(n)));
    ly.push_back(0.5 * std::log(s2 / 500 - mean * mean));
  }
  CHECK(std::abs(slope(lx, ly) + 0.5) <= 0.1);
}

TEST_CASE("sample NAL approaches the population value") {
  const auto net = two_node_network();
  const auto d = forward_sample(net, 100000, Seed{77});
  const double h = 0.4 * std::log(0.4) + 0.6 * std::log(0.6) + 0.3 * std::log(0.3) + 0.7 * std::log(0.7);
  CHECK(std::abs(nal(d, Dag(2)) - h) < 0.01);
}
