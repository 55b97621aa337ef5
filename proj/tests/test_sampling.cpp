#include <doctest.h>

#include <cmath>
#include <numeric>

#include "helpers.hpp"
#include "nalbn/errors.hpp"
#include "nalbn/experiments.hpp"
#include "nalbn/population.hpp"
#include "nalbn/sampling.hpp"

using namespace nalbn;

TEST_CASE("n = 0 gives an empty dataset with the schema") {
  const auto d = forward_sample(two_node_network(), 0, Seed{1});
  CHECK(d.num_records() == 0);
  CHECK(d.num_variables() == 2);
}

TEST_CASE("two-node marginal at n = 1e5") {
  const auto d = forward_sample(two_node_network(), 100000, Seed{7});
  std::size_t zeros = 0;
  for (auto c : d.column(0)) zeros += c == 0;
  CHECK(std::abs(static_cast<double>(zeros) / 1e5 - 0.4) <= 0.005);
}

TEST_CASE("deterministic chain copies the parent") {
  const auto net = testing_util::to_net({2, 2}, {{}, {0}}, {{{0.5, 0.5}}, {{1.0, 0.0}, {0.0, 1.0}}});
  const auto d = forward_sample(net, 1000, Seed{3});
  for (std::size_t r = 0; r < d.num_records(); ++r) CHECK(d.at(r, 1) == d.at(r, 0));
}

TEST_CASE("same seed gives identical output") {
  const auto net = synthetic8_network();
  CHECK(forward_sample(net, 500, Seed{42}) == forward_sample(net, 500, Seed{42}));
  CHECK_FALSE(forward_sample(net, 500, Seed{42}) == forward_sample(net, 500, Seed{43}));
  const auto d = forward_sample(net, 500, Seed{42});
  CHECK(apply_mcar(d, MissingnessModel::k_per_record(2), Seed{9}) ==
        apply_mcar(d, MissingnessModel::k_per_record(2), Seed{9}));
}

TEST_CASE("empirical joint is close to the analytic joint") {
  const auto net = two_node_network();
  const auto d = forward_sample(net, 100000, Seed{2024});
  std::vector<double> freq(4, 0.0);
  for (std::size_t r = 0; r < d.num_records(); ++r) freq[static_cast<std::size_t>(d.at(r, 0) * 2 + d.at(r, 1))] += 1e-5;
  const auto exact = joint_distribution(net);
  CHECK(total_variation(JointTable({2, 2}, freq), exact) < 0.02);
}

TEST_CASE("bernoulli masking") {
  const auto d = forward_sample(two_node_network(), 100000, Seed{8});
  CHECK(apply_mcar(d, MissingnessModel::bernoulli({1.0, 1.0}), Seed{1}) == d);
  CHECK(apply_mcar(d, MissingnessModel::complete(), Seed{1}) == d);
  const auto m = apply_mcar(d, MissingnessModel::bernoulli({0.75, 1.0}), Seed{1});
  std::size_t missing0 = 0;
  for (std::size_t r = 0; r < m.num_records(); ++r) {
    missing0 += m.is_missing(r, 0);
    CHECK_FALSE(m.is_missing(r, 1));
  }
  CHECK(std::abs(static_cast<double>(missing0) / 1e5 - 0.25) <= 0.005);
}

TEST_CASE("masking never alters observed values") {
  const auto d = forward_sample(synthetic8_network(), 2000, Seed{10});
  for (const auto& model : {MissingnessModel::k_per_record(3), MissingnessModel::bernoulli(std::vector<double>(8, 0.6))}) {
    const auto once = apply_mcar(d, model, Seed{11});
    const auto twice = apply_mcar(once, model, Seed{12});
    for (std::size_t r = 0; r < d.num_records(); ++r)
      for (std::size_t i = 0; i < 8; ++i) {
        if (!once.is_missing(r, i)) CHECK(once.at(r, i) == d.at(r, i));
        if (once.is_missing(r, i)) CHECK(twice.is_missing(r, i));
      }
  }
}

TEST_CASE("k-per-record leaves exactly N - k observed cells") {
  const auto d = forward_sample(synthetic8_network(), 500, Seed{13});
  for (std::size_t k = 0; k < 8; ++k) {
    const auto m = apply_mcar(d, MissingnessModel::k_per_record(k), Seed{14 + k});
    for (std::size_t r = 0; r < m.num_records(); ++r) {
      std::size_t observed = 0;
      for (std::size_t i = 0; i < 8; ++i) observed += !m.is_missing(r, i);
      CHECK(observed == 8 - k);
    }
  }
  CHECK_THROWS_AS(apply_mcar(d, MissingnessModel::k_per_record(8), Seed{1}), InvalidArgument);
}

TEST_CASE("k-per-record deletes cells uniformly") {
  const auto d = forward_sample(synthetic8_network(), 40000, Seed{15});
  const auto m = apply_mcar(d, MissingnessModel::k_per_record(2), Seed{16});
  for (std::size_t i = 0; i < 8; ++i) {
    std::size_t missing = 0;
    for (std::size_t r = 0; r < m.num_records(); ++r) missing += m.is_missing(r, i);
    // P(missing) = 2/8, se about 0.0022.
    CHECK(std::abs(static_cast<double>(missing) / 40000.0 - 0.25) < 0.01);
  }
}

TEST_CASE("subset observation probabilities for N = 37") {
  CHECK(subset_observation_probability(37, 1, 3) == doctest::Approx(34.0 / 37.0).epsilon(1e-12));
  CHECK(subset_observation_probability(37, 1, 3) == doctest::Approx(0.9189).epsilon(1e-4));
  CHECK(subset_observation_probability(37, 2, 3) == doctest::Approx(0.8423).epsilon(1e-4));
  CHECK(subset_observation_probability(37, 4, 3) == doctest::Approx(0.7022).epsilon(1e-4));
  CHECK(subset_observation_probability(4, 2, 3) == 0.0);
  CHECK(subset_observation_probability(5, 0, 3) == 1.0);
}

TEST_CASE("missingness specs") {
  CHECK(MissingnessModel::parse("none").is_complete());
  CHECK(MissingnessModel::parse("kper:2").label() == "kper:2");
  CHECK(MissingnessModel::parse("bernoulli:0.75,1").label() == "bernoulli:0.75,1");
  CHECK_THROWS_AS(MissingnessModel::parse("mar"), InvalidArgument);
  CHECK_THROWS_AS(MissingnessModel::parse("kper:x"), InvalidArgument);
  CHECK_THROWS_AS(MissingnessModel::parse("bernoulli:1.5").validate(1), InvalidArgument);
  CHECK_THROWS_AS(MissingnessModel::parse("bernoulli:0.5").validate(2), InvalidArgument);
  const std::vector<std::size_t> both{0, 1};
  CHECK(MissingnessModel::bernoulli({0.75, 0.5}).observation_probability(both, 2) == doctest::Approx(0.375));
}
