#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "nalbn/data.hpp"
#include "nalbn/model.hpp"
#include "nalbn/rng.hpp"

namespace nalbn {

/// Each cell of variable i is observed independently with probability p_i.
struct BernoulliMissingness {
  std::vector<double> observe_prob;
};

/// Exactly k cells per record are deleted, uniformly without replacement.
struct KPerRecordMissingness {
  std::size_t k = 0;
};

/// MCAR mechanism, used both to mask data and to compute observation
/// probabilities of node subsets.
class MissingnessModel {
 public:
  using Variant = std::variant<BernoulliMissingness, KPerRecordMissingness>;

  /// No missingness (an empty Bernoulli model, read as p_i = 1 for all i).
  MissingnessModel() = default;
  MissingnessModel(BernoulliMissingness m) : model_(std::move(m)) {}  // NOLINT(google-explicit-constructor)
  MissingnessModel(KPerRecordMissingness m) : model_(m) {}            // NOLINT(google-explicit-constructor)

  static MissingnessModel complete() { return {}; }
  static MissingnessModel bernoulli(std::vector<double> observe_prob) {
    return BernoulliMissingness{std::move(observe_prob)};
  }
  static MissingnessModel k_per_record(std::size_t k) { return KPerRecordMissingness{k}; }

  /// Parses "none", "bernoulli:p1,p2,..." or "kper:k".
  static MissingnessModel parse(const std::string& spec);
  std::string label() const;

  const Variant& variant() const noexcept { return model_; }
  bool is_complete() const;

  /// Throws InvalidArgument unless the model fits a network of `num_nodes`
  /// (p_i in [0,1] and one p per node, or 0 <= k < N).
  void validate(std::size_t num_nodes) const;

  /// P(every node in `subset` observed). `subset` holds distinct indices.
  double observation_probability(std::span<const std::size_t> subset, std::size_t num_nodes) const;

 private:
  Variant model_;
};

/// n i.i.d. complete records drawn node by node in topological order.
Dataset forward_sample(const BayesNet& net, std::size_t n, Seed seed);

/// Masks cells according to `model`; cells already missing stay missing.
Dataset apply_mcar(const Dataset& data, const MissingnessModel& model, Seed seed);

/// C(N-k, s) / C(N, s): chance that a fixed s-subset of cells survives k
/// uniform deletions. Zero when s + k > N.
double subset_observation_probability(std::size_t num_nodes, std::size_t k, std::size_t s);

}  // namespace nalbn
