#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "nalbn/model.hpp"
#include "nalbn/sampling.hpp"

namespace nalbn {

inline constexpr std::size_t kDefaultStateCap = std::size_t{1} << 24;
/// Absolute tolerance for equality of population NAL values.
inline constexpr double kNalEqualityTolerance = 1e-9;

/// Probability of every joint state; node 0 is the slowest-varying index.
class JointTable {
 public:
  JointTable(std::vector<std::size_t> cardinalities, std::vector<double> probs);

  const std::vector<std::size_t>& cardinalities() const noexcept { return cards_; }
  const std::vector<double>& probs() const noexcept { return probs_; }
  std::size_t num_states() const noexcept { return probs_.size(); }
  double operator[](std::size_t state) const { return probs_[state]; }

  /// Decodes a state index into one value per node.
  void decode(std::size_t state, std::vector<std::int32_t>& values) const;

 private:
  std::vector<std::size_t> cards_;
  std::vector<double> probs_;
};

double total_variation(const JointTable& a, const JointTable& b);

/// Exact product of CPT entries for every joint state.
JointTable joint_distribution(const BayesNet& net, std::size_t max_states = kDefaultStateCap);

/// P_{G|G0}(x) = prod_i P0(X_i = x_i | Pa_i(G) = x_Pa), conditionals from
/// exact marginalization of P0. Zero-probability parent configurations get
/// uniform conditionals.
JointTable induced_joint(const Dag& g, const BayesNet& net0, std::size_t max_states = kDefaultStateCap);

/// Observed table of one family of G induced by G0 under MCAR.
struct FamilyTheta {
  std::size_t node = 0;
  ParentSet parents;
  std::size_t cardinality = 0;
  std::size_t num_configs = 1;
  double theta_i = 1.0;              // P(node and parents all observed)
  std::vector<double> theta_ij;      // P0(Pa_i = j)
  std::vector<double> theta_ikj;     // P0(X_i = k | Pa_i = j), k-major
  std::vector<bool> uniform_fill;    // config j had probability 0

  double conditional(std::size_t k, std::size_t j) const { return theta_ikj[k * num_configs + j]; }
};

struct InducedTable {
  std::vector<FamilyTheta> families;  // one per node of G
};

InducedTable induced_theta_mcar(const Dag& g, const BayesNet& net0, const MissingnessModel& missing,
                                std::size_t max_states = kDefaultStateCap);
/// Same, reusing an already enumerated joint of G0.
InducedTable induced_theta_mcar(const Dag& g, const JointTable& joint0, std::span<const Variable> variables,
                                const MissingnessModel& missing);

FamilyTheta induced_family(const JointTable& joint0, std::span<const Variable> variables, std::size_t node,
                           const ParentSet& parents);

/// l(X_i | Pa_i, G0) = sum_j theta_ij sum_k theta_ikj ln theta_ikj.
double family_population_nal(const FamilyTheta& family);

/// l(G | G0): sum of family_population_nal. Throws TableMismatch when the
/// table does not describe g's parent sets.
double population_nal(const Dag& g, const InducedTable& table);

struct IdentifiabilityEntry {
  Dag dag;
  std::uint64_t df = 0;
  double population_nal = 0.0;
  bool contains_truth = false;     // G0 is a subgraph of this dag
  bool maximizer = false;          // within tolerance of the maximum
  bool minimal_maximizer = false;  // maximizer with no maximizing proper subgraph
};

struct IdentifiabilityReport {
  double truth_nal = 0.0;  // l(G0)
  double max_nal = 0.0;
  double beta = 1.0;
  std::vector<IdentifiabilityEntry> entries;
  /// l(G|G0) <= l(G0) for supersets of G0, strictly below otherwise.
  bool satisfies_definition = false;
  /// The minimal maximizers are exactly {G0}.
  bool truth_identified = false;
  /// Every minimal maximizer is equivalent to G0 (and there is one).
  bool class_identified = false;

  std::vector<std::size_t> minimal_maximizers() const;
};

IdentifiabilityReport check_identifiability(const BayesNet& net0, std::span<const Dag> candidates,
                                            const MissingnessModel& missing,
                                            std::size_t max_states = kDefaultStateCap);

/// min over candidates and nodes of the positive observation probabilities
/// P(X_i and Pa_i all observed). Returns 0 if none is positive.
double beta_of_collection(std::span<const Dag> candidates, const MissingnessModel& missing);

}  // namespace nalbn
