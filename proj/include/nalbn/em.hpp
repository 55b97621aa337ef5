#pragma once

#include <span>
#include <vector>

#include "nalbn/data.hpp"
#include "nalbn/model.hpp"

namespace nalbn {

/// Tolerance for row sums of the parameter tables passed to q_star.
inline constexpr double kNormalizationTolerance = 1e-9;

/// One family's share of the one-step EM objective.
struct QStarFamily {
  SufficientCounts counts;
  std::vector<double> reference_config;  // P'(Pa_i = j), one entry per configuration
  NodeTable reference;                   // P'(X_i = k | Pa_i = j)
  NodeTable target;                      // P(X_i = k | Pa_i = j)
};

struct QStarInput {
  std::vector<QStarFamily> families;
};

/// sum_i sum_jk (n_ikj + (n - n_i) P'_ij P'_ikj) ln P_ikj. A zero P_ikj with
/// zero weight contributes 0; with positive weight the result is -inf.
/// Throws NonNormalizedParameters for entries outside [0,1] or rows (and
/// the reference configuration distribution) not summing to 1.
double q_star(const QStarInput& input);

struct QStarMaximizer {
  Cpt cpt;                                   // n_ikj / n_ij
  std::vector<std::vector<bool>> undefined;  // per node, per config: n_ij == 0 (row set uniform)
};

/// Throws UnobservableNode if some family has n_i == 0.
QStarMaximizer q_star_maximizer(std::span<const SufficientCounts> counts);

/// Input with P = P' = the maximizer and P'(Pa_i = j) = n_ij / n_i.
QStarInput q_star_input_at_maximizer(std::span<const SufficientCounts> counts);

/// Counts of every family of `dag` in `data`.
std::vector<SufficientCounts> family_counts(const Dataset& data, const Dag& dag);

}  // namespace nalbn
