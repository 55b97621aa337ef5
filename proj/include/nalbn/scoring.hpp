#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "nalbn/data.hpp"
#include "nalbn/model.hpp"

namespace nalbn {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

enum class PenaltyKind { none, aic, bic, power_law };

/// Penalization schedule lambda_m; the complexity measure is df.
///   AIC: 1/m   BIC: 0.5 ln(m)/m   PowerLaw: c * m^-alpha   None: 0
struct Penalty {
  PenaltyKind kind = PenaltyKind::none;
  double coefficient = 1.0;
  double exponent = 0.5;

  static Penalty none() { return {}; }
  static Penalty aic() { return {PenaltyKind::aic}; }
  static Penalty bic() { return {PenaltyKind::bic}; }
  /// Throws InvalidArgument unless c > 0 and alpha in (0, 1).
  static Penalty power_law(double coefficient, double exponent);

  /// "aic", "bic", "none", "power:ALPHA" or "power:ALPHA:COEF"; the
  /// coefficient defaults to `default_coefficient` (1/N in the experiments).
  static Penalty parse(const std::string& spec, double default_coefficient);
  std::string label() const;
};

double lambda_value(const Penalty& penalty, std::uint64_t sample_size);

/// score = nal - lambda_m * df, with -inf propagating.
double penalized(double nal, std::uint64_t df, const Penalty& penalty, std::uint64_t sample_size);

/// l(X_i | Pa_i, D_n) = sum_j (n_ij/n_i) sum_k (n_ikj/n_ij) ln(n_ikj/n_ij),
/// with 0 ln 0 = 0. Returns -inf when n_i = 0.
double node_nal(const SufficientCounts& counts);

/// Per-node part of a score.
struct NodeScore {
  std::size_t node = 0;
  ParentSet parents;
  double nal = 0.0;
  std::int64_t n_i = 0;
  std::uint64_t df = 0;
  double score = 0.0;
};

/// Node-average log-likelihood: sum of node_nal over all families of `dag`.
double nal(const Dataset& data, const Dag& dag);

/// (1/n) sum_i sum_jk n_ikj ln(n_ikj/n_ij): the ordinary sample-average
/// log-likelihood. Equals nal() on complete data. -inf when n = 0.
double standard_avg_loglik(const Dataset& data, const Dag& dag);

/// l(G|D_n) - lambda_n df(G), lambda at the full sample size n.
double score_global(const Dataset& data, const Dag& dag, const Penalty& penalty);

struct DecomposableScore {
  double total = 0.0;
  std::vector<NodeScore> nodes;
};

/// sum_i [ l(X_i|Pa_i) - lambda_{n_i} df(X_i|Pa_i) ], lambda at each n_i.
DecomposableScore score_decomposable(const Dataset& data, const Dag& dag, const Penalty& penalty);

/// Per-node breakdown with a single lambda_n (the global score's terms).
std::vector<NodeScore> score_global_nodes(const Dataset& data, const Dag& dag, const Penalty& penalty);

}  // namespace nalbn
