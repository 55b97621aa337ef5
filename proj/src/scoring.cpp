#include "nalbn/scoring.hpp"

#include <cmath>
#include <sstream>

#include "nalbn/errors.hpp"

namespace nalbn {

namespace {

void check_schema(const Dataset& data, const Dag& dag) {
  if (dag.num_nodes() != data.num_variables())
    throw SchemaMismatch("dag has " + std::to_string(dag.num_nodes()) + " nodes, dataset has " +
                         std::to_string(data.num_variables()) + " variables");
  validate_dag(dag);
}

// sum_{j,k} n_ikj ln(n_ikj / n_ij), accumulated in extended precision.
long double weighted_log_sum(const SufficientCounts& c) {
  long double acc = 0.0L;
  for (std::size_t j = 0; j < c.num_configs; ++j) {
    const auto nj = c.n_ij[j];
    if (nj == 0) continue;
    const long double log_nj = std::log(static_cast<long double>(nj));
    for (std::size_t k = 0; k < c.cardinality; ++k) {
      const auto nk = c.count(k, j);
      if (nk == 0) continue;
      const auto w = static_cast<long double>(nk);
      acc += w * (std::log(w) - log_nj);
    }
  }
  return acc;
}

}  // namespace

Penalty Penalty::power_law(double coefficient, double exponent) {
  if (!(coefficient > 0.0)) throw InvalidArgument("power-law coefficient must be positive");
  if (!(exponent > 0.0 && exponent < 1.0)) throw InvalidArgument("power-law exponent must lie in (0, 1)");
  return {PenaltyKind::power_law, coefficient, exponent};
}

Penalty Penalty::parse(const std::string& spec, double default_coefficient) {
  if (spec == "aic") return aic();
  if (spec == "bic") return bic();
  if (spec == "none") return none();
  if (spec.rfind("power:", 0) == 0) {
    const auto body = spec.substr(6);
    const auto colon = body.find(':');
    try {
      const double alpha = std::stod(body.substr(0, colon));
      const double coef = colon == std::string::npos ? default_coefficient : std::stod(body.substr(colon + 1));
      return power_law(coef, alpha);
    } catch (const std::logic_error&) {
      throw InvalidArgument("bad power-law spec '" + spec + "'");
    }
  }
  throw InvalidArgument("unrecognised penalty '" + spec + "'");
}

std::string Penalty::label() const {
  switch (kind) {
    case PenaltyKind::none:
      return "none";
    case PenaltyKind::aic:
      return "aic";
    case PenaltyKind::bic:
      return "bic";
    case PenaltyKind::power_law: {
      std::ostringstream out;
      out << "power:" << exponent;
      return out.str();
    }
  }
  return "unknown";
}

double lambda_value(const Penalty& penalty, std::uint64_t sample_size) {
  if (sample_size == 0) throw ZeroSampleSize();
  const auto m = static_cast<double>(sample_size);
  switch (penalty.kind) {
    case PenaltyKind::none:
      return 0.0;
    case PenaltyKind::aic:
      return 1.0 / m;
    case PenaltyKind::bic:
      return 0.5 * std::log(m) / m;
    case PenaltyKind::power_law:
      return penalty.coefficient * std::pow(m, -penalty.exponent);
  }
  return 0.0;
}

double penalized(double nal_value, std::uint64_t df, const Penalty& penalty, std::uint64_t sample_size) {
  if (nal_value == kNegInf) return kNegInf;
  return nal_value - lambda_value(penalty, sample_size) * static_cast<double>(df);
}

double node_nal(const SufficientCounts& counts) {
  if (counts.n_i == 0) return kNegInf;
  return static_cast<double>(weighted_log_sum(counts) / static_cast<long double>(counts.n_i));
}

double nal(const Dataset& data, const Dag& dag) {
  check_schema(data, dag);
  long double total = 0.0L;
  for (std::size_t i = 0; i < dag.num_nodes(); ++i) {
    const auto c = count_sufficient_stats(data, i, dag.parents(i));
    if (c.n_i == 0) return kNegInf;
    total += weighted_log_sum(c) / static_cast<long double>(c.n_i);
  }
  return static_cast<double>(total);
}

double standard_avg_loglik(const Dataset& data, const Dag& dag) {
  check_schema(data, dag);
  if (data.num_records() == 0) return kNegInf;
  long double total = 0.0L;
  for (std::size_t i = 0; i < dag.num_nodes(); ++i)
    total += weighted_log_sum(count_sufficient_stats(data, i, dag.parents(i)));
  return static_cast<double>(total / static_cast<long double>(data.num_records()));
}

double score_global(const Dataset& data, const Dag& dag, const Penalty& penalty) {
  const double l = nal(data, dag);
  if (l == kNegInf) return kNegInf;
  return penalized(l, df_complexity(dag, data.variables()), penalty, data.num_records());
}

std::vector<NodeScore> score_global_nodes(const Dataset& data, const Dag& dag, const Penalty& penalty) {
  check_schema(data, dag);
  std::vector<NodeScore> out;
  for (std::size_t i = 0; i < dag.num_nodes(); ++i) {
    const auto c = count_sufficient_stats(data, i, dag.parents(i));
    NodeScore s{i, dag.parents(i), node_nal(c), c.n_i, family_df(data.variables(), i, dag.parents(i)), 0.0};
    s.score = s.nal == kNegInf ? kNegInf : penalized(s.nal, s.df, penalty, data.num_records());
    out.push_back(std::move(s));
  }
  return out;
}

DecomposableScore score_decomposable(const Dataset& data, const Dag& dag, const Penalty& penalty) {
  check_schema(data, dag);
  DecomposableScore result;
  long double total = 0.0L;
  bool unobservable = false;
  for (std::size_t i = 0; i < dag.num_nodes(); ++i) {
    const auto c = count_sufficient_stats(data, i, dag.parents(i));
    NodeScore s{i, dag.parents(i), node_nal(c), c.n_i, family_df(data.variables(), i, dag.parents(i)), kNegInf};
    if (c.n_i == 0) {
      unobservable = true;
    } else {
      s.score = penalized(s.nal, s.df, penalty, static_cast<std::uint64_t>(c.n_i));
      total += s.score;
    }
    result.nodes.push_back(std::move(s));
  }
  result.total = unobservable ? kNegInf : static_cast<double>(total);
  return result;
}

}  // namespace nalbn
