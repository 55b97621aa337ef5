#include "nalbn/sampling.hpp"

#include <numeric>
#include <sstream>

#include "nalbn/errors.hpp"

namespace nalbn {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double parse_double(const std::string& text, const std::string& spec) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw InvalidArgument("bad number '" + text + "' in missingness spec '" + spec + "'");
  }
}

}  // namespace

MissingnessModel MissingnessModel::parse(const std::string& spec) {
  if (spec == "none" || spec == "complete") return complete();
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw InvalidArgument("unrecognised missingness spec '" + spec + "'");
  const auto kind = spec.substr(0, colon);
  const auto body = spec.substr(colon + 1);
  if (kind == "bernoulli") {
    std::vector<double> probs;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) probs.push_back(parse_double(item, spec));
    if (probs.empty()) throw InvalidArgument("bernoulli spec needs at least one probability");
    return bernoulli(std::move(probs));
  }
  if (kind == "kper") {
    const double k = parse_double(body, spec);
    if (k < 0 || k != static_cast<double>(static_cast<std::size_t>(k)))
      throw InvalidArgument("kper spec needs a non-negative integer");
    return k_per_record(static_cast<std::size_t>(k));
  }
  throw InvalidArgument("unrecognised missingness spec '" + spec + "'");
}

std::string MissingnessModel::label() const {
  return std::visit(overloaded{[](const BernoulliMissingness& b) -> std::string {
                                 if (b.observe_prob.empty()) return "none";
                                 std::ostringstream out;
                                 out << "bernoulli:";
                                 for (std::size_t i = 0; i < b.observe_prob.size(); ++i)
                                   out << (i ? "," : "") << b.observe_prob[i];
                                 return out.str();
                               },
                               [](const KPerRecordMissingness& k) { return "kper:" + std::to_string(k.k); }},
                    model_);
}

bool MissingnessModel::is_complete() const {
  return std::visit(overloaded{[](const BernoulliMissingness& b) {
                                 for (double p : b.observe_prob)
                                   if (p != 1.0) return false;
                                 return true;
                               },
                               [](const KPerRecordMissingness& k) { return k.k == 0; }},
                    model_);
}

void MissingnessModel::validate(std::size_t num_nodes) const {
  std::visit(overloaded{[&](const BernoulliMissingness& b) {
                          if (b.observe_prob.empty()) return;
                          if (b.observe_prob.size() != num_nodes)
                            throw InvalidArgument("bernoulli model has " + std::to_string(b.observe_prob.size()) +
                                                  " probabilities for " + std::to_string(num_nodes) + " variables");
                          for (double p : b.observe_prob)
                            if (!(p >= 0.0 && p <= 1.0))
                              throw InvalidArgument("observation probability outside [0,1]");
                        },
                        [&](const KPerRecordMissingness& k) {
                          if (k.k >= num_nodes && !(k.k == 0 && num_nodes == 0))
                            throw InvalidArgument("kper deletes " + std::to_string(k.k) + " of " +
                                                  std::to_string(num_nodes) + " cells per record");
                        }},
             model_);
}

double MissingnessModel::observation_probability(std::span<const std::size_t> subset, std::size_t num_nodes) const {
  return std::visit(overloaded{[&](const BernoulliMissingness& b) {
                                 double p = 1.0;
                                 if (b.observe_prob.empty()) return p;
                                 for (auto i : subset) p *= b.observe_prob.at(i);
                                 return p;
                               },
                               [&](const KPerRecordMissingness& k) {
                                 return subset_observation_probability(num_nodes, k.k, subset.size());
                               }},
                    model_);
}

Dataset forward_sample(const BayesNet& net, std::size_t n, Seed seed) {
  const auto& vars = net.variables();
  const auto& dag = net.dag();
  const auto order = topological_order(dag);
  const std::size_t width = vars.size();

  // Cumulative rows for inverse-CDF draws.
  std::vector<std::vector<double>> cumulative(width);
  for (std::size_t i = 0; i < width; ++i) {
    const auto& t = net.table(i);
    auto& cum = cumulative[i];
    cum.resize(t.values().size());
    for (std::size_t j = 0; j < t.num_configs(); ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < t.cardinality(); ++k) {
        acc += t.prob(j, k);
        cum[j * t.cardinality() + k] = acc;
      }
    }
  }

  std::vector<std::vector<Cell>> columns(width, std::vector<Cell>(n));
  Rng rng(seed);
  for (std::size_t s = 0; s < n; ++s) {
    for (auto i : order) {
      const auto& pa = dag.parents(i);
      std::size_t j = 0;
      for (auto p : pa) j = j * vars[p].cardinality + static_cast<std::size_t>(columns[p][s]);
      const auto q = vars[i].cardinality;
      const double* row = cumulative[i].data() + j * q;
      const double u = rng.uniform();
      std::size_t k = 0;
      while (k + 1 < q && u >= row[k]) ++k;
      columns[i][s] = static_cast<Cell>(k);
    }
  }
  return Dataset(vars, std::move(columns));
}

Dataset apply_mcar(const Dataset& data, const MissingnessModel& model, Seed seed) {
  const std::size_t width = data.num_variables();
  model.validate(width);
  auto columns = data.columns();
  const std::size_t n = data.num_records();
  Rng rng(seed);
  std::visit(overloaded{[&](const BernoulliMissingness& b) {
                          if (b.observe_prob.empty()) return;
                          for (std::size_t s = 0; s < n; ++s)
                            for (std::size_t i = 0; i < width; ++i) {
                              const double p = b.observe_prob[i];
                              if (p == 1.0) continue;
                              if (rng.uniform() >= p) columns[i][s] = kMissing;
                            }
                        },
                        [&](const KPerRecordMissingness& k) {
                          if (k.k == 0) return;
                          std::vector<std::size_t> slots(width);
                          for (std::size_t s = 0; s < n; ++s) {
                            std::iota(slots.begin(), slots.end(), std::size_t{0});
                            // Partial Fisher-Yates: the first k slots are the deleted cells.
                            for (std::size_t m = 0; m < k.k; ++m) {
                              const auto pick = m + static_cast<std::size_t>(rng.below(width - m));
                              std::swap(slots[m], slots[pick]);
                              columns[slots[m]][s] = kMissing;
                            }
                          }
                        }},
             model.variant());
  return Dataset(data.variables(), std::move(columns));
}

double subset_observation_probability(std::size_t num_nodes, std::size_t k, std::size_t s) {
  if (s + k > num_nodes) return 0.0;
  double p = 1.0;
  for (std::size_t t = 0; t < s; ++t)
    p *= static_cast<double>(num_nodes - k - t) / static_cast<double>(num_nodes - t);
  return p;
}

}  // namespace nalbn
