#pragma once

#include <string>
#include <vector>

#include "nalbn/data.hpp"
#include "nalbn/model.hpp"
#include "oracles.hpp"

namespace testing_util {

inline std::vector<nalbn::Variable> vars(const std::vector<std::size_t>& cards) {
  std::vector<nalbn::Variable> out;
  for (std::size_t i = 0; i < cards.size(); ++i) out.push_back({"X" + std::to_string(i + 1), cards[i]});
  return out;
}

inline std::vector<std::size_t> cards_of(const std::vector<nalbn::Variable>& variables) {
  std::vector<std::size_t> out;
  for (const auto& v : variables) out.push_back(v.cardinality);
  return out;
}

inline nalbn::Dag to_dag(const oracle::Parents& g) { return nalbn::Dag(g); }
inline oracle::Parents to_parents(const nalbn::Dag& g) { return g.parent_sets(); }

inline nalbn::Dataset to_dataset(const std::vector<std::size_t>& cards, const oracle::Records& rows) {
  return nalbn::Dataset::from_rows(vars(cards), rows);
}

/// Network with the given structure and oracle-format tables.
inline nalbn::BayesNet to_net(const std::vector<std::size_t>& cards, const oracle::Parents& g,
                              const std::vector<oracle::Table>& cpt) {
  nalbn::Cpt tables;
  for (const auto& t : cpt) {
    std::vector<double> flat;
    for (const auto& row : t) flat.insert(flat.end(), row.begin(), row.end());
    tables.emplace_back(t.size(), t.front().size(), std::move(flat));
  }
  return nalbn::BayesNet(vars(cards), nalbn::Dag(g), std::move(tables));
}

inline oracle::Records to_records(const nalbn::Dataset& data) {
  oracle::Records rows(data.num_records(), std::vector<int>(data.num_variables()));
  for (std::size_t r = 0; r < data.num_records(); ++r)
    for (std::size_t i = 0; i < data.num_variables(); ++i) rows[r][i] = data.at(r, i);
  return rows;
}

}  // namespace testing_util
