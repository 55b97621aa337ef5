#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "nalbn/model.hpp"

namespace nalbn {

/// Variables plus a dag, without probabilities ("structure" files).
struct NetworkStructure {
  std::vector<Variable> variables;
  Dag dag;
};

/// Parses the network format:
///   {"variables": [{"name": .., "cardinality": ..}, ...],
///    "parents": [[...], ...],
///    "cpt": [[[p00, p01, ..], ..rows..], ..per node..]}
/// Rows follow the canonical parent-configuration order. With `renormalize`
/// each row is rescaled to sum to 1 before validation; otherwise rows off by
/// more than 1e-12 are rejected.
BayesNet network_from_json(const nlohmann::json& doc, bool renormalize = false);
nlohmann::json network_to_json(const BayesNet& net);

BayesNet load_network(const std::filesystem::path& path, bool renormalize = false);
void save_network(const BayesNet& net, const std::filesystem::path& path);

/// Reads "variables" and "parents"; a "cpt" member, if present, is ignored.
NetworkStructure structure_from_json(const nlohmann::json& doc);
nlohmann::json structure_to_json(const NetworkStructure& structure);

NetworkStructure load_structure(const std::filesystem::path& path);
void save_structure(const NetworkStructure& structure, const std::filesystem::path& path);

nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace nalbn
