#include "nalbn/network_io.hpp"

#include <fstream>
#include <numeric>

#include "nalbn/errors.hpp"

namespace nalbn {

using nlohmann::json;

namespace {

std::vector<Variable> parse_variables(const json& doc) {
  if (!doc.contains("variables") || !doc["variables"].is_array())
    throw FormatError("network document lacks a \"variables\" array");
  std::vector<Variable> vars;
  for (const auto& v : doc["variables"]) {
    if (!v.is_object() || !v.contains("name") || !v.contains("cardinality"))
      throw FormatError("each variable needs \"name\" and \"cardinality\"");
    const auto card = v["cardinality"].get<long long>();
    if (card < 2) throw FormatError("variable '" + v["name"].get<std::string>() + "' has cardinality below 2");
    vars.push_back({v["name"].get<std::string>(), static_cast<std::size_t>(card)});
  }
  validate_variables(vars);
  return vars;
}

Dag parse_parents(const json& doc, const std::vector<Variable>& vars) {
  if (!doc.contains("parents") || !doc["parents"].is_array())
    throw FormatError("network document lacks a \"parents\" array");
  const auto& arr = doc["parents"];
  if (arr.size() != vars.size())
    throw FormatError("\"parents\" has " + std::to_string(arr.size()) + " entries for " +
                      std::to_string(vars.size()) + " variables");
  std::vector<ParentSet> parents;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    ParentSet pa;
    for (const auto& p : arr[i]) {
      const auto idx = p.get<long long>();
      if (idx < 0) throw MalformedParents(i, "negative parent index");
      pa.push_back(static_cast<std::size_t>(idx));
    }
    parents.push_back(std::move(pa));
  }
  Dag dag(std::move(parents));
  validate_dag(dag);
  return dag;
}

BayesNet network_from_json_impl(const json& doc, bool renormalize) {
  auto vars = parse_variables(doc);
  auto dag = parse_parents(doc, vars);
  if (!doc.contains("cpt") || !doc["cpt"].is_array()) throw FormatError("network document lacks a \"cpt\" array");
  const auto& cpt_doc = doc["cpt"];
  if (cpt_doc.size() != vars.size())
    throw FormatError("\"cpt\" has " + std::to_string(cpt_doc.size()) + " node tables for " +
                      std::to_string(vars.size()) + " variables");
  Cpt cpt;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const auto configs = parent_configurations(vars, dag.parents(i));
    const auto q = vars[i].cardinality;
    const auto& rows = cpt_doc[i];
    if (!rows.is_array() || rows.size() != configs)
      throw TableMismatch("cpt of node '" + vars[i].name + "' has " + std::to_string(rows.size()) +
                          " rows, expected " + std::to_string(configs));
    std::vector<double> probs;
    probs.reserve(configs * q);
    for (std::size_t j = 0; j < configs; ++j) {
      const auto& row = rows[j];
      if (!row.is_array() || row.size() != q)
        throw TableMismatch("cpt row " + std::to_string(j) + " of node '" + vars[i].name + "' has " +
                            std::to_string(row.size()) + " entries, expected " + std::to_string(q));
      std::vector<double> values = row.get<std::vector<double>>();
      if (renormalize) {
        const double sum = std::accumulate(values.begin(), values.end(), 0.0);
        if (!(sum > 0.0))
          throw TableMismatch("cpt row " + std::to_string(j) + " of node '" + vars[i].name + "' cannot be renormalized");
        for (auto& v : values) v /= sum;
      }
      probs.insert(probs.end(), values.begin(), values.end());
    }
    cpt.emplace_back(configs, q, std::move(probs));
  }
  return BayesNet(std::move(vars), std::move(dag), std::move(cpt));
}

}  // namespace

BayesNet network_from_json(const json& doc, bool renormalize) {
  try {
    return network_from_json_impl(doc, renormalize);
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed network document: ") + e.what());
  }
}

json network_to_json(const BayesNet& net) {
  json doc = structure_to_json({net.variables(), net.dag()});
  json cpt = json::array();
  for (const auto& table : net.cpt()) {
    json rows = json::array();
    for (std::size_t j = 0; j < table.num_configs(); ++j) {
      auto row = table.row(j);
      rows.push_back(std::vector<double>(row.begin(), row.end()));
    }
    cpt.push_back(std::move(rows));
  }
  doc["cpt"] = std::move(cpt);
  return doc;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

BayesNet load_network(const std::filesystem::path& path, bool renormalize) {
  return network_from_json(read_json_file(path), renormalize);
}

void save_network(const BayesNet& net, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  out << network_to_json(net).dump(2) << '\n';
}

NetworkStructure structure_from_json(const json& doc) {
  try {
    auto vars = parse_variables(doc);
    auto dag = parse_parents(doc, vars);
    return {std::move(vars), std::move(dag)};
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed structure document: ") + e.what());
  }
}

json structure_to_json(const NetworkStructure& structure) {
  json vars = json::array();
  for (const auto& v : structure.variables) vars.push_back({{"name", v.name}, {"cardinality", v.cardinality}});
  json parents = json::array();
  for (const auto& pa : structure.dag.parent_sets()) parents.push_back(pa);
  return {{"variables", std::move(vars)}, {"parents", std::move(parents)}};
}

NetworkStructure load_structure(const std::filesystem::path& path) {
  return structure_from_json(read_json_file(path));
}

void save_structure(const NetworkStructure& structure, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  out << structure_to_json(structure).dump(2) << '\n';
}

}  // namespace nalbn
