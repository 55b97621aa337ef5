#include "nalbn/csv_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <string>

#include "nalbn/errors.hpp"

namespace nalbn {

namespace {

std::vector<std::string> split_line(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return fields;
}

Cell parse_cell(const std::string& field, std::size_t line_no) {
  if (field == kMissingToken) return kMissing;
  Cell value = 0;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (field.empty() || ec != std::errc() || ptr != last || value < 0)
    throw FormatError("line " + std::to_string(line_no) + ": invalid cell '" + field + "'");
  return value;
}

struct RawTable {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> columns;
};

RawTable read_raw(std::istream& in) {
  RawTable raw;
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty CSV input");
  raw.header = split_line(line);
  raw.columns.resize(raw.header.size());
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_line(line);
    if (fields.size() != raw.header.size())
      throw FormatError("line " + std::to_string(line_no) + ": expected " + std::to_string(raw.header.size()) +
                        " fields, found " + std::to_string(fields.size()));
    for (std::size_t c = 0; c < fields.size(); ++c) raw.columns[c].push_back(parse_cell(fields[c], line_no));
  }
  return raw;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return in;
}

}  // namespace

Dataset read_csv(std::istream& in, std::span<const Variable> schema) {
  auto raw = read_raw(in);
  std::map<std::string, std::size_t> position;
  for (std::size_t c = 0; c < raw.header.size(); ++c)
    if (!position.emplace(raw.header[c], c).second) throw FormatError("duplicate column '" + raw.header[c] + "'");
  if (raw.header.size() != schema.size())
    throw SchemaMismatch("CSV has " + std::to_string(raw.header.size()) + " columns, schema has " +
                         std::to_string(schema.size()) + " variables");
  std::vector<std::vector<Cell>> columns;
  columns.reserve(schema.size());
  for (const auto& v : schema) {
    const auto it = position.find(v.name);
    if (it == position.end()) throw SchemaMismatch("CSV lacks a column for variable '" + v.name + "'");
    columns.push_back(std::move(raw.columns[it->second]));
  }
  return Dataset(std::vector<Variable>(schema.begin(), schema.end()), std::move(columns));
}

Dataset read_csv(const std::filesystem::path& path, std::span<const Variable> schema) {
  auto in = open_input(path);
  return read_csv(in, schema);
}

Dataset read_csv(std::istream& in) {
  auto raw = read_raw(in);
  std::vector<Variable> vars;
  for (std::size_t c = 0; c < raw.header.size(); ++c) {
    Cell top = 1;
    for (auto v : raw.columns[c]) top = std::max(top, v);
    vars.push_back({raw.header[c], static_cast<std::size_t>(top) + 1});
  }
  return Dataset(std::move(vars), std::move(raw.columns));
}

Dataset read_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_csv(in);
}

void write_csv(std::ostream& out, const Dataset& data) {
  const auto& vars = data.variables();
  for (std::size_t v = 0; v < vars.size(); ++v) out << (v ? "," : "") << vars[v].name;
  out << '\n';
  for (std::size_t s = 0; s < data.num_records(); ++s) {
    for (std::size_t v = 0; v < vars.size(); ++v) {
      if (v) out << ',';
      const Cell c = data.at(s, v);
      if (c == kMissing)
        out << kMissingToken;
      else
        out << c;
    }
    out << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const Dataset& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  write_csv(out, data);
}

}  // namespace nalbn
