#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string_view>

#include "nalbn/data.hpp"

namespace nalbn {

/// Literal token for a missing cell.
inline constexpr std::string_view kMissingToken = "NA";

/// Reads a dataset against a known schema. Header names are matched to the
/// schema by name, so columns may appear in any order. LF or CRLF.
Dataset read_csv(std::istream& in, std::span<const Variable> schema);
Dataset read_csv(const std::filesystem::path& path, std::span<const Variable> schema);

/// Reads a dataset whose schema is inferred: header order gives the variables,
/// cardinality is max(2, largest observed code + 1).
Dataset read_csv(std::istream& in);
Dataset read_csv(const std::filesystem::path& path);

/// Writes the header and one line per record, LF-terminated.
void write_csv(std::ostream& out, const Dataset& data);
void write_csv(const std::filesystem::path& path, const Dataset& data);

}  // namespace nalbn
