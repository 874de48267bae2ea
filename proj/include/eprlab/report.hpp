#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

namespace eprlab::cli {

/// A cell of an output record; monostate renders as an empty CSV cell / null.
using Value = std::variant<std::monostate, std::string, double, std::int64_t, std::uint64_t, bool>;

struct Record {
  std::vector<std::pair<std::string, Value>> fields;

  Record& add(std::string key, Value value) {
    fields.emplace_back(std::move(key), std::move(value));
    return *this;
  }
};

/// Command output: the effective configuration plus a list of records that
/// share one column layout.
struct Report {
  std::string command;
  /// Full effective configuration, embedded verbatim in JSON output.
  nlohmann::json config;
  /// Configuration columns prefixed to every CSV/JSON record.
  Record config_columns;
  std::vector<Record> records;
};

enum class OutputFormat { Table, Csv, Json };

void render(const Report& report, OutputFormat format, std::ostream& out);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

}  // namespace eprlab::cli
