#include "eprlab/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <type_traits>

namespace eprlab::cli {
namespace {

std::string csv_text(const Value& value) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return "";
        } else if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else if constexpr (std::is_same_v<T, double>) {
          return format_double(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else {
          return std::to_string(v);
        }
      },
      value);
}

std::string table_text(const Value& value) {
  if (const auto* d = std::get_if<double>(&value)) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", *d);
    return buf;
  }
  if (std::holds_alternative<std::monostate>(value)) return "-";
  return csv_text(value);
}

nlohmann::json json_value(const Value& value) {
  return std::visit(
      [](const auto& v) -> nlohmann::json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else {
          return v;
        }
      },
      value);
}

std::vector<std::pair<std::string, Value>> full_row(const Report& report, const Record& record) {
  auto row = report.config_columns.fields;
  row.insert(row.end(), record.fields.begin(), record.fields.end());
  return row;
}

void render_csv(const Report& report, std::ostream& out) {
  if (report.records.empty()) return;
  const auto header = full_row(report, report.records.front());
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i].first;
  out << '\n';
  for (const auto& record : report.records) {
    const auto row = full_row(report, record);
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_text(row[i].second);
    out << '\n';
  }
}

void render_json(const Report& report, std::ostream& out) {
  nlohmann::ordered_json doc;
  doc["command"] = report.command;
  doc["config"] = report.config;
  doc["records"] = nlohmann::ordered_json::array();
  for (const auto& record : report.records) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (const auto& [key, value] : full_row(report, record)) obj[key] = json_value(value);
    doc["records"].push_back(std::move(obj));
  }
  out << doc.dump(2) << '\n';
}

void render_table(const Report& report, std::ostream& out) {
  out << "# eprlab " << report.command;
  for (const auto& [key, value] : report.config_columns.fields) {
    if (key != "command") out << ' ' << key << '=' << table_text(value);
  }
  out << '\n';
  if (report.records.empty()) return;

  const auto& layout = report.records.front().fields;
  std::vector<std::size_t> width(layout.size());
  for (std::size_t i = 0; i < layout.size(); ++i) width[i] = layout[i].first.size();
  for (const auto& record : report.records) {
    for (std::size_t i = 0; i < record.fields.size(); ++i) {
      width[i] = std::max(width[i], table_text(record.fields[i].second).size());
    }
  }
  const auto emit = [&](std::size_t i, const std::string& text) {
    out << (i ? "  " : "") << text << std::string(width[i] - text.size(), ' ');
  };
  for (std::size_t i = 0; i < layout.size(); ++i) emit(i, layout[i].first);
  out << '\n';
  for (const auto& record : report.records) {
    for (std::size_t i = 0; i < record.fields.size(); ++i) emit(i, table_text(record.fields[i].second));
    out << '\n';
  }
}

}  // namespace

std::string format_double(double value) {
  if (!std::isfinite(value)) return std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, result.ptr);
}

void render(const Report& report, OutputFormat format, std::ostream& out) {
  switch (format) {
    case OutputFormat::Table: render_table(report, out); break;
    case OutputFormat::Csv: render_csv(report, out); break;
    case OutputFormat::Json: render_json(report, out); break;
  }
}

}  // namespace eprlab::cli
