#include "dhlab_cli/report.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "dhlab/errors.hpp"
#include "dhlab/measure.hpp"

namespace dhlab::cli {
namespace {

// Non-finite values keep their spelling instead of collapsing to null.
Json cell_json(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return format_number(v);
          return v;
        } else {
          return v;
        }
      },
      cell);
}

}  // namespace

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw std::logic_error("table " + name + ": row width does not match the header");
  }
  rows.push_back(std::move(row));
}

std::string cell_text(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return "";
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else if constexpr (std::is_same_v<T, long long>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, double>) {
          return format_number(v);
        } else {
          return v;
        }
      },
      cell);
}

std::string to_json_text(const Report& report) {
  Json doc;
  doc["config"] = report.config;
  Json summary = Json::object();
  for (const auto& [key, value] : report.summary) summary[key] = cell_json(value);
  doc["summary"] = std::move(summary);
  Json tables = Json::object();
  for (const Table& t : report.tables) {
    Json rows = Json::array();
    for (const auto& row : t.rows) {
      Json r = Json::array();
      for (const Cell& c : row) r.push_back(cell_json(c));
      rows.push_back(std::move(r));
    }
    tables[t.name] = {{"columns", t.columns}, {"rows", std::move(rows)}};
  }
  doc["tables"] = std::move(tables);
  doc["notes"] = report.notes;
  return doc.dump(2) + "\n";
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\r\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> parse_csv_record(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          fields.back() += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  if (quoted) throw ParseError("cli", "parse_csv_record", "unterminated quote in '" + line + "'");
  return fields;
}

std::string to_csv_text(const Report& report) {
  std::ostringstream out;
  for (const auto& [key, value] : report.config.items()) {
    std::string text;
    if (value.is_string()) {
      text = value.get<std::string>();
    } else if (value.is_null()) {
      text = "";
    } else if (value.is_array()) {
      // lists are ';'-joined so that comma-bearing specs survive
      for (std::size_t i = 0; i < value.size(); ++i) {
        if (i) text += ';';
        const auto& item = value[i];
        text += item.is_string() ? item.get<std::string>()
                : item.is_number_float() ? format_number(item.get<double>())
                                         : item.dump();
      }
    } else if (value.is_number_float()) {
      text = format_number(value.get<double>());
    } else {
      text = value.dump();
    }
    out << "config." << key << ',' << csv_field(text) << '\n';
  }
  for (const auto& [key, value] : report.summary) out << "summary." << key << ',' << csv_field(cell_text(value)) << '\n';
  for (std::size_t i = 0; i < report.notes.size(); ++i) out << "notes." << i << ',' << csv_field(report.notes[i]) << '\n';
  out << '\n';
  if (!report.tables.empty()) {
    const Table& t = report.tables.front();
    for (std::size_t j = 0; j < t.columns.size(); ++j) out << (j ? "," : "") << csv_field(t.columns[j]);
    out << '\n';
    for (const auto& row : t.rows) {
      for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << csv_field(cell_text(row[j]));
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace dhlab::cli
