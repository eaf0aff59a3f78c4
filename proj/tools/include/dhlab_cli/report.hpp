#pragma once

// Flat report model shared by every subcommand: a config echo, a summary of
// scalar results, named rectangular tables and free-form notes. The first
// table is the primary (plot-ready) one.

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace dhlab::cli {

using Json = nlohmann::ordered_json;

using Cell = std::variant<std::monostate, bool, long long, double, std::string>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
};

struct Report {
  Json config;  // RunConfig echo, already in key order
  std::vector<std::pair<std::string, Cell>> summary;
  std::vector<Table> tables;
  std::vector<std::string> notes;

  void set(std::string key, Cell value) { summary.emplace_back(std::move(key), std::move(value)); }
};

/// Single JSON document, two-space indent, trailing newline.
std::string to_json_text(const Report& report);

/// `config.<key>,<value>` and `summary.<key>,<value>` lines, `notes.<i>,<text>`,
/// a blank line, then the primary table with a header row.
std::string to_csv_text(const Report& report);

/// RFC 4180 quoting: fields containing a comma, quote, CR or LF are quoted.
std::string csv_field(const std::string& text);

/// Splits one CSV record (no embedded newlines) into fields.
std::vector<std::string> parse_csv_record(const std::string& line);

std::string cell_text(const Cell& cell);

}  // namespace dhlab::cli
