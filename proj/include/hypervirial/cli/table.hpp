#pragma once

// Row-oriented result tables and their CSV / JSON encodings.

#include <json.hpp>
#include <string>
#include <variant>
#include <vector>

namespace hypervirial::cli {

/// A missing value (failed row) serializes as an empty CSV field and JSON null.
using Cell = std::variant<std::monostate, double, long long, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();

  void add_row(std::vector<Cell> row);
};

/// 17 significant digits, enough to round-trip any double.
std::string format_double(double x);

/// RFC 4180 quoting: fields with a comma, quote or line break are quoted,
/// with embedded quotes doubled.
std::string csv_field(const std::string& s);

std::string to_csv(const Table& table);

/// {"meta": {...}, "rows": [{column: value, ...}, ...]}
std::string to_json(const Table& table);

}  // namespace hypervirial::cli
