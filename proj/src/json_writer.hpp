#pragma once

#include <cmath>
#include <limits>
#include <string>

#include <json.hpp>

#include "cqtf/io.hpp"

namespace cqtf::detail {

// nlohmann prints the shortest round-trip form; payloads here use fixed %.17g.
inline void dump_into(std::string& out, const nlohmann::ordered_json& j, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(indent * depth), ' ');
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) { out += "{}"; return; }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + nlohmann::ordered_json(it.key()).dump() + ": ";
        dump_into(out, it.value(), indent, depth + 1);
      }
      out += "\n" + close + "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) { out += "[]"; return; }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        dump_into(out, j[i], indent, depth + 1);
      }
      out += "\n" + close + "]";
      return;
    }
    case nlohmann::json::value_t::number_float: {
      const double x = j.get<double>();
      const std::string s = format_number(x);
      out += std::isfinite(x) ? s : "\"" + s + "\"";
      return;
    }
    default:
      out += j.dump();
  }
}

inline std::string dump(const nlohmann::ordered_json& j, int indent = 2) {
  std::string out;
  dump_into(out, j, indent, 0);
  out += '\n';
  return out;
}

/// Reads a number written by dump, accepting the "inf"/"nan" strings.
inline double read_number(const nlohmann::ordered_json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  return j.get<double>();
}

}  // namespace cqtf::detail
