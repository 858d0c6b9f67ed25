#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

namespace fddi::cli {

enum class Format { csv, json };

// A table of strings with a fixed column order. Numbers are formatted by
// the producer so output is byte-stable.
struct Report {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

inline std::string emit_csv(const Report& r) {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + csv_field(cells[i]);
    out += "\n";
  };
  line(r.columns);
  for (const auto& row : r.rows) line(row);
  return out;
}

inline std::string emit_json(const Report& r) {
  nlohmann::ordered_json doc;
  doc["columns"] = r.columns;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < r.columns.size(); ++i) obj[r.columns[i]] = i < row.size() ? row[i] : "";
    doc["rows"].push_back(std::move(obj));
  }
  return doc.dump(2) + "\n";
}

inline std::string emit_report(const Report& r, Format f) { return f == Format::csv ? emit_csv(r) : emit_json(r); }

// FNV-1a, used for input digests in run manifests.
inline std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace fddi::cli
