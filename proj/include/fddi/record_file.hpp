#pragma once

#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "fddi/error.hpp"

namespace fddi {

// Line-oriented data files shared by the code table and the media table:
// UTF-8 text, '#' starts a comment, blank lines ignored, fields separated
// by whitespace. An optional "version N" directive may precede the records.
struct Record {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

struct RecordFile {
  int version = 0;
  std::vector<Record> records;
};

inline RecordFile parse_records(std::string_view text) {
  RecordFile file;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    Record rec{line_no, {}};
    for (std::string f; fields >> f;) rec.fields.push_back(std::move(f));
    if (rec.fields.empty()) continue;
    if (rec.fields[0] == "version") {
      if (rec.fields.size() != 2 || !file.records.empty())
        throw Error("BadRecordFile", "line " + std::to_string(line_no) + ": misplaced version directive");
      try {
        file.version = std::stoi(rec.fields[1]);
      } catch (const std::exception&) {
        throw Error("BadRecordFile", "line " + std::to_string(line_no) + ": bad version number");
      }
      continue;
    }
    file.records.push_back(std::move(rec));
  }
  return file;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("FileNotFound", path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace fddi
