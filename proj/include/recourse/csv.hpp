#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace recourse::csv {

struct Record {
  std::size_t line = 0;  // 1-based line where the record starts
  std::vector<std::string> fields;
};

/// RFC 4180 reader: comma separated, double-quoted fields may contain commas,
/// quotes ("") and newlines. Blank lines are skipped. Accepts LF and CRLF.
std::vector<Record> parse(std::string_view text);

std::string escape(std::string_view field);
std::string join(const std::vector<std::string>& fields);

}  // namespace recourse::csv
