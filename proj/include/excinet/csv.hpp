#ifndef EXCINET_CSV_HPP
#define EXCINET_CSV_HPP

#include <cstdio>
#include <string>
#include <vector>

namespace excinet::csv {

/// Numeric cell with 12 significant digits (plenty below every tolerance in
/// the test suite, stable across runs).
inline std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

/// RFC-4180 quoting; our cells are numbers and identifiers, so this is a
/// safety net rather than a hot path.
inline std::string escape(const std::string& cell) {
  if (cell.find_first_of(",\"\n\r") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

/// One line, LF-terminated.
inline std::string join_row(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += escape(cells[i]);
  }
  line += '\n';
  return line;
}

}  // namespace excinet::csv

#endif  // EXCINET_CSV_HPP
