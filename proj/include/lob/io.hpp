#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace lob {

// Fixed 12-significant-digit scientific notation, used for every float the
// CLI writes to CSV so that re-runs are byte-identical.
inline std::string format_sci(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.11e", x);
  return std::string(buf);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool in_quote = false;
  for (const char c : line) {
    if (in_quote) {
      if (c == '"')
        in_quote = false;
      else
        cur += c;
    } else if (c == '"') {
      in_quote = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;  // data rows, in file order
  std::vector<int> line_numbers;               // 1-based source line of each row
};

inline CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open input file '" + path + "'");
  CsvTable table;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    auto fields = split_csv_line(line);
    if (table.header.empty()) {
      table.header = std::move(fields);
    } else {
      table.rows.push_back(std::move(fields));
      table.line_numbers.push_back(lineno);
    }
  }
  if (table.header.empty())
    throw std::invalid_argument("input file '" + path + "' is empty");
  return table;
}

inline double parse_csv_double(const std::string& field, const std::string& column,
                               const std::string& path, int line) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(field, &pos);
    if (pos != field.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(path + ":" + std::to_string(line) + ": column '" + column +
                                "': expected a number, got '" + field + "'");
  }
}

}  // namespace lob
