#include "urbanscope/csv.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>

#include "urbanscope/error.hpp"

namespace urbanscope {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvTable CsvTable::read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  return parse(in, path);
}

CsvTable CsvTable::parse(std::istream& in, const std::string& name) {
  CsvTable t;
  t.name_ = name;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (lineno == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    auto fields = split_csv_line(line);
    for (auto& f : fields) {
      const auto b = f.find_first_not_of(" \t");
      const auto e = f.find_last_not_of(" \t");
      f = b == std::string::npos ? std::string() : f.substr(b, e - b + 1);
    }
    if (!have_header) {
      t.header_ = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != t.header_.size())
      throw ParseError(name, lineno,
                       "expected " + std::to_string(t.header_.size()) + " fields, got " + std::to_string(fields.size()));
    t.rows_.push_back(std::move(fields));
    t.lines_.push_back(lineno);
  }
  if (!have_header) throw ParseError(name, lineno, "missing header row");
  return t;
}

std::optional<std::size_t> CsvTable::column(const std::string& col) const {
  for (std::size_t i = 0; i < header_.size(); ++i)
    if (header_[i] == col) return i;
  return std::nullopt;
}

std::size_t CsvTable::require(const std::string& col) const {
  if (auto c = column(col)) return *c;
  throw ParseError(name_, 1, "missing required column '" + col + "'");
}

double CsvTable::number(std::size_t row, std::size_t col) const {
  const std::string& s = rows_[row][col];
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || errno == ERANGE || end != s.c_str() + s.size() || !std::isfinite(v))
    throw ParseError(name_, lines_[row], "column '" + header_[col] + "': not a finite number: '" + s + "'");
  return v;
}

long long CsvTable::integer(std::size_t row, std::size_t col) const {
  const std::string& s = rows_[row][col];
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (s.empty() || errno == ERANGE || end != s.c_str() + s.size())
    throw ParseError(name_, lines_[row], "column '" + header_[col] + "': not an integer: '" + s + "'");
  return v;
}

}  // namespace urbanscope
