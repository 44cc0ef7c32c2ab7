#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace urbanscope {

// A headed CSV file. Fields may be double-quoted; quotes inside quoted
// fields are doubled. Blank lines are skipped.
class CsvTable {
public:
  static CsvTable read(const std::string& path);
  static CsvTable parse(std::istream& in, const std::string& name);

  const std::vector<std::string>& header() const { return header_; }
  std::size_t rows() const { return rows_.size(); }
  std::size_t line(std::size_t row) const { return lines_[row]; }
  const std::string& name() const { return name_; }

  std::optional<std::size_t> column(const std::string& name) const;
  // Throws ParseError naming the missing column.
  std::size_t require(const std::string& name) const;

  const std::string& cell(std::size_t row, std::size_t col) const { return rows_[row][col]; }
  double number(std::size_t row, std::size_t col) const;
  long long integer(std::size_t row, std::size_t col) const;

private:
  std::string name_;
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
  std::vector<std::size_t> lines_;
};

std::vector<std::string> split_csv_line(const std::string& line);
std::string csv_escape(const std::string& s);

// 17 significant digits; parses back to the identical double.
std::string format_double(double v);

}  // namespace urbanscope
