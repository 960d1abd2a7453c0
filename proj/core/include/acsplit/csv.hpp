#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace acsplit {

/// Shortest decimal that round-trips the double ("inf", "-inf", "nan" for
/// non-finite values).
std::string format_double(double v);

/// Quotes a cell if it contains a comma, quote or newline.
std::string csv_escape(std::string_view cell);

/// Minimal RFC 4180-style writer. Every row must match the header width.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::vector<std::string> header);

  void row(const std::vector<std::string>& cells);
  std::size_t columns() const noexcept { return header_.size(); }

 private:
  void write_line(const std::vector<std::string>& cells);

  std::ostream& out_;
  std::vector<std::string> header_;
};

/// Parses the output of CsvWriter back into rows (header included).
std::vector<std::vector<std::string>> parse_csv(std::istream& in);

}  // namespace acsplit
