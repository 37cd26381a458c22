#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// RFC 4180-style CSV: comma separated, double-quoted fields may contain
// commas, quotes ("") and newlines.
namespace gapbench::csv {

using Row = std::vector<std::string>;

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  // Next record, or nullopt at end of input. Throws Parse on an unterminated
  // quoted field.
  std::optional<Row> next();

  // 1-based line number where the most recently returned record started.
  std::size_t line() const noexcept { return record_line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 1;
  std::size_t record_line_ = 0;
};

std::string quote(std::string_view field);
std::string format_row(const Row& row);

}  // namespace gapbench::csv
