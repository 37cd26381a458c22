#include "gapbench/csv.hpp"

#include "gapbench/error.hpp"

namespace gapbench::csv {

std::optional<Row> Reader::next() {
  int c = in_.get();
  if (c == std::char_traits<char>::eof()) return std::nullopt;

  record_line_ = line_;
  Row row;
  std::string field;
  bool quoted = false;
  bool field_started_quoted = false;

  for (;; c = in_.get()) {
    if (c == std::char_traits<char>::eof()) {
      if (quoted) {
        throw Error(ErrorKind::Parse, "unterminated quoted field starting on line " +
                                          std::to_string(record_line_));
      }
      row.push_back(std::move(field));
      return row;
    }
    const char ch = static_cast<char>(c);
    if (quoted) {
      if (ch == '"') {
        if (in_.peek() == '"') {
          in_.get();
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        if (ch == '\n') ++line_;
        field += ch;
      }
      continue;
    }
    switch (ch) {
      case '"':
        if (field.empty() && !field_started_quoted) {
          quoted = true;
          field_started_quoted = true;
        } else {
          field += ch;
        }
        break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        field_started_quoted = false;
        break;
      case '\r':
        if (in_.peek() == '\n') break;
        [[fallthrough]];
      case '\n':
        ++line_;
        row.push_back(std::move(field));
        return row;
      default:
        field += ch;
    }
  }
}

std::string quote(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_row(const Row& row) {
  std::string out;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out += ',';
    out += quote(row[i]);
  }
  return out;
}

}  // namespace gapbench::csv
