#pragma once

#include <istream>
#include <string>
#include <vector>

namespace tsed {

/// RFC 4180 style reader: comma separated, `"` quoting with `""` escapes,
/// quoted fields may span lines. CRLF and LF line endings are both accepted.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}

  /// Reads the next record into `fields`. Returns false at end of input.
  /// A record with an unterminated quote is returned with `ok() == false`.
  bool next(std::vector<std::string>& fields);

  bool ok() const { return ok_; }
  std::size_t line() const { return line_; }

 private:
  std::istream& in_;
  bool ok_ = true;
  std::size_t line_ = 0;
};

}  // namespace tsed
