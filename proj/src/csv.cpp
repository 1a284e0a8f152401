#include "tsed/csv.hpp"

namespace tsed {

bool CsvReader::next(std::vector<std::string>& fields) {
  fields.clear();
  ok_ = true;
  if (in_.peek() == std::char_traits<char>::eof()) return false;

  std::string field;
  bool in_quotes = false;
  bool quoted_field = false;
  ++line_;
  int c;
  while ((c = in_.get()) != std::char_traits<char>::eof()) {
    const char ch = static_cast<char>(c);
    if (in_quotes) {
      if (ch == '"') {
        if (in_.peek() == '"') {
          in_.get();
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        if (ch == '\n') ++line_;
        field.push_back(ch);
      }
      continue;
    }
    if (ch == '"' && field.empty() && !quoted_field) {
      in_quotes = true;
      quoted_field = true;
    } else if (ch == ',') {
      fields.push_back(std::move(field));
      field.clear();
      quoted_field = false;
    } else if (ch == '\r' && in_.peek() == '\n') {
      // CRLF: the '\n' ends the record on the next iteration.
    } else if (ch == '\n') {
      fields.push_back(std::move(field));
      return true;
    } else {
      field.push_back(ch);
    }
  }
  if (in_quotes) ok_ = false;
  fields.push_back(std::move(field));
  return true;
}

}  // namespace tsed
