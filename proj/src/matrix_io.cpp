#include "tsed/matrix_io.hpp"

#include <charconv>
#include <istream>
#include <ostream>

#include "tsed/binary_io.hpp"
#include "tsed/error.hpp"

namespace tsed {

namespace {

void write_number(std::ostream& out, double value) {
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::general, 9);
  out.write(buffer, result.ptr - buffer);
}

}  // namespace

void write_matrix_csv(std::ostream& out, const DistanceMatrix& m, std::span<const std::uint64_t> row_ids,
                      std::span<const std::uint64_t> col_ids) {
  if (row_ids.size() != m.rows || col_ids.size() != m.cols) {
    throw std::invalid_argument("id lists do not match the matrix shape");
  }
  out << "item_id";
  for (std::uint64_t id : col_ids) out << ',' << id;
  out << '\n';
  for (std::size_t r = 0; r < m.rows; ++r) {
    out << row_ids[r];
    for (std::size_t c = 0; c < m.cols; ++c) {
      out << ',';
      write_number(out, m(r, c));
    }
    out << '\n';
  }
}

void write_matrix_binary(std::ostream& out, const DistanceMatrix& m) {
  io::write_u64(out, m.rows);
  io::write_u64(out, m.cols);
  for (double v : m.values) io::write_f64(out, v);
}

DistanceMatrix read_matrix_binary(std::istream& in) {
  DistanceMatrix m;
  m.rows = io::read_u64(in);
  m.cols = io::read_u64(in);
  if (m.cols != 0 && m.rows > (std::size_t{1} << 40) / m.cols) throw FormatError("implausible matrix shape");
  m.values.resize(m.rows * m.cols);
  for (double& v : m.values) v = io::read_f64(in);
  return m;
}

void write_label_sidecar(std::ostream& out, std::span<const TraceItem> items) {
  out << "item_id\taccount_id\tlabel\ttimestamp\n";
  for (const TraceItem& item : items) {
    out << item.item_id << '\t' << item.account_id << '\t'
        << (item.label ? to_string(*item.label) : std::string_view("-")) << '\t' << item.timestamp << '\n';
  }
}

}  // namespace tsed
