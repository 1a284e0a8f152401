#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>

#include "tsed/parallel.hpp"

namespace tsed {

/// Header line `item_id,<col ids...>`, then `<row id>,<values...>` with
/// 9 significant digits.
void write_matrix_csv(std::ostream& out, const DistanceMatrix& m,
                      std::span<const std::uint64_t> row_ids, std::span<const std::uint64_t> col_ids);

/// u64 rows, u64 cols, then row-major f64, all little-endian.
void write_matrix_binary(std::ostream& out, const DistanceMatrix& m);
DistanceMatrix read_matrix_binary(std::istream& in);

/// TSV with header `item_id account_id label timestamp`.
void write_label_sidecar(std::ostream& out, std::span<const TraceItem> items);

}  // namespace tsed
