#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <unordered_map>
#include <vector>

#include "tsed/corpus.hpp"

namespace tsed {

/// Symmetric token-by-token counts of "used in the same tweet", stored as
/// compressed sparse rows with both (x, y) and (y, x) present. The diagonal
/// is always zero.
class CooccurrenceMatrix {
 public:
  struct Cell {
    TokenId column;
    std::uint32_t count;
  };
  struct Triple {
    TokenId x;  // x < y
    TokenId y;
    std::uint64_t count;
  };

  CooccurrenceMatrix() = default;
  /// Builds from upper-triangle triples (x < y, any order, no duplicates).
  static CooccurrenceMatrix from_triples(std::size_t vocab_size, std::vector<Triple> triples);

  std::size_t vocab_size() const { return norms_.size(); }
  /// Stored unordered pairs.
  std::size_t nnz() const { return cells_.size() / 2; }
  std::uint32_t count(TokenId x, TokenId y) const;
  std::span<const Cell> row(TokenId x) const;
  double row_norm(TokenId x) const { return norms_.at(x); }
  /// Sorted by (x, y).
  std::vector<Triple> upper_triples() const;

 private:
  std::vector<std::size_t> offsets_{0};
  std::vector<Cell> cells_;
  std::vector<double> norms_;
};

/// Per tweet, every unordered pair of distinct token types present adds one.
CooccurrenceMatrix build_cooccurrence(std::span<const TraceItem> items, std::size_t vocab_size);

/// Cosine of the two co-occurrence rows; 1 when x == y, 0 when either row
/// is all zeros.
double word_similarity(const CooccurrenceMatrix& matrix, TokenId x, TokenId y);

/// Memoizes word_similarity under the key (min, max). Not thread-safe: use
/// one instance per worker.
class SimilarityCache {
 public:
  explicit SimilarityCache(const CooccurrenceMatrix& matrix, std::size_t max_entries = 1u << 22)
      : matrix_(&matrix), max_entries_(max_entries) {}

  double operator()(TokenId x, TokenId y);

  const CooccurrenceMatrix& matrix() const { return *matrix_; }

 private:
  const CooccurrenceMatrix* matrix_;
  std::size_t max_entries_;
  std::unordered_map<std::uint64_t, double> memo_;
};

// Binary layout, little-endian: u64 vocab_size, u64 nnz, then nnz records of
// (u32 x, u32 y, u64 count) sorted by (x, y) with x < y. A `.fnv64` sidecar
// holds the FNV-1a digest of the file.
void save_cooccurrence(const CooccurrenceMatrix& matrix, const std::filesystem::path& path);
CooccurrenceMatrix load_cooccurrence(const std::filesystem::path& path);

}  // namespace tsed
