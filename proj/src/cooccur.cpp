#include "tsed/cooccur.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "tsed/binary_io.hpp"
#include "tsed/error.hpp"

namespace tsed {

CooccurrenceMatrix CooccurrenceMatrix::from_triples(std::size_t vocab_size, std::vector<Triple> triples) {
  std::vector<std::size_t> degree(vocab_size, 0);
  for (const Triple& t : triples) {
    if (t.x >= t.y || t.y >= vocab_size) throw std::invalid_argument("co-occurrence triple out of range");
    if (t.count == 0 || t.count > UINT32_MAX) throw std::invalid_argument("co-occurrence count out of range");
    ++degree[t.x];
    ++degree[t.y];
  }

  CooccurrenceMatrix m;
  m.offsets_.assign(vocab_size + 1, 0);
  for (std::size_t x = 0; x < vocab_size; ++x) m.offsets_[x + 1] = m.offsets_[x] + degree[x];
  m.cells_.resize(m.offsets_.back());
  std::vector<std::size_t> fill(m.offsets_.begin(), m.offsets_.end() - 1);
  for (const Triple& t : triples) {
    const auto count = static_cast<std::uint32_t>(t.count);
    m.cells_[fill[t.x]++] = {t.y, count};
    m.cells_[fill[t.y]++] = {t.x, count};
  }

  m.norms_.assign(vocab_size, 0.0);
  for (std::size_t x = 0; x < vocab_size; ++x) {
    auto first = m.cells_.begin() + static_cast<std::ptrdiff_t>(m.offsets_[x]);
    auto last = m.cells_.begin() + static_cast<std::ptrdiff_t>(m.offsets_[x + 1]);
    std::sort(first, last, [](const Cell& a, const Cell& b) { return a.column < b.column; });
    if (std::adjacent_find(first, last, [](const Cell& a, const Cell& b) { return a.column == b.column; }) != last) {
      throw std::invalid_argument("duplicate co-occurrence triple");
    }
    std::uint64_t sum_sq = 0;
    for (auto it = first; it != last; ++it) sum_sq += static_cast<std::uint64_t>(it->count) * it->count;
    m.norms_[x] = std::sqrt(static_cast<double>(sum_sq));
  }
  return m;
}

std::span<const CooccurrenceMatrix::Cell> CooccurrenceMatrix::row(TokenId x) const {
  if (x >= vocab_size()) throw std::out_of_range("token index out of range");
  return {cells_.data() + offsets_[x], offsets_[x + 1] - offsets_[x]};
}

std::uint32_t CooccurrenceMatrix::count(TokenId x, TokenId y) const {
  const auto r = row(x);
  const auto it = std::lower_bound(r.begin(), r.end(), y, [](const Cell& c, TokenId v) { return c.column < v; });
  return it != r.end() && it->column == y ? it->count : 0;
}

std::vector<CooccurrenceMatrix::Triple> CooccurrenceMatrix::upper_triples() const {
  std::vector<Triple> triples;
  triples.reserve(nnz());
  for (TokenId x = 0; x < vocab_size(); ++x) {
    for (const Cell& c : row(x)) {
      if (c.column > x) triples.push_back({x, c.column, c.count});
    }
  }
  return triples;
}

CooccurrenceMatrix build_cooccurrence(std::span<const TraceItem> items, std::size_t vocab_size) {
  std::unordered_map<std::uint64_t, std::uint64_t> pairs;
  std::vector<TokenId> types;
  for (const TraceItem& item : items) {
    types.assign(item.tokens.begin(), item.tokens.end());
    std::sort(types.begin(), types.end());
    types.erase(std::unique(types.begin(), types.end()), types.end());
    if (!types.empty() && types.back() >= vocab_size) throw std::invalid_argument("token index exceeds vocabulary");
    for (std::size_t i = 0; i < types.size(); ++i) {
      for (std::size_t j = i + 1; j < types.size(); ++j) {
        ++pairs[(static_cast<std::uint64_t>(types[i]) << 32) | types[j]];
      }
    }
  }
  std::vector<CooccurrenceMatrix::Triple> triples;
  triples.reserve(pairs.size());
  for (const auto& [key, count] : pairs) {
    triples.push_back({static_cast<TokenId>(key >> 32), static_cast<TokenId>(key & 0xffffffffu), count});
  }
  return CooccurrenceMatrix::from_triples(vocab_size, std::move(triples));
}

double word_similarity(const CooccurrenceMatrix& matrix, TokenId x, TokenId y) {
  if (x == y) return 1.0;
  const double nx = matrix.row_norm(x);
  const double ny = matrix.row_norm(y);
  if (nx == 0.0 || ny == 0.0) return 0.0;
  const auto rx = matrix.row(x);
  const auto ry = matrix.row(y);
  std::uint64_t dot = 0;
  auto i = rx.begin();
  auto j = ry.begin();
  while (i != rx.end() && j != ry.end()) {
    if (i->column < j->column) {
      ++i;
    } else if (j->column < i->column) {
      ++j;
    } else {
      dot += static_cast<std::uint64_t>(i->count) * j->count;
      ++i;
      ++j;
    }
  }
  return std::min(1.0, static_cast<double>(dot) / (nx * ny));
}

double SimilarityCache::operator()(TokenId x, TokenId y) {
  if (x == y) return 1.0;
  const std::uint64_t key = x < y ? (static_cast<std::uint64_t>(x) << 32) | y
                                  : (static_cast<std::uint64_t>(y) << 32) | x;
  if (const auto it = memo_.find(key); it != memo_.end()) return it->second;
  if (memo_.size() >= max_entries_) memo_.clear();
  const double value = word_similarity(*matrix_, std::min(x, y), std::max(x, y));
  memo_.emplace(key, value);
  return value;
}

void save_cooccurrence(const CooccurrenceMatrix& matrix, const std::filesystem::path& path) {
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    io::write_u64(out, matrix.vocab_size());
    io::write_u64(out, matrix.nnz());
    for (const auto& t : matrix.upper_triples()) {
      io::write_u32(out, t.x);
      io::write_u32(out, t.y);
      io::write_u64(out, t.count);
    }
    if (!out) throw ConfigError("failed writing " + path.string());
  }
  io::write_checksum_sidecar(path);
}

CooccurrenceMatrix load_cooccurrence(const std::filesystem::path& path) {
  io::verify_checksum_sidecar(path);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  const std::uint64_t vocab_size = io::read_u64(in);
  const std::uint64_t nnz = io::read_u64(in);
  if (nnz > (std::filesystem::file_size(path) - 16) / 16 || 16 + 16 * nnz != std::filesystem::file_size(path)) {
    throw FormatError(path.string() + ": size does not match the record count");
  }
  std::vector<CooccurrenceMatrix::Triple> triples;
  triples.reserve(nnz);
  for (std::uint64_t i = 0; i < nnz; ++i) {
    const TokenId x = io::read_u32(in);
    const TokenId y = io::read_u32(in);
    triples.push_back({x, y, io::read_u64(in)});
  }
  try {
    return CooccurrenceMatrix::from_triples(vocab_size, std::move(triples));
  } catch (const std::invalid_argument& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace tsed
