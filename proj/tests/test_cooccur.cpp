#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "tsed/binary_io.hpp"
#include "tsed/cooccur.hpp"
#include "tsed/error.hpp"

using namespace tsed;

namespace {

std::vector<TraceItem> items_of(std::vector<std::vector<TokenId>> tweets) {
  std::vector<TraceItem> items;
  for (std::size_t i = 0; i < tweets.size(); ++i) {
    TraceItem item;
    item.item_id = i;
    item.tokens = std::move(tweets[i]);
    items.push_back(std::move(item));
  }
  return items;
}

std::vector<TraceItem> random_items(std::mt19937_64& rng, std::size_t n, TokenId vocab) {
  std::vector<std::vector<TokenId>> tweets;
  for (std::size_t i = 0; i < n; ++i) tweets.push_back(testing::random_sequence(rng, 7, vocab));
  return items_of(std::move(tweets));
}

// Dense cosine computed from scratch, for comparison with the sparse path.
double dense_cosine(const std::vector<std::vector<double>>& c, std::size_t x, std::size_t y) {
  if (x == y) return 1.0;
  double dot = 0, nx = 0, ny = 0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    dot += c[x][k] * c[y][k];
    nx += c[x][k] * c[x][k];
    ny += c[y][k] * c[y][k];
  }
  if (nx == 0 || ny == 0) return 0.0;
  return dot / (std::sqrt(nx) * std::sqrt(ny));
}

}  // namespace

TEST_CASE("counts are binarized per tweet over distinct types") {
  const TokenId a = 0, b = 1;
  const auto m = build_cooccurrence(items_of({{a, b, a}}), 2);
  CHECK(m.count(a, b) == 1);
  CHECK(m.count(b, a) == 1);
  CHECK(m.count(a, a) == 0);
  CHECK(m.nnz() == 1);

  CHECK(build_cooccurrence(items_of({{a, b}, {a, b}}), 2).count(a, b) == 2);

  const auto lone = build_cooccurrence(items_of({{a}}), 2);
  CHECK(lone.row(a).empty());
  CHECK(lone.row_norm(a) == 0.0);
  CHECK(lone.nnz() == 0);
}

TEST_CASE("word_similarity examples") {
  const TokenId a = 0, b = 1, c = 2;
  const auto m = build_cooccurrence(items_of({{a, c}, {b, c}}), 3);
  CHECK(word_similarity(m, a, a) == 1.0);
  CHECK(word_similarity(m, a, b) == doctest::Approx(1.0).epsilon(1e-15));
  // a and c: rows (0,0,1) and (1,1,0) are orthogonal.
  CHECK(word_similarity(m, a, c) == 0.0);

  const auto zero = build_cooccurrence(items_of({{a}, {b, c}}), 3);
  CHECK(word_similarity(zero, a, b) == 0.0);
  CHECK(word_similarity(zero, a, a) == 1.0);
}

TEST_CASE("sparse similarity matches a dense computation") {
  std::mt19937_64 rng(3);
  const TokenId vocab = 12;
  const auto items = random_items(rng, 80, vocab);
  const auto m = build_cooccurrence(items, vocab);

  std::vector<std::vector<double>> dense(vocab, std::vector<double>(vocab, 0.0));
  for (const auto& item : items) {
    std::vector<TokenId> types = item.tokens;
    std::sort(types.begin(), types.end());
    types.erase(std::unique(types.begin(), types.end()), types.end());
    for (std::size_t i = 0; i < types.size(); ++i) {
      for (std::size_t j = i + 1; j < types.size(); ++j) {
        dense[types[i]][types[j]] += 1;
        dense[types[j]][types[i]] += 1;
      }
    }
  }
  for (TokenId x = 0; x < vocab; ++x) {
    for (TokenId y = 0; y < vocab; ++y) {
      CHECK(m.count(x, y) == dense[x][y]);
      const double s = word_similarity(m, x, y);
      CHECK(s == doctest::Approx(dense_cosine(dense, x, y)).epsilon(1e-12));
      CHECK(s == word_similarity(m, y, x));
      CHECK(s >= 0.0);
      CHECK(s <= 1.0);
    }
  }
}

TEST_CASE("tweet order does not matter and doubling scales counts") {
  std::mt19937_64 rng(4);
  const TokenId vocab = 15;
  auto items = random_items(rng, 60, vocab);
  const auto base = build_cooccurrence(items, vocab);

  auto shuffled = items;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const auto permuted = build_cooccurrence(shuffled, vocab);

  auto twice = items;
  twice.insert(twice.end(), items.begin(), items.end());
  const auto doubled = build_cooccurrence(twice, vocab);

  const auto t0 = base.upper_triples();
  const auto t1 = permuted.upper_triples();
  const auto t2 = doubled.upper_triples();
  REQUIRE(t0.size() == t1.size());
  REQUIRE(t0.size() == t2.size());
  for (std::size_t i = 0; i < t0.size(); ++i) {
    CHECK(t0[i].x == t1[i].x);
    CHECK(t0[i].y == t1[i].y);
    CHECK(t0[i].count == t1[i].count);
    CHECK(t2[i].count == 2 * t0[i].count);
  }
  for (TokenId x = 0; x < vocab; ++x) {
    for (TokenId y = 0; y < vocab; ++y) {
      CHECK(word_similarity(doubled, x, y) == doctest::Approx(word_similarity(base, x, y)).epsilon(1e-14));
    }
  }
}

TEST_CASE("SimilarityCache is invisible") {
  std::mt19937_64 rng(5);
  const TokenId vocab = 20;
  const auto m = build_cooccurrence(random_items(rng, 100, vocab), vocab);
  SimilarityCache cache(m);
  SimilarityCache tiny(m, 3);  // forces repeated eviction
  for (int i = 0; i < 2000; ++i) {
    const TokenId x = std::uniform_int_distribution<TokenId>(0, vocab - 1)(rng);
    const TokenId y = std::uniform_int_distribution<TokenId>(0, vocab - 1)(rng);
    const double direct = word_similarity(m, x, y);
    CHECK(cache(x, y) == direct);
    CHECK(cache(y, x) == direct);
    CHECK(tiny(x, y) == direct);
  }
}

TEST_CASE("from_triples validates its input") {
  CHECK_THROWS(CooccurrenceMatrix::from_triples(3, {{1, 1, 2}}));
  CHECK_THROWS(CooccurrenceMatrix::from_triples(3, {{0, 5, 2}}));
  CHECK_THROWS(CooccurrenceMatrix::from_triples(3, {{0, 1, 2}, {0, 1, 3}}));
  const auto m = CooccurrenceMatrix::from_triples(3, {{1, 2, 4}, {0, 2, 3}});
  CHECK(m.count(2, 1) == 4);
  CHECK(m.count(0, 2) == 3);
  CHECK(m.row_norm(2) == doctest::Approx(5.0));
}

TEST_CASE("save and load round trip") {
  testing::TempDir dir("cooccur");
  std::mt19937_64 rng(6);
  const TokenId vocab = 30;
  const auto m = build_cooccurrence(random_items(rng, 200, vocab), vocab);
  const auto path = dir / "c.bin";
  save_cooccurrence(m, path);
  const auto loaded = load_cooccurrence(path);
  CHECK(loaded.vocab_size() == m.vocab_size());
  CHECK(loaded.nnz() == m.nnz());
  for (TokenId x = 0; x < vocab; ++x) {
    for (TokenId y = 0; y < vocab; ++y) CHECK(word_similarity(loaded, x, y) == word_similarity(m, x, y));
  }

  const auto again = dir / "c2.bin";
  save_cooccurrence(loaded, again);
  CHECK(testing::read_file(path) == testing::read_file(again));
  CHECK(std::filesystem::file_size(path) == 16 + 16 * m.nnz());
}

TEST_CASE("load rejects corrupted or truncated files") {
  testing::TempDir dir("cooccur_bad");
  const auto m = build_cooccurrence(items_of({{0, 1, 2}, {1, 3}}), 4);
  const auto path = dir / "c.bin";
  save_cooccurrence(m, path);

  std::string bytes = testing::read_file(path);
  bytes[20] ^= 0x01;
  std::ofstream(path, std::ios::binary | std::ios::trunc) << bytes;
  CHECK_THROWS_AS(load_cooccurrence(path), FormatError);

  save_cooccurrence(m, path);
  std::filesystem::resize_file(path, 24);
  io::write_checksum_sidecar(path);
  CHECK_THROWS_AS(load_cooccurrence(path), FormatError);

  save_cooccurrence(m, path);
  std::filesystem::remove(path.string() + ".fnv64");
  CHECK_THROWS_AS(load_cooccurrence(path), FormatError);

  CHECK_THROWS_AS(load_cooccurrence(dir / "missing.bin"), FormatError);
}
