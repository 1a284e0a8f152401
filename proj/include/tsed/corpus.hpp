#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tsed {

/// The three troll roles kept from the source data. The numeric order is the
/// fixed label order used by every tie-break (Left < Right < News).
enum class RoleLabel : std::uint8_t { LeftTroll = 0, RightTroll = 1, NewsFeed = 2 };

inline constexpr std::size_t kNumLabels = 3;
inline constexpr std::array<RoleLabel, kNumLabels> kAllLabels = {
    RoleLabel::LeftTroll, RoleLabel::RightTroll, RoleLabel::NewsFeed};

constexpr std::size_t label_index(RoleLabel label) { return static_cast<std::size_t>(label); }
std::string_view to_string(RoleLabel label);
/// Maps a source `account_category` value; anything but the three roles is nullopt.
std::optional<RoleLabel> parse_role_label(std::string_view category);

using TokenId = std::uint32_t;
/// Seconds since the Unix epoch, UTC.
using Timestamp = std::int64_t;

struct TraceItem {
  std::uint64_t item_id = 0;
  std::string account_id;
  Timestamp timestamp = 0;
  std::vector<TokenId> tokens;  // original word order
  std::optional<RoleLabel> label;

  /// True when every token was filtered out by the vocabulary.
  bool is_empty() const { return tokens.empty(); }
};

inline constexpr std::string_view kUrlToken = "$URL$";
inline constexpr std::string_view kMentionToken = "$MENTION$";

struct TokenizerRules {
  bool lowercase = true;
  bool replace_urls = true;      // -> $URL$
  bool replace_mentions = true;  // -> $MENTION$
};

/// Splits tweet text into word, hashtag and emoji tokens.
///
/// Whitespace separates chunks. Inside a chunk, `http://`, `https://` or
/// `www.` starts a URL running to the end of the chunk; `@name` at the start
/// of a word is a mention; `#name` is kept whole as a hashtag; each emoji code
/// point is its own token. All other punctuation (ASCII and the common
/// Unicode punctuation blocks) is deleted, so "don't" becomes "dont".
std::vector<std::string> tokenize(std::string_view raw_text, const TokenizerRules& rules = {});

/// Parses `month/day/year hour:minute[:second]` as UTC.
std::optional<Timestamp> parse_publish_date(std::string_view text);

/// Physical column names for the logical columns the ingester needs.
struct ColumnMap {
  std::string author = "author";
  std::string content = "content";
  std::string publish_date = "publish_date";
  std::string account_category = "account_category";
  // Optional row filter on a language column; disabled when either is empty.
  std::string language_column;
  std::string language_value;

  /// Parses `logical=physical` pairs separated by commas, e.g.
  /// "author=handle,content=text". Unknown logical names are a ConfigError.
  static ColumnMap parse(std::string_view spec);
};

struct RawRecord {
  std::string account;
  std::string text;
  Timestamp timestamp = 0;
  RoleLabel label = RoleLabel::LeftTroll;
};

struct IngestStats {
  std::size_t total_rows = 0;  // data rows, header excluded
  std::size_t retained = 0;
  std::size_t dropped_category = 0;
  std::size_t dropped_language = 0;
  std::size_t malformed = 0;
  std::size_t bad_date = 0;

  std::size_t dropped() const { return dropped_category + dropped_language + malformed + bad_date; }
};

struct IngestResult {
  std::vector<RawRecord> records;
  IngestStats stats;
};

/// Throws ConfigError on a missing file, an empty file, or a required column
/// that is absent from the header.
IngestResult ingest_csv(const std::filesystem::path& path, const ColumnMap& columns = {});
IngestResult ingest_csv(std::istream& in, const ColumnMap& columns = {});

class Vocabulary {
 public:
  Vocabulary() = default;
  /// Tokens take the indices of their position. Throws if duplicated.
  Vocabulary(std::vector<std::string> tokens, std::vector<std::uint64_t> counts,
             std::uint32_t min_count);

  std::optional<TokenId> find(const std::string& token) const;
  const std::string& token(TokenId id) const { return tokens_.at(id); }
  std::uint64_t count(TokenId id) const { return counts_.at(id); }
  std::size_t size() const { return tokens_.size(); }
  std::uint32_t min_count() const { return min_count_; }

 private:
  std::vector<std::string> tokens_;
  std::vector<std::uint64_t> counts_;
  std::unordered_map<std::string, TokenId> index_;
  std::uint32_t min_count_ = 1;
};

/// Counts token occurrences over every record and keeps those seen at least
/// `min_count` times. Indices are ordered by descending count, then by token.
Vocabulary build_vocabulary(std::span<const RawRecord> records, std::uint32_t min_count,
                            const TokenizerRules& rules = {});

struct MaterializeResult {
  std::vector<TraceItem> items;
  std::uint64_t removed_tokens = 0;  // out-of-vocabulary occurrences dropped
  std::size_t empty_items = 0;
};

/// One TraceItem per record, item_id = record position. Out-of-vocabulary
/// tokens are removed; items left with no tokens are kept and count as empty.
MaterializeResult materialize(std::span<const RawRecord> records, const Vocabulary& vocab,
                              const TokenizerRules& rules = {});

std::vector<std::string> detokenize(std::span<const TokenId> tokens, const Vocabulary& vocab);

struct Corpus {
  Vocabulary vocab;
  std::vector<TraceItem> items;
};

// Audit dump: one line per item,
// item_id \t account_id \t timestamp \t label \t space-joined tokens
void write_record_dump(std::ostream& out, const Corpus& corpus);
void write_vocabulary(std::ostream& out, const Vocabulary& vocab);
Vocabulary read_vocabulary(std::istream& in);
std::vector<TraceItem> read_record_dump(std::istream& in, const Vocabulary& vocab);

}  // namespace tsed
