#include "tsed/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "tsed/csv.hpp"
#include "tsed/error.hpp"

namespace tsed {

std::string_view to_string(RoleLabel label) {
  switch (label) {
    case RoleLabel::LeftTroll: return "LeftTroll";
    case RoleLabel::RightTroll: return "RightTroll";
    case RoleLabel::NewsFeed: return "NewsFeed";
  }
  return "?";
}

std::optional<RoleLabel> parse_role_label(std::string_view category) {
  for (RoleLabel label : kAllLabels) {
    if (category == to_string(label)) return label;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Tokenizer

namespace {

struct CodePoint {
  char32_t value;
  std::size_t length;
};

CodePoint decode_utf8(std::string_view s, std::size_t pos) {
  const auto lead = static_cast<unsigned char>(s[pos]);
  std::size_t length = 1;
  char32_t value = lead;
  if (lead >= 0xF0 && lead < 0xF8) {
    length = 4;
    value = lead & 0x07;
  } else if (lead >= 0xE0) {
    length = 3;
    value = lead & 0x0F;
  } else if (lead >= 0xC0) {
    length = 2;
    value = lead & 0x1F;
  } else {
    return {value, 1};
  }
  if (pos + length > s.size()) return {lead, 1};
  for (std::size_t i = 1; i < length; ++i) {
    const auto cont = static_cast<unsigned char>(s[pos + i]);
    if ((cont & 0xC0) != 0x80) return {lead, 1};
    value = (value << 6) | (cont & 0x3F);
  }
  return {value, length};
}

bool is_space(char32_t c) {
  return c == ' ' || (c >= '\t' && c <= '\r') || c == 0xA0 || (c >= 0x2000 && c <= 0x200A) ||
         c == 0x2028 || c == 0x2029 || c == 0x202F || c == 0x205F || c == 0x3000;
}

// Zero-width joiners, variation selectors, keycap and skin-tone modifiers.
bool is_ignorable(char32_t c) {
  return c == 0x200B || c == 0x200C || c == 0x200D || c == 0xFE0E || c == 0xFE0F || c == 0x20E3 ||
         (c >= 0x1F3FB && c <= 0x1F3FF);
}

bool is_emoji(char32_t c) {
  return (c >= 0x1F000 && c <= 0x1FAFF) || (c >= 0x2600 && c <= 0x27BF) ||
         (c >= 0x2B00 && c <= 0x2BFF);
}

bool is_punctuation(char32_t c) {
  if (c < 0x80) {
    return c != '_' && ((c >= '!' && c <= '/') || (c >= ':' && c <= '@') || (c >= '[' && c <= '`') ||
                        (c >= '{' && c <= '~'));
  }
  return (c >= 0xA1 && c <= 0xBF) || c == 0xD7 || c == 0xF7 || (c >= 0x2010 && c <= 0x2027) ||
         (c >= 0x2030 && c <= 0x205E) || (c >= 0x3001 && c <= 0x3003) || (c >= 0xFF01 && c <= 0xFF0F);
}

bool is_word(char32_t c) {
  return c >= 0x21 && !is_space(c) && !is_ignorable(c) && !is_emoji(c) && !is_punctuation(c) &&
         c != 0x7F;
}

bool starts_with_url(std::string_view s) {
  auto has_prefix = [&](std::string_view prefix) {
    if (s.size() < prefix.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
      char c = s[i];
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
      if (c != prefix[i]) return false;
    }
    return true;
  };
  return has_prefix("http://") || has_prefix("https://") || has_prefix("www.");
}

void append_lowered(std::string& out, std::string_view bytes, bool lowercase) {
  for (char c : bytes) {
    if (lowercase && c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    out.push_back(c);
  }
}

// Consumes word characters starting at `pos`; returns the end position.
std::size_t scan_word(std::string_view s, std::size_t pos) {
  while (pos < s.size()) {
    const CodePoint cp = decode_utf8(s, pos);
    if (!is_word(cp.value)) break;
    pos += cp.length;
  }
  return pos;
}

void tokenize_chunk(std::string_view chunk, const TokenizerRules& rules,
                    std::vector<std::string>& out) {
  std::string word;
  auto flush = [&] {
    if (!word.empty()) out.push_back(std::move(word));
    word.clear();
  };

  std::size_t pos = 0;
  while (pos < chunk.size()) {
    if (rules.replace_urls && starts_with_url(chunk.substr(pos))) {
      flush();
      out.emplace_back(kUrlToken);
      return;
    }
    const CodePoint cp = decode_utf8(chunk, pos);
    const std::size_t next = pos + cp.length;
    const bool word_follows = next < chunk.size() && is_word(decode_utf8(chunk, next).value);

    if (cp.value == '#' && word_follows) {
      flush();
      const std::size_t end = scan_word(chunk, next);
      std::string tag;
      append_lowered(tag, chunk.substr(pos, end - pos), rules.lowercase);
      out.push_back(std::move(tag));
      pos = end;
    } else if (cp.value == '@' && word.empty() && word_follows) {
      const std::size_t end = scan_word(chunk, next);
      if (rules.replace_mentions) {
        out.emplace_back(kMentionToken);
      } else {
        std::string mention;
        append_lowered(mention, chunk.substr(pos, end - pos), rules.lowercase);
        out.push_back(std::move(mention));
      }
      pos = end;
    } else if (is_emoji(cp.value)) {
      flush();
      out.emplace_back(chunk.substr(pos, cp.length));
      pos = next;
    } else if (is_word(cp.value)) {
      append_lowered(word, chunk.substr(pos, cp.length), rules.lowercase);
      pos = next;
    } else {
      pos = next;  // punctuation and ignorables are dropped
    }
  }
  flush();
}

}  // namespace

std::vector<std::string> tokenize(std::string_view raw_text, const TokenizerRules& rules) {
  std::vector<std::string> tokens;
  std::size_t pos = 0;
  std::size_t chunk_start = 0;
  while (pos < raw_text.size()) {
    const CodePoint cp = decode_utf8(raw_text, pos);
    if (is_space(cp.value)) {
      if (pos > chunk_start) tokenize_chunk(raw_text.substr(chunk_start, pos - chunk_start), rules, tokens);
      chunk_start = pos + cp.length;
    }
    pos += cp.length;
  }
  if (raw_text.size() > chunk_start) tokenize_chunk(raw_text.substr(chunk_start), rules, tokens);
  return tokens;
}

// ---------------------------------------------------------------------------
// Dates

namespace {

bool parse_int(std::string_view text, int& value) {
  if (text.empty() || text.size() > 4) return false;
  const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
  return result.ec == std::errc() && result.ptr == text.data() + text.size();
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = text.find(sep, start);
    parts.push_back(text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return parts;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::optional<Timestamp> parse_publish_date(std::string_view text) {
  text = trim(text);
  const std::size_t space = text.find(' ');
  if (space == std::string_view::npos) return std::nullopt;
  const auto date = split(text.substr(0, space), '/');
  const auto time = split(trim(text.substr(space + 1)), ':');
  if (date.size() != 3 || time.size() < 2 || time.size() > 3) return std::nullopt;

  int month = 0, day = 0, year = 0, hour = 0, minute = 0, second = 0;
  if (!parse_int(date[0], month) || !parse_int(date[1], day) || !parse_int(date[2], year) ||
      date[2].size() != 4 || !parse_int(time[0], hour) || !parse_int(time[1], minute) ||
      (time.size() == 3 && !parse_int(time[2], second))) {
    return std::nullopt;
  }
  if (hour < 0 || hour > 23 || minute < 0 || minute > 59 || second < 0 || second > 59) return std::nullopt;

  using namespace std::chrono;
  const year_month_day ymd{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                           std::chrono::day{static_cast<unsigned>(day)}};
  if (!ymd.ok()) return std::nullopt;
  const auto days_since_epoch = sys_days{ymd}.time_since_epoch().count();
  return static_cast<Timestamp>(days_since_epoch) * 86400 + hour * 3600 + minute * 60 + second;
}

// ---------------------------------------------------------------------------
// CSV ingestion

ColumnMap ColumnMap::parse(std::string_view spec) {
  ColumnMap map;
  if (trim(spec).empty()) return map;
  for (std::string_view pair : split(spec, ',')) {
    pair = trim(pair);
    const std::size_t eq = pair.find('=');
    if (eq == std::string_view::npos) throw ConfigError("column mapping '" + std::string(pair) + "' is not logical=physical");
    const std::string_view logical = trim(pair.substr(0, eq));
    const std::string physical(trim(pair.substr(eq + 1)));
    if (physical.empty()) throw ConfigError("empty physical column for '" + std::string(logical) + "'");
    if (logical == "author") map.author = physical;
    else if (logical == "content") map.content = physical;
    else if (logical == "publish_date") map.publish_date = physical;
    else if (logical == "account_category") map.account_category = physical;
    else if (logical == "language") map.language_column = physical;
    else throw ConfigError("unknown logical column '" + std::string(logical) + "'");
  }
  return map;
}

IngestResult ingest_csv(const std::filesystem::path& path, const ColumnMap& columns) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open input file " + path.string());
  return ingest_csv(in, columns);
}

IngestResult ingest_csv(std::istream& in, const ColumnMap& columns) {
  CsvReader reader(in);
  std::vector<std::string> header;
  if (!reader.next(header) || (header.size() == 1 && header[0].empty())) {
    throw ConfigError("input has no header row");
  }
  if (header[0].starts_with("\xEF\xBB\xBF")) header[0].erase(0, 3);

  auto column_index = [&](const std::string& physical, std::string_view logical) {
    const auto it = std::find(header.begin(), header.end(), physical);
    if (it == header.end()) {
      throw ConfigError("missing column '" + physical + "' (for " + std::string(logical) + ")");
    }
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t author = column_index(columns.author, "author");
  const std::size_t content = column_index(columns.content, "content");
  const std::size_t date = column_index(columns.publish_date, "publish_date");
  const std::size_t category = column_index(columns.account_category, "account_category");
  const bool filter_language = !columns.language_column.empty() && !columns.language_value.empty();
  const std::size_t language = filter_language ? column_index(columns.language_column, "language") : 0;

  IngestResult result;
  auto& stats = result.stats;
  std::vector<std::string> fields;
  while (reader.next(fields)) {
    ++stats.total_rows;
    if (!reader.ok() || fields.size() != header.size()) {
      ++stats.malformed;
      continue;
    }
    const auto label = parse_role_label(fields[category]);
    if (!label) {
      ++stats.dropped_category;
      continue;
    }
    if (filter_language && fields[language] != columns.language_value) {
      ++stats.dropped_language;
      continue;
    }
    const auto timestamp = parse_publish_date(fields[date]);
    if (!timestamp) {
      ++stats.bad_date;
      continue;
    }
    result.records.push_back({std::move(fields[author]), std::move(fields[content]), *timestamp, *label});
    ++stats.retained;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Vocabulary

Vocabulary::Vocabulary(std::vector<std::string> tokens, std::vector<std::uint64_t> counts,
                       std::uint32_t min_count)
    : tokens_(std::move(tokens)), counts_(std::move(counts)), min_count_(min_count) {
  if (tokens_.size() != counts_.size()) throw std::invalid_argument("token/count size mismatch");
  index_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (!index_.emplace(tokens_[i], static_cast<TokenId>(i)).second) {
      throw FormatError("duplicate vocabulary token '" + tokens_[i] + "'");
    }
  }
}

std::optional<TokenId> Vocabulary::find(const std::string& token) const {
  const auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Vocabulary build_vocabulary(std::span<const RawRecord> records, std::uint32_t min_count,
                            const TokenizerRules& rules) {
  if (min_count < 1) throw ConfigError("min_count must be at least 1");
  if (records.empty()) throw ConfigError("cannot build a vocabulary from an empty corpus");

  std::unordered_map<std::string, std::uint64_t> counts;
  for (const RawRecord& record : records) {
    for (std::string& token : tokenize(record.text, rules)) ++counts[std::move(token)];
  }
  std::vector<std::pair<std::string, std::uint64_t>> kept;
  for (auto& [token, count] : counts) {
    if (count >= min_count) kept.emplace_back(token, count);
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });

  std::vector<std::string> tokens;
  std::vector<std::uint64_t> kept_counts;
  tokens.reserve(kept.size());
  kept_counts.reserve(kept.size());
  for (auto& [token, count] : kept) {
    tokens.push_back(std::move(token));
    kept_counts.push_back(count);
  }
  return Vocabulary(std::move(tokens), std::move(kept_counts), min_count);
}

MaterializeResult materialize(std::span<const RawRecord> records, const Vocabulary& vocab,
                              const TokenizerRules& rules) {
  MaterializeResult result;
  result.items.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const RawRecord& record = records[i];
    TraceItem item;
    item.item_id = i;
    item.account_id = record.account;
    item.timestamp = record.timestamp;
    item.label = record.label;
    for (const std::string& token : tokenize(record.text, rules)) {
      if (const auto id = vocab.find(token)) {
        item.tokens.push_back(*id);
      } else {
        ++result.removed_tokens;
      }
    }
    if (item.is_empty()) ++result.empty_items;
    result.items.push_back(std::move(item));
  }
  return result;
}

std::vector<std::string> detokenize(std::span<const TokenId> tokens, const Vocabulary& vocab) {
  std::vector<std::string> words;
  words.reserve(tokens.size());
  for (TokenId id : tokens) words.push_back(vocab.token(id));
  return words;
}

// ---------------------------------------------------------------------------
// Corpus artifacts

namespace {

std::string sanitize_field(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  }
  return out;
}

}  // namespace

void write_record_dump(std::ostream& out, const Corpus& corpus) {
  for (const TraceItem& item : corpus.items) {
    out << item.item_id << '\t' << sanitize_field(item.account_id) << '\t' << item.timestamp << '\t'
        << (item.label ? to_string(*item.label) : std::string_view("-")) << '\t';
    for (std::size_t i = 0; i < item.tokens.size(); ++i) {
      if (i) out << ' ';
      out << corpus.vocab.token(item.tokens[i]);
    }
    out << '\n';
  }
}

void write_vocabulary(std::ostream& out, const Vocabulary& vocab) {
  out << "#min_count\t" << vocab.min_count() << '\n';
  for (TokenId id = 0; id < vocab.size(); ++id) out << vocab.token(id) << '\t' << vocab.count(id) << '\n';
}

Vocabulary read_vocabulary(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || !line.starts_with("#min_count\t")) {
    throw FormatError("vocabulary file lacks the #min_count header");
  }
  std::uint32_t min_count = 0;
  {
    const std::string_view value = std::string_view(line).substr(11);
    if (std::from_chars(value.data(), value.data() + value.size(), min_count).ec != std::errc()) {
      throw FormatError("bad min_count in vocabulary header");
    }
  }
  std::vector<std::string> tokens;
  std::vector<std::uint64_t> counts;
  while (std::getline(in, line)) {
    const std::size_t tab = line.rfind('\t');
    std::uint64_t count = 0;
    if (tab == std::string::npos ||
        std::from_chars(line.data() + tab + 1, line.data() + line.size(), count).ec != std::errc()) {
      throw FormatError("malformed vocabulary line: " + line);
    }
    tokens.push_back(line.substr(0, tab));
    counts.push_back(count);
  }
  return Vocabulary(std::move(tokens), std::move(counts), min_count);
}

std::vector<TraceItem> read_record_dump(std::istream& in, const Vocabulary& vocab) {
  std::vector<TraceItem> items;
  std::string line;
  while (std::getline(in, line)) {
    const auto fields = split(line, '\t');
    if (fields.size() != 5) throw FormatError("malformed record line: " + line);
    TraceItem item;
    if (std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), item.item_id).ec != std::errc() ||
        std::from_chars(fields[2].data(), fields[2].data() + fields[2].size(), item.timestamp).ec != std::errc()) {
      throw FormatError("malformed record line: " + line);
    }
    item.account_id = std::string(fields[1]);
    if (fields[3] != "-") {
      item.label = parse_role_label(fields[3]);
      if (!item.label) throw FormatError("unknown label in record line: " + line);
    }
    if (!fields[4].empty()) {
      for (std::string_view token : split(fields[4], ' ')) {
        const auto id = vocab.find(std::string(token));
        if (!id) throw FormatError("record token '" + std::string(token) + "' not in vocabulary");
        item.tokens.push_back(*id);
      }
    }
    items.push_back(std::move(item));
  }
  return items;
}

}  // namespace tsed
