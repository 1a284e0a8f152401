#include <numeric>
#include <random>
#include <sstream>

#include "doctest.h"
#include "support.hpp"
#include "tsed/corpus.hpp"
#include "tsed/error.hpp"

using namespace tsed;
using Tokens = std::vector<std::string>;

TEST_CASE("tokenize: plain words are lowercased") {
  CHECK(tokenize("I like music") == Tokens{"i", "like", "music"});
  CHECK(tokenize("").empty());
  CHECK(tokenize(" \t\n ").empty());
}

TEST_CASE("tokenize: hashtags stay whole") {
  const auto tokens = tokenize("Warplanes hit Aleppo \xE2\x80\xA6 #news");
  CHECK(tokens == Tokens{"warplanes", "hit", "aleppo", "#news"});
  CHECK(tokenize("#News.") == Tokens{"#news"});
  CHECK(tokenize("abc#def") == Tokens{"abc", "#def"});
  CHECK(tokenize("# 1").size() == 1);
}

TEST_CASE("tokenize: URLs and mentions become sentinels") {
  CHECK(tokenize("Join Today at https://t.co/NJBoTamxDi #Blacks4Trump") ==
        Tokens{"join", "today", "at", "$URL$", "#blacks4trump"});
  CHECK(tokenize("RT @User_1: Don't stop!") == Tokens{"rt", "$MENTION$", "dont", "stop"});
  CHECK(tokenize("see:http://x.y/z") == Tokens{"see", "$URL$"});
  CHECK(tokenize("WWW.example.com") == Tokens{"$URL$"});
  // '@' inside a word is punctuation, not a mention
  CHECK(tokenize("me@mail.com") == Tokens{"memailcom"});

  TokenizerRules keep;
  keep.replace_mentions = false;
  keep.replace_urls = false;
  CHECK(tokenize("@Bob hi", keep) == Tokens{"@bob", "hi"});
}

TEST_CASE("tokenize: emoji are separate tokens, modifiers dropped") {
  CHECK(tokenize("love \xE2\x9D\xA4\xEF\xB8\x8F it") == Tokens{"love", "\xE2\x9D\xA4", "it"});
  CHECK(tokenize("great\xF0\x9F\x98\x80" "day") == Tokens{"great", "\xF0\x9F\x98\x80", "day"});
  CHECK(tokenize("\xE2\x80\x9Cquoted\xE2\x80\x9D") == Tokens{"quoted"});
}

TEST_CASE("tokenize is idempotent on rejoined output") {
  const std::vector<std::string> pieces = {"Hello", "WORLD", "#Tag", "#x_1", "@who", "don't", "U.S.A.", "...",
                                           "\xE2\x80\xA6", "\xF0\x9F\x87\xBA\xF0\x9F\x87\xB8", "caf\xC3\xA9",
                                           "http://a.b", "a#b#c", "mix3d!", "\xE2\x9D\xA4\xEF\xB8\x8F", "(x)", "_"};
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    std::string text;
    const int n = std::uniform_int_distribution<int>(0, 12)(rng);
    for (int i = 0; i < n; ++i) {
      text += pieces[std::uniform_int_distribution<std::size_t>(0, pieces.size() - 1)(rng)];
      if (std::bernoulli_distribution(0.7)(rng)) text += ' ';
    }
    Tokens tokens = tokenize(text);
    std::erase_if(tokens, [](const std::string& t) { return t == kUrlToken || t == kMentionToken; });
    std::string joined;
    for (const auto& t : tokens) joined += t + " ";
    CHECK_MESSAGE(tokenize(joined) == tokens, text);
  }
}

TEST_CASE("parse_publish_date") {
  CHECK(parse_publish_date("10/31/2016 14:22") == Timestamp{1477923720});
  CHECK(parse_publish_date("1/1/1970 0:00") == Timestamp{0});
  CHECK(parse_publish_date("1/1/1970 0:00:59") == Timestamp{59});
  CHECK(parse_publish_date(" 2/29/2016 23:59 ") == Timestamp{1456790340});
  CHECK_FALSE(parse_publish_date("2/30/2016 10:00"));
  CHECK_FALSE(parse_publish_date("13/1/2016 10:00"));
  CHECK_FALSE(parse_publish_date("1/1/2016 24:00"));
  CHECK_FALSE(parse_publish_date("1/1/16 10:00"));
  CHECK_FALSE(parse_publish_date("2016-01-01 10:00"));
  CHECK_FALSE(parse_publish_date(""));
}

TEST_CASE("role labels") {
  CHECK(parse_role_label("RightTroll") == RoleLabel::RightTroll);
  CHECK(parse_role_label("LeftTroll") == RoleLabel::LeftTroll);
  CHECK(parse_role_label("NewsFeed") == RoleLabel::NewsFeed);
  CHECK_FALSE(parse_role_label("HashtagGamer"));
  CHECK_FALSE(parse_role_label("Fearmonger"));
  CHECK_FALSE(parse_role_label("righttroll"));
}

namespace {
const char* kSampleCsv =
    "external_author_id,author,content,language,publish_date,account_category\n"
    "1,ALICE,\"Hello, world #MAGA\",English,10/31/2016 14:22,RightTroll\n"
    "2,BOB,#gaming all day,English,10/31/2016 14:23,HashtagGamer\n"
    "3,CAROL,\"multi\nline \"\"quoted\"\" text\",English,1/2/2017 8:05,LeftTroll\n"
    "4,DAVE,short row,English\n"
    "5,EVE,bad date,English,yesterday,NewsFeed\n"
    "6,FRANK,Nachrichten heute,German,3/4/2017 9:00,NewsFeed\r\n"
    "7,GRACE,breaking news,English,3/4/2017 9:01,Fearmonger\n";
}

TEST_CASE("ingest_csv maps categories and counts drops") {
  std::istringstream in(kSampleCsv);
  const IngestResult r = ingest_csv(in);
  CHECK(r.stats.total_rows == 7);
  CHECK(r.stats.retained == 3);
  CHECK(r.stats.dropped_category == 2);
  CHECK(r.stats.malformed == 1);
  CHECK(r.stats.bad_date == 1);
  CHECK(r.stats.retained + r.stats.dropped() == r.stats.total_rows);
  REQUIRE(r.records.size() == 3);
  CHECK(r.records[0].account == "ALICE");
  CHECK(r.records[0].label == RoleLabel::RightTroll);
  CHECK(r.records[0].timestamp == 1477923720);
  CHECK(r.records[0].text == "Hello, world #MAGA");
  CHECK(r.records[1].text == "multi\nline \"quoted\" text");
  CHECK(r.records[1].label == RoleLabel::LeftTroll);
  CHECK(r.records[2].account == "FRANK");
}

TEST_CASE("ingest_csv language filter and column remapping") {
  ColumnMap columns;
  columns.language_column = "language";
  columns.language_value = "English";
  std::istringstream in(kSampleCsv);
  const IngestResult r = ingest_csv(in, columns);
  CHECK(r.stats.retained == 2);
  CHECK(r.stats.dropped_language == 1);

  const char* renamed = "handle,text,when,kind\nX,hi there,1/1/2017 0:00,NewsFeed\n";
  std::istringstream in2(renamed);
  const auto map = ColumnMap::parse("author=handle, content=text,publish_date=when,account_category=kind");
  const IngestResult r2 = ingest_csv(in2, map);
  REQUIRE(r2.records.size() == 1);
  CHECK(r2.records[0].label == RoleLabel::NewsFeed);
  CHECK_THROWS_AS(ColumnMap::parse("nonsense=x"), ConfigError);
  CHECK_THROWS_AS(ColumnMap::parse("author"), ConfigError);
}

TEST_CASE("ingest_csv configuration errors") {
  std::istringstream empty("");
  CHECK_THROWS_AS(ingest_csv(empty), ConfigError);

  std::istringstream missing("author,content,publish_date\nA,b,1/1/2017 0:00\n");
  try {
    ingest_csv(missing);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("account_category") != std::string::npos);
  }
  CHECK_THROWS_AS(ingest_csv("/nonexistent/file.csv"), ConfigError);
}

namespace {
std::vector<RawRecord> records_of(std::initializer_list<const char*> texts) {
  std::vector<RawRecord> out;
  Timestamp t = 0;
  for (const char* text : texts) out.push_back({"acct", text, t++, RoleLabel::LeftTroll});
  return out;
}
}  // namespace

TEST_CASE("build_vocabulary applies min_count") {
  const auto v1 = build_vocabulary(records_of({"a a a", "a b"}), 3);
  REQUIRE(v1.size() == 1);
  CHECK(v1.token(0) == "a");
  CHECK(v1.count(0) == 4);

  const auto v2 = build_vocabulary(records_of({"x y", "x y", "x y"}), 3);
  CHECK(v2.size() == 2);
  CHECK(v2.find("x"));
  CHECK(v2.find("y"));

  const auto v3 = build_vocabulary(records_of({"p q", "r", "q"}), 1);
  CHECK(v3.size() == 3);
  CHECK(v3.token(0) == "q");  // most frequent first
  for (TokenId id = 0; id < v3.size(); ++id) CHECK(v3.find(v3.token(id)) == id);

  CHECK_THROWS_AS(build_vocabulary({}, 3), ConfigError);
  CHECK_THROWS_AS(build_vocabulary(records_of({"a"}), 0), ConfigError);
}

TEST_CASE("materialize removes out-of-vocabulary tokens") {
  const auto records = records_of({"i like zzzrare", "zzzrare", "i like", "i like", "i like"});
  const auto vocab = build_vocabulary(records, 3);
  const auto m = materialize(records, vocab);
  REQUIRE(m.items.size() == 5);
  CHECK(detokenize(m.items[0].tokens, vocab) == Tokens{"i", "like"});
  CHECK(m.items[1].is_empty());
  CHECK(detokenize(m.items[2].tokens, vocab) == Tokens{"i", "like"});
  CHECK(m.empty_items == 1);
  CHECK(m.removed_tokens == 2);
  CHECK(m.items[3].item_id == 3);
  CHECK(m.items[3].label == RoleLabel::LeftTroll);
}

TEST_CASE("vocabulary counts are recoverable from materialized items") {
  std::mt19937_64 rng(5);
  std::vector<RawRecord> records;
  for (int i = 0; i < 300; ++i) {
    std::string text;
    const int n = std::uniform_int_distribution<int>(0, 10)(rng);
    for (int j = 0; j < n; ++j) text += "w" + std::to_string(std::geometric_distribution<int>(0.2)(rng)) + " ";
    records.push_back({"a" + std::to_string(i % 7), text, i, RoleLabel::NewsFeed});
  }
  const auto vocab = build_vocabulary(records, 3);
  const auto m = materialize(records, vocab);
  std::vector<std::uint64_t> recount(vocab.size(), 0);
  std::uint64_t kept = 0;
  for (const auto& item : m.items) {
    for (TokenId t : item.tokens) {
      CHECK(t < vocab.size());
      ++recount[t];
      ++kept;
    }
  }
  std::uint64_t total = 0;
  for (const auto& r : records) total += tokenize(r.text).size();
  for (TokenId id = 0; id < vocab.size(); ++id) {
    CHECK(recount[id] == vocab.count(id));
    CHECK(vocab.count(id) >= 3);
  }
  CHECK(kept + m.removed_tokens == total);
}

TEST_CASE("record dump and vocabulary file round trip") {
  const auto records = records_of({"a b c", "a b", "a", "zzz"});
  Corpus corpus;
  corpus.vocab = build_vocabulary(records, 2);
  corpus.items = materialize(records, corpus.vocab).items;
  corpus.items[1].label.reset();

  std::stringstream vocab_file, dump;
  write_vocabulary(vocab_file, corpus.vocab);
  write_record_dump(dump, corpus);
  const Vocabulary vocab = read_vocabulary(vocab_file);
  CHECK(vocab.size() == corpus.vocab.size());
  CHECK(vocab.min_count() == 2);
  const auto items = read_record_dump(dump, vocab);
  REQUIRE(items.size() == corpus.items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    CHECK(items[i].item_id == corpus.items[i].item_id);
    CHECK(items[i].tokens == corpus.items[i].tokens);
    CHECK(items[i].timestamp == corpus.items[i].timestamp);
    CHECK(items[i].label == corpus.items[i].label);
  }
  CHECK(items[3].is_empty());

  std::istringstream bad("0\tacct\t0\tLeftTroll\tnotaword\n");
  CHECK_THROWS_AS(read_record_dump(bad, vocab), FormatError);
}
