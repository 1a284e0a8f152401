#pragma once

// Shared test fixtures: temporary directories, random sequences and the
// synthetic concept-drift corpus.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "tsed/corpus.hpp"

namespace tsed::testing {

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("tsed_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::vector<TokenId> random_sequence(std::mt19937_64& rng, std::size_t max_len, TokenId vocab) {
  std::vector<TokenId> s(std::uniform_int_distribution<std::size_t>(0, max_len)(rng));
  for (auto& t : s) t = std::uniform_int_distribution<TokenId>(0, vocab - 1)(rng);
  return s;
}

/// month/day/year hour:minute, the source CSV's date format.
inline std::string format_publish_date(Timestamp t) {
  using namespace std::chrono;
  const auto days = sys_days{} + std::chrono::days{t >= 0 ? t / 86400 : (t - 86399) / 86400};
  const year_month_day ymd{days};
  const Timestamp rem = t - static_cast<Timestamp>(days.time_since_epoch().count()) * 86400;
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%u/%u/%d %lld:%02lld", static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()), static_cast<int>(ymd.year()), static_cast<long long>(rem / 3600),
                static_cast<long long>((rem % 3600) / 60));
  return buffer;
}

struct DriftOptions {
  std::size_t accounts_per_class = 40;
  std::size_t tweets_per_account = 50;
  std::size_t words_per_topic = 20;
  std::size_t shared_words = 4;
  Timestamp start = 1451606400;  // 2016-01-01
  double span_days = 200.0;
  std::uint64_t seed = 7;
};

/// Two classes whose topic vocabularies swap at the midpoint: LeftTroll
/// accounts tweet topic A before and topic B after, RightTroll accounts the
/// reverse. Without timestamps the two classes are indistinguishable.
inline std::vector<RawRecord> make_drift_records(const DriftOptions& o = {}) {
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> when(0.0, o.span_days);
  std::uniform_int_distribution<std::size_t> length(4, 8);
  std::uniform_int_distribution<std::size_t> pick(0, o.words_per_topic - 1);
  std::uniform_int_distribution<std::size_t> shared(0, o.shared_words - 1);
  std::bernoulli_distribution use_shared(0.15);

  std::vector<RawRecord> records;
  for (RoleLabel label : {RoleLabel::LeftTroll, RoleLabel::RightTroll}) {
    for (std::size_t a = 0; a < o.accounts_per_class; ++a) {
      const std::string account = std::string(label == RoleLabel::LeftTroll ? "left_" : "right_") + std::to_string(a);
      for (std::size_t t = 0; t < o.tweets_per_account; ++t) {
        const double day = when(rng);
        const bool early = day < o.span_days / 2;
        const bool topic_a = (label == RoleLabel::LeftTroll) == early;
        std::string text;
        const std::size_t n = length(rng);
        for (std::size_t w = 0; w < n; ++w) {
          if (w) text += ' ';
          if (use_shared(rng)) {
            text += "common" + std::to_string(shared(rng));
          } else {
            text += (topic_a ? "alpha" : "beta") + std::to_string(pick(rng));
          }
        }
        // Minute resolution, like the source data.
        const Timestamp ts = o.start + static_cast<Timestamp>(day * 86400.0) / 60 * 60;
        records.push_back({account, text, ts, label});
      }
    }
  }
  return records;
}

inline std::string csv_quote(const std::string& field) {
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline void write_records_csv(const std::filesystem::path& path, const std::vector<RawRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  out << "author,content,publish_date,account_category\n";
  for (const RawRecord& r : records) {
    out << r.account << ',' << csv_quote(r.text) << ',' << format_publish_date(r.timestamp) << ','
        << to_string(r.label) << '\n';
  }
}

}  // namespace tsed::testing
