#include <algorithm>
#include <set>

#include "doctest.h"
#include "tsed/error.hpp"
#include "tsed/eval.hpp"

using namespace tsed;
using L = RoleLabel;

namespace {

std::vector<AccountInfo> accounts(std::size_t left, std::size_t right, std::size_t news) {
  std::vector<AccountInfo> out;
  auto add = [&](std::size_t n, RoleLabel label, const char* prefix) {
    for (std::size_t i = 0; i < n; ++i) out.push_back({prefix + std::to_string(i), label});
  };
  add(left, L::LeftTroll, "l");
  add(right, L::RightTroll, "r");
  add(news, L::NewsFeed, "n");
  return out;
}

std::vector<TraceItem> account_items(const std::string& account, std::size_t n, std::size_t empties = 0) {
  std::vector<TraceItem> items;
  for (std::size_t i = 0; i < n + empties; ++i) {
    TraceItem it;
    it.item_id = 1000 + i;
    it.account_id = account;
    if (i >= empties) it.tokens = {static_cast<TokenId>(i)};
    items.push_back(it);
  }
  return items;
}

}  // namespace

TEST_CASE("split sizes follow the floor policy") {
  const auto ten = accounts(10, 0, 0);
  const auto plan = split_accounts(ten, {}, 1);
  CHECK(plan.train[0].size() == 5);
  CHECK(plan.validation[0].size() == 2);
  CHECK(plan.test[0].size() == 3);
  CHECK(plan.train[1].empty());

  const auto full = accounts(233, 447, 53);
  const auto p = split_accounts(full, {}, 42);
  CHECK(p.train[0].size() == 116);
  CHECK(p.validation[0].size() == 46);
  CHECK(p.test[0].size() == 71);
  CHECK(p.train[1].size() == 223);
  CHECK(p.validation[1].size() == 89);
  CHECK(p.test[1].size() == 135);
  CHECK(p.train[2].size() == 26);
  CHECK(p.validation[2].size() == 10);
  CHECK(p.test[2].size() == 17);
}

TEST_CASE("split is exhaustive, disjoint and seeded") {
  const auto all = accounts(30, 21, 7);
  const auto a = split_accounts(all, {}, 9);
  const auto b = split_accounts(all, {}, 9);
  const auto c = split_accounts(all, {}, 10);
  CHECK_NOTHROW(a.check_disjoint());
  CHECK(a.train == b.train);
  CHECK(a.validation == b.validation);
  CHECK(a.test == b.test);
  CHECK((a.train != c.train || a.test != c.test));

  std::set<std::string> seen;
  for (std::size_t l = 0; l < kNumLabels; ++l) {
    for (const auto* part : {&a.train[l], &a.validation[l], &a.test[l]}) seen.insert(part->begin(), part->end());
  }
  CHECK(seen.size() == all.size());

  // The input order of accounts does not matter.
  auto reversed = all;
  std::reverse(reversed.begin(), reversed.end());
  CHECK(split_accounts(reversed, {}, 9).train == a.train);

  SplitPlan overlap = a;
  overlap.test[0].push_back(a.train[0][0]);
  CHECK_THROWS_AS(overlap.check_disjoint(), std::logic_error);
}

TEST_CASE("split errors") {
  CHECK_THROWS_AS(split_accounts(accounts(10, 2, 0), {}, 1), ConfigError);
  CHECK_THROWS_AS(split_accounts(accounts(10, 0, 0), SplitRatios{0.5, 0.2, 0.2}, 1), ConfigError);
  CHECK_NOTHROW(split_accounts(accounts(3, 0, 0), {}, 1));
}

TEST_CASE("labeled_accounts") {
  std::vector<TraceItem> items(4);
  items[0].account_id = "b";
  items[0].label = L::NewsFeed;
  items[1].account_id = "a";
  items[1].label = L::RightTroll;
  items[2].account_id = "b";
  items[2].label = L::LeftTroll;
  items[3].account_id = "c";
  const auto acc = labeled_accounts(items);
  REQUIRE(acc.size() == 2);
  CHECK(acc[0].account_id == "a");
  CHECK(acc[1].account_id == "b");
  CHECK(acc[1].label == L::NewsFeed);
}

TEST_CASE("sample_tweets") {
  const auto big = account_items("x", 200);
  const auto s = sample_tweets(big, 50, 3);
  CHECK(s.size() == 50);
  CHECK(std::is_sorted(s.begin(), s.end(), [](const auto& a, const auto& b) { return a.item_id < b.item_id; }));
  std::set<std::uint64_t> ids;
  for (const auto& it : s) ids.insert(it.item_id);
  CHECK(ids.size() == 50);

  const auto again = sample_tweets(big, 50, 3);
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(again[i].item_id == s[i].item_id);

  auto shuffled = big;
  std::reverse(shuffled.begin(), shuffled.end());
  const auto from_reversed = sample_tweets(shuffled, 50, 3);
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(from_reversed[i].item_id == s[i].item_id);

  CHECK(sample_tweets(account_items("y", 30), 50, 3).size() == 30);
  const auto with_empties = sample_tweets(account_items("z", 10, 20), 50, 3);
  CHECK(with_empties.size() == 10);
  for (const auto& it : with_empties) CHECK_FALSE(it.is_empty());
  CHECK(sample_tweets(account_items("w", 0, 5), 50, 3).empty());
}

TEST_CASE("f1_scores worked example") {
  const std::vector<RoleLabel> truth = {L::LeftTroll, L::LeftTroll, L::RightTroll, L::RightTroll, L::NewsFeed, L::NewsFeed};
  const std::vector<RoleLabel> pred = {L::LeftTroll, L::RightTroll, L::RightTroll, L::RightTroll, L::NewsFeed, L::LeftTroll};
  const auto r = f1_scores(truth, pred);
  CHECK(r.per_class[0].f1 == doctest::Approx(0.5));
  CHECK(r.per_class[1].f1 == doctest::Approx(0.8));
  CHECK(r.per_class[2].f1 == doctest::Approx(2.0 / 3));
  CHECK(r.macro == doctest::Approx((0.5 + 0.8 + 2.0 / 3) / 3));
  CHECK(r.macro == doctest::Approx(0.6556).epsilon(1e-3));
  CHECK(r.micro == doctest::Approx(4.0 / 6));
  CHECK(r.confusion[0][1] == 1);
  CHECK(r.confusion[2][0] == 1);

  std::size_t diagonal = 0, total = 0;
  for (std::size_t t = 0; t < 3; ++t) {
    std::size_t row = 0;
    for (std::size_t p = 0; p < 3; ++p) {
      row += r.confusion[t][p];
      if (t == p) diagonal += r.confusion[t][p];
    }
    CHECK(row == r.per_class[t].support);
    total += row;
  }
  CHECK(r.micro == static_cast<double>(diagonal) / static_cast<double>(total));

  const auto perfect = f1_scores(truth, truth);
  CHECK(perfect.micro == 1.0);
  CHECK(perfect.macro == 1.0);
}

TEST_CASE("f1_scores absent class convention") {
  const std::vector<RoleLabel> truth = {L::LeftTroll, L::RightTroll};
  const std::vector<RoleLabel> pred = {L::LeftTroll, L::RightTroll};
  const auto all = f1_scores(truth, pred);
  CHECK(all.per_class[2].f1 == 0.0);
  CHECK(all.macro == doctest::Approx(2.0 / 3));
  const std::vector<RoleLabel> two = {L::LeftTroll, L::RightTroll};
  const auto present = f1_scores(truth, pred, two);
  CHECK(present.macro == 1.0);
  CHECK(present.micro == 1.0);

  CHECK_THROWS(f1_scores(truth, std::vector<RoleLabel>{L::LeftTroll}));
  CHECK_THROWS(f1_scores({}, {}));
}

TEST_CASE("grid_search argmax and ties") {
  const std::vector<std::size_t> ks = {1, 3, 5};
  const std::vector<double> thetas = {0.0, 0.1, 1.0};
  auto score = [](std::size_t k, double theta) {
    F1Report r;
    r.macro = (k == 3 || k == 5) && theta >= 0.1 ? 0.9 : 0.5;  // ties broken to k=3, theta=0.1
    r.micro = k == 1 && theta == 1.0 ? 0.8 : 0.4;
    return r;
  };
  const auto result = grid_search(ks, thetas, score);
  CHECK(result.surface.size() == 9);
  CHECK(result.surface[0].theta == 0.0);
  CHECK(result.surface[3].theta == 0.1);
  CHECK(result.surface[4].k == 3);
  CHECK(result.best_macro.k == 3);
  CHECK(result.best_macro.theta == 0.1);
  CHECK(result.best_micro.k == 1);
  CHECK(result.best_micro.theta == 1.0);

  const std::vector<std::size_t> one_k = {4};
  const std::vector<double> one_theta = {0.3};
  const auto single = grid_search(one_k, one_theta, score);
  CHECK(single.best_macro.k == 4);
  CHECK(single.best_macro.theta == 0.3);
}
