#include "tsed/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

#include "tsed/binary_io.hpp"
#include "tsed/error.hpp"

namespace tsed {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// mt19937_64's output sequence is fixed by the standard; the distributions
// are not, so bounded draws are done here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (true) {
      const std::uint64_t r = engine_();
      if (r >= threshold) return r % n;
    }
  }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t string_hash(std::string_view s) {
  io::Fnv1a64 h;
  h.update(s);
  return h.digest();
}

std::size_t part_size(double ratio, std::size_t n) {
  return static_cast<std::size_t>(std::floor(ratio * static_cast<double>(n) + 1e-9));
}

}  // namespace

void SplitPlan::check_disjoint() const {
  std::set<std::string> seen;
  for (const auto* part : {&train, &validation, &test}) {
    for (const auto& accounts : *part) {
      for (const auto& account : accounts) {
        if (!seen.insert(account).second) throw std::logic_error("account " + account + " is in two splits");
      }
    }
  }
}

std::vector<AccountInfo> labeled_accounts(std::span<const TraceItem> items) {
  std::map<std::string, RoleLabel> labels;
  for (const TraceItem& item : items) {
    if (item.label) labels.emplace(item.account_id, *item.label);
  }
  std::vector<AccountInfo> accounts;
  accounts.reserve(labels.size());
  for (const auto& [id, label] : labels) accounts.push_back({id, label});
  return accounts;
}

SplitPlan split_accounts(std::span<const AccountInfo> accounts, const SplitRatios& ratios, std::uint64_t seed) {
  if (ratios.train < 0 || ratios.validation < 0 || ratios.test < 0 ||
      std::fabs(ratios.train + ratios.validation + ratios.test - 1.0) > 1e-9) {
    throw ConfigError("split ratios must be nonnegative and sum to 1");
  }
  std::array<std::vector<std::string>, kNumLabels> by_class;
  for (const AccountInfo& a : accounts) by_class[label_index(a.label)].push_back(a.account_id);

  SplitPlan plan;
  plan.seed = seed;
  plan.ratios = ratios;
  for (std::size_t c = 0; c < kNumLabels; ++c) {
    auto& ids = by_class[c];
    if (ids.empty()) continue;
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) throw ConfigError("duplicate account in split input");
    if (ids.size() < 3) {
      throw ConfigError("class " + std::string(to_string(kAllLabels[c])) + " has fewer than 3 accounts");
    }
    Rng rng(splitmix64(seed ^ splitmix64(c + 1)));
    for (std::size_t i = ids.size() - 1; i > 0; --i) std::swap(ids[i], ids[rng.below(i + 1)]);

    const std::size_t n_train = part_size(ratios.train, ids.size());
    const std::size_t n_valid = part_size(ratios.validation, ids.size());
    const auto first = ids.begin();
    plan.train[c].assign(first, first + static_cast<std::ptrdiff_t>(n_train));
    plan.validation[c].assign(first + static_cast<std::ptrdiff_t>(n_train),
                              first + static_cast<std::ptrdiff_t>(n_train + n_valid));
    plan.test[c].assign(first + static_cast<std::ptrdiff_t>(n_train + n_valid), ids.end());
    for (auto* part : {&plan.train[c], &plan.validation[c], &plan.test[c]}) std::sort(part->begin(), part->end());
  }
  plan.check_disjoint();
  return plan;
}

std::vector<TraceItem> sample_tweets(std::span<const TraceItem> account_items, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw ConfigError("sample size must be at least 1");
  std::vector<TraceItem> pool;
  for (const TraceItem& item : account_items) {
    if (!item.is_empty()) pool.push_back(item);
  }
  std::sort(pool.begin(), pool.end(), [](const auto& a, const auto& b) { return a.item_id < b.item_id; });
  if (pool.size() <= n) return pool;

  Rng rng(splitmix64(seed ^ string_hash(pool.front().account_id)));
  for (std::size_t i = 0; i < n; ++i) std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
  pool.resize(n);
  std::sort(pool.begin(), pool.end(), [](const auto& a, const auto& b) { return a.item_id < b.item_id; });
  return pool;
}

F1Report f1_scores(std::span<const RoleLabel> truth, std::span<const RoleLabel> predicted,
                   std::span<const RoleLabel> classes) {
  if (truth.size() != predicted.size() || truth.empty()) {
    throw std::invalid_argument("f1_scores needs equal-length nonempty label lists");
  }
  F1Report report;
  report.classes.assign(classes.begin(), classes.end());
  for (std::size_t i = 0; i < truth.size(); ++i) ++report.confusion[label_index(truth[i])][label_index(predicted[i])];

  auto ratio = [](std::size_t num, std::size_t den) { return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den); };
  auto harmonic = [](double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); };

  std::size_t tp_total = 0, fp_total = 0, fn_total = 0;
  double macro_sum = 0.0;
  for (RoleLabel label : classes) {
    const std::size_t c = label_index(label);
    std::size_t tp = report.confusion[c][c], fp = 0, fn = 0;
    for (std::size_t o = 0; o < kNumLabels; ++o) {
      if (o == c) continue;
      fp += report.confusion[o][c];
      fn += report.confusion[c][o];
    }
    ClassScores& s = report.per_class[c];
    s.precision = ratio(tp, tp + fp);
    s.recall = ratio(tp, tp + fn);
    s.f1 = harmonic(s.precision, s.recall);
    s.support = tp + fn;
    macro_sum += s.f1;
    tp_total += tp;
    fp_total += fp;
    fn_total += fn;
  }
  report.macro = classes.empty() ? 0.0 : macro_sum / static_cast<double>(classes.size());
  report.micro = harmonic(ratio(tp_total, tp_total + fp_total), ratio(tp_total, tp_total + fn_total));
  return report;
}

GridSearchResult grid_search(std::span<const std::size_t> k_grid, std::span<const double> theta_grid,
                             const std::function<F1Report(std::size_t k, double theta)>& score) {
  if (k_grid.empty() || theta_grid.empty()) throw ConfigError("grid search needs nonempty k and theta grids");
  GridSearchResult result;
  auto earlier = [](const GridPoint& a, const GridPoint& b) {
    return a.k != b.k ? a.k < b.k : a.theta < b.theta;
  };
  bool first = true;
  for (double theta : theta_grid) {
    for (std::size_t k : k_grid) {
      const F1Report r = score(k, theta);
      const GridPoint p{k, theta, r.micro, r.macro};
      result.surface.push_back(p);
      if (first) {
        result.best_macro = result.best_micro = p;
        first = false;
        continue;
      }
      if (p.macro_f1 > result.best_macro.macro_f1 ||
          (p.macro_f1 == result.best_macro.macro_f1 && earlier(p, result.best_macro))) {
        result.best_macro = p;
      }
      if (p.micro_f1 > result.best_micro.micro_f1 ||
          (p.micro_f1 == result.best_micro.micro_f1 && earlier(p, result.best_micro))) {
        result.best_micro = p;
      }
    }
  }
  return result;
}

}  // namespace tsed
