#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "tsed/corpus.hpp"

namespace tsed {

struct SplitRatios {
  double train = 0.5;
  double validation = 0.2;
  double test = 0.3;
};

struct AccountInfo {
  std::string account_id;
  RoleLabel label = RoleLabel::LeftTroll;
};

/// Account-level split, stratified by class. Indexed by label_index().
struct SplitPlan {
  std::uint64_t seed = 0;
  SplitRatios ratios;
  std::array<std::vector<std::string>, kNumLabels> train;
  std::array<std::vector<std::string>, kNumLabels> validation;
  std::array<std::vector<std::string>, kNumLabels> test;

  /// Throws std::logic_error if any account appears in two parts.
  void check_disjoint() const;
};

/// One entry per labeled account, sorted by account id. An account's label
/// is the label of its first labeled item.
std::vector<AccountInfo> labeled_accounts(std::span<const TraceItem> items);

/// Per class: floor(train * n) train, floor(validation * n) validation, the
/// rest test, drawn by a seeded shuffle of the sorted account ids. Classes
/// with no accounts are skipped; a class with 1 or 2 accounts is a
/// ConfigError, as are ratios not summing to 1.
SplitPlan split_accounts(std::span<const AccountInfo> accounts, const SplitRatios& ratios,
                         std::uint64_t seed);

/// Uniform sample without replacement of min(n, #nonempty) nonempty items,
/// returned in item_id order. The draw depends only on (seed, account id of
/// the first item), not on the caller's iteration order.
std::vector<TraceItem> sample_tweets(std::span<const TraceItem> account_items, std::size_t n,
                                     std::uint64_t seed);

struct ClassScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;  // true instances
};

struct F1Report {
  double micro = 0.0;
  double macro = 0.0;
  std::vector<RoleLabel> classes;  // classes averaged by macro
  std::array<ClassScores, kNumLabels> per_class{};
  /// confusion[true][predicted]
  std::array<std::array<std::size_t, kNumLabels>, kNumLabels> confusion{};
};

/// Per-class F1 (0 whenever precision or recall is undefined), macro as the
/// unweighted mean over `classes`, micro from pooled counts.
F1Report f1_scores(std::span<const RoleLabel> truth, std::span<const RoleLabel> predicted,
                   std::span<const RoleLabel> classes = kAllLabels);

struct GridPoint {
  std::size_t k = 0;
  double theta = 0.0;
  double micro_f1 = 0.0;
  double macro_f1 = 0.0;
};

struct GridSearchResult {
  std::vector<GridPoint> surface;  // theta-major, grid order
  GridPoint best_macro;
  GridPoint best_micro;
};

/// Scores every (k, theta) and keeps the argmax of macro and of micro F1.
/// Ties go to the smaller k, then the smaller theta.
GridSearchResult grid_search(std::span<const std::size_t> k_grid, std::span<const double> theta_grid,
                             const std::function<F1Report(std::size_t k, double theta)>& score);

}  // namespace tsed
