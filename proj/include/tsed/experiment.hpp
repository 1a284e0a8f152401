#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "tsed/cooccur.hpp"
#include "tsed/corpus.hpp"
#include "tsed/distance.hpp"
#include "tsed/eval.hpp"
#include "tsed/knn.hpp"
#include "tsed/lr.hpp"

namespace tsed {

enum class MethodFamily { Knn, LogisticRegression };

struct MethodSpec {
  std::string name;  // as requested, e.g. "t-SED"
  MethodFamily family = MethodFamily::Knn;
  BaseMetric base = BaseMetric::ED;  // KNN only
  bool temporal = false;
};

/// LR, t-LR, and for KNN any of ED, Cosine, SED, SED/Max, SED/ED with an
/// optional "t-" prefix. Case-insensitive.
std::optional<MethodSpec> parse_method(std::string_view name);

std::vector<std::size_t> default_k_grid();
std::vector<double> default_theta_grid();

struct ExperimentConfig {
  std::size_t sample_size = 50;
  std::uint64_t seed = 42;
  SplitRatios ratios;
  std::vector<std::size_t> k_grid = default_k_grid();
  std::vector<double> theta_grid = default_theta_grid();
  // When set, the theta grid also applies to non-temporal KNN methods, which
  // then run as their time-sensitive counterpart.
  bool theta_grid_explicit = false;
  LrConfig lr;
  int workers = 0;
};

/// Split and sampled tweets shared by every method of one run.
struct PreparedExperiment {
  const Corpus* corpus = nullptr;
  const CooccurrenceMatrix* cooccurrence = nullptr;
  SplitPlan plan;
  std::vector<RoleLabel> classes;  // labels with at least one account
  ClassCounts training_accounts{};

  std::vector<TraceItem> train;
  std::vector<TraceItem> validation;
  std::vector<TraceItem> test;
  std::vector<AccountInfo> validation_accounts;
  std::vector<AccountInfo> test_accounts;
  std::vector<std::size_t> validation_owner;  // item -> index into validation_accounts
  std::vector<std::size_t> test_owner;
  std::size_t dropped_accounts = 0;  // no nonempty tweets
};

PreparedExperiment prepare_experiment(const Corpus& corpus, const CooccurrenceMatrix& cooccurrence,
                                      const ExperimentConfig& config);

struct Selection {
  std::optional<std::size_t> k;  // unset for LR
  std::optional<double> theta;
  double validation_micro = 0.0;
  double validation_macro = 0.0;
  F1Report test;
  std::vector<RoleLabel> test_tweet_predictions;
  std::vector<RoleLabel> test_account_predictions;
};

struct EvalReport {
  std::string method;
  std::string effective_method;
  MethodFamily family = MethodFamily::Knn;
  std::uint64_t seed = 0;
  std::size_t sample_size = 0;
  std::string dataset_hash;
  std::vector<std::size_t> k_grid;  // empty for LR
  std::vector<double> theta_grid;
  std::vector<GridPoint> validation_surface;
  Selection by_macro;
  Selection by_micro;
  double elapsed_seconds = 0.0;  // not part of the JSON report
};

/// Grid search on the validation accounts (KNN) or a single fit (LR), then
/// test-set scores for the macro- and micro-selected configurations.
EvalReport run_method(const PreparedExperiment& experiment, const MethodSpec& method,
                      const ExperimentConfig& config, std::string dataset_hash = {});

inline constexpr int kReportSchemaVersion = 1;

/// Deterministic JSON document; excludes timing.
nlohmann::json report_to_json(const EvalReport& report, const PreparedExperiment& experiment);
/// `k,theta,micro_f1,macro_f1` over the validation surface.
void write_grid_csv(std::ostream& out, const EvalReport& report);
/// Test tweets under the macro-selected configuration:
/// item_id,account_id,true_label,predicted_label,k,metric,theta
void write_predictions_csv(std::ostream& out, const EvalReport& report,
                           const PreparedExperiment& experiment);

/// File-name-safe form of a method name ("t-SED/Max" -> "t-sed_max").
std::string method_slug(std::string_view name);

}  // namespace tsed
