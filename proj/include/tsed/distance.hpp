#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tsed/cooccur.hpp"
#include "tsed/corpus.hpp"

namespace tsed {

using TokenSpan = std::span<const TokenId>;

/// Word-level Levenshtein distance with unit costs.
std::size_t edit_distance(TokenSpan a, TokenSpan b);

/// Reusable DP buffers for semantic_edit_distance.
struct SedWorkspace {
  std::vector<double> deletion;
  std::vector<double> insertion;
  std::vector<double> row;
};

namespace detail {

// Cost of removing (or inserting) s[i] given its predecessor in the same
// sequence. The first position has no predecessor and costs 1.
template <class Similarity>
void context_costs(TokenSpan s, Similarity& sim, std::vector<double>& out) {
  out.resize(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    out[i] = i == 0 ? 1.0 : 1.0 - sim(s[i], s[i - 1]);
  }
}

}  // namespace detail

/// Edit distance where deleting a_i costs 1 - sim(a_i, a_{i-1}), inserting
/// b_j costs 1 - sim(b_j, b_{j-1}) and substituting costs 1 - sim(a_i, b_j).
///
/// The recurrence takes the minimum of all three moves in every cell, with
/// the diagonal free on equal tokens. Forcing the diagonal on a match is not
/// optimal here because deletion and insertion costs depend on context.
/// `sim` must return values in [0, 1] and 1 for identical tokens.
template <class Similarity>
double semantic_edit_distance(TokenSpan a, TokenSpan b, Similarity&& sim, SedWorkspace& ws) {
  detail::context_costs(a, sim, ws.deletion);
  detail::context_costs(b, sim, ws.insertion);
  const auto& del = ws.deletion;
  const auto& ins = ws.insertion;
  auto& row = ws.row;
  row.resize(b.size() + 1);
  row[0] = 0.0;
  for (std::size_t j = 0; j < b.size(); ++j) row[j + 1] = row[j] + ins[j];

  for (std::size_t i = 0; i < a.size(); ++i) {
    double diag = row[0];
    row[0] += del[i];
    for (std::size_t j = 0; j < b.size(); ++j) {
      const double up = row[j + 1];
      // Substitution cost is only evaluated for cells that need it.
      const double sub = a[i] == b[j] ? 0.0 : 1.0 - sim(a[i], b[j]);
      row[j + 1] = std::min({up + del[i], row[j] + ins[j], diag + sub});
      diag = up;
    }
  }
  return row[b.size()];
}

template <class Similarity>
double semantic_edit_distance(TokenSpan a, TokenSpan b, Similarity&& sim) {
  SedWorkspace ws;
  return semantic_edit_distance(a, b, sim, ws);
}

/// sed(a, b) / max(|a|, |b|); 0 when both are empty.
template <class Similarity>
double sed_max_normalized(TokenSpan a, TokenSpan b, Similarity&& sim) {
  const std::size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 0.0;
  return semantic_edit_distance(a, b, sim) / static_cast<double>(longest);
}

/// sed(a, b) / ed(a, b); 0 when ed is 0.
template <class Similarity>
double sed_ed_normalized(TokenSpan a, TokenSpan b, Similarity&& sim) {
  const std::size_t ed = edit_distance(a, b);
  if (ed == 0) return 0.0;
  return semantic_edit_distance(a, b, sim) / static_cast<double>(ed);
}

/// 1 - cosine of the bag-of-words count vectors; 1 if either is empty.
double cosine_distance(TokenSpan a, TokenSpan b);

inline constexpr double kSecondsPerDay = 86400.0;

/// base * exp(theta * |t_i - t_j| / 86400). Saturates at the largest finite
/// double instead of overflowing, and a zero base stays zero.
double time_sensitive(double base_distance, Timestamp t_i, Timestamp t_j, double theta_per_day);

enum class BaseMetric { ED, SED, SEDMax, SEDRatio, Cosine };

std::string_view to_string(BaseMetric metric);
/// Accepts "ED", "SED", "SED/Max", "SED/ED", "Cosine" (case-insensitive).
std::optional<BaseMetric> parse_base_metric(std::string_view name);
bool uses_similarity(BaseMetric metric);

struct DistanceSpec {
  BaseMetric base = BaseMetric::ED;
  double theta = 0.0;  // per day; 0 is the plain metric
  const CooccurrenceMatrix* similarity = nullptr;

  /// Throws ConfigError for a negative or non-finite theta, or an SED
  /// family metric without a similarity source.
  void validate() const;
};

/// Evaluates a DistanceSpec on item pairs. Holds a similarity cache and DP
/// scratch space, so each worker needs its own kernel.
class DistanceKernel {
 public:
  explicit DistanceKernel(const DistanceSpec& spec);

  /// The metric without the time factor.
  double base(TokenSpan a, TokenSpan b);
  double operator()(const TraceItem& a, const TraceItem& b);

  const DistanceSpec& spec() const { return spec_; }

 private:
  DistanceSpec spec_;
  std::optional<SimilarityCache> sim_;
  SedWorkspace workspace_;
};

}  // namespace tsed
