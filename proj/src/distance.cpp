#include "tsed/distance.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <string>

#include "tsed/error.hpp"

namespace tsed {

std::size_t edit_distance(TokenSpan a, TokenSpan b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i + 1;
    for (std::size_t j = 0; j < b.size(); ++j) {
      const std::size_t up = row[j + 1];
      row[j + 1] = std::min({up + 1, row[j] + 1, diag + (a[i] == b[j] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

double cosine_distance(TokenSpan a, TokenSpan b) {
  if (a.empty() || b.empty()) return 1.0;
  std::vector<TokenId> sa(a.begin(), a.end());
  std::vector<TokenId> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());

  // Run-length counts; integer arithmetic keeps identical bags exactly at 0.
  auto squared_norm = [](const std::vector<TokenId>& s) {
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < s.size();) {
      std::size_t j = i;
      while (j < s.size() && s[j] == s[i]) ++j;
      total += (j - i) * (j - i);
      i = j;
    }
    return total;
  };
  std::uint64_t dot = 0;
  for (std::size_t i = 0, j = 0; i < sa.size() && j < sb.size();) {
    if (sa[i] < sb[j]) {
      ++i;
    } else if (sb[j] < sa[i]) {
      ++j;
    } else {
      const TokenId t = sa[i];
      std::uint64_t ca = 0, cb = 0;
      while (i < sa.size() && sa[i] == t) ++i, ++ca;
      while (j < sb.size() && sb[j] == t) ++j, ++cb;
      dot += ca * cb;
    }
  }
  const double denom = std::sqrt(static_cast<double>(squared_norm(sa)) * static_cast<double>(squared_norm(sb)));
  return std::max(0.0, 1.0 - static_cast<double>(dot) / denom);
}

double time_sensitive(double base_distance, Timestamp t_i, Timestamp t_j, double theta_per_day) {
  constexpr double kMax = std::numeric_limits<double>::max();
  if (base_distance == 0.0 || theta_per_day == 0.0) return base_distance;
  const double gap_days = std::fabs(static_cast<double>(t_i) - static_cast<double>(t_j)) / kSecondsPerDay;
  const double factor = std::exp(theta_per_day * gap_days);
  const double value = base_distance * factor;
  return std::isfinite(value) ? value : kMax;
}

std::string_view to_string(BaseMetric metric) {
  switch (metric) {
    case BaseMetric::ED: return "ED";
    case BaseMetric::SED: return "SED";
    case BaseMetric::SEDMax: return "SED/Max";
    case BaseMetric::SEDRatio: return "SED/ED";
    case BaseMetric::Cosine: return "Cosine";
  }
  return "?";
}

std::optional<BaseMetric> parse_base_metric(std::string_view name) {
  std::string lowered(name);
  for (char& c : lowered) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lowered == "ed") return BaseMetric::ED;
  if (lowered == "sed") return BaseMetric::SED;
  if (lowered == "sed/max") return BaseMetric::SEDMax;
  if (lowered == "sed/ed") return BaseMetric::SEDRatio;
  if (lowered == "cosine") return BaseMetric::Cosine;
  return std::nullopt;
}

bool uses_similarity(BaseMetric metric) {
  return metric == BaseMetric::SED || metric == BaseMetric::SEDMax || metric == BaseMetric::SEDRatio;
}

void DistanceSpec::validate() const {
  if (!(theta >= 0.0) || !std::isfinite(theta)) throw ConfigError("theta must be a finite value >= 0");
  if (uses_similarity(base) && similarity == nullptr) {
    throw ConfigError(std::string(to_string(base)) + " needs a co-occurrence similarity source");
  }
}

DistanceKernel::DistanceKernel(const DistanceSpec& spec) : spec_(spec) {
  spec_.validate();
  if (uses_similarity(spec_.base)) sim_.emplace(*spec_.similarity);
}

double DistanceKernel::base(TokenSpan a, TokenSpan b) {
  switch (spec_.base) {
    case BaseMetric::ED:
      return static_cast<double>(edit_distance(a, b));
    case BaseMetric::Cosine:
      return cosine_distance(a, b);
    case BaseMetric::SED:
      return semantic_edit_distance(a, b, *sim_, workspace_);
    case BaseMetric::SEDMax: {
      const std::size_t longest = std::max(a.size(), b.size());
      if (longest == 0) return 0.0;
      return semantic_edit_distance(a, b, *sim_, workspace_) / static_cast<double>(longest);
    }
    case BaseMetric::SEDRatio: {
      const std::size_t ed = edit_distance(a, b);
      if (ed == 0) return 0.0;
      return semantic_edit_distance(a, b, *sim_, workspace_) / static_cast<double>(ed);
    }
  }
  return 0.0;
}

double DistanceKernel::operator()(const TraceItem& a, const TraceItem& b) {
  return time_sensitive(base(a.tokens, b.tokens), a.timestamp, b.timestamp, spec_.theta);
}

}  // namespace tsed
