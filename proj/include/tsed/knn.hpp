#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "tsed/corpus.hpp"
#include "tsed/distance.hpp"

namespace tsed {

struct Neighbor {
  std::uint64_t item_id = 0;
  double distance = 0.0;
  RoleLabel label = RoleLabel::LeftTroll;
};

struct NeighborSet {
  std::uint64_t query_id = 0;
  std::vector<Neighbor> neighbors;  // ascending (distance, item_id)
};

/// Per-class counts, indexed by label_index().
using ClassCounts = std::array<std::size_t, kNumLabels>;

/// The k smallest of `distances[i]` = D(query, train[i]); ties at equal
/// distance go to the smaller item_id. Throws if train is empty, k is 0 or
/// exceeds |train|, or a training item is unlabeled.
NeighborSet nearest_neighbors(std::uint64_t query_id, std::span<const double> distances,
                              std::span<const TraceItem> train, std::size_t k);

/// Modal label of the neighbors. Ties go to the tied class with the smaller
/// summed distance, then to the fixed label order.
RoleLabel vote_tweet(std::span<const Neighbor> neighbors);

/// Modal label of per-tweet predictions. Ties go to the tied class with more
/// training accounts, then to the fixed label order.
RoleLabel vote_account(std::span<const RoleLabel> tweet_predictions,
                       const ClassCounts& training_accounts);

RoleLabel predict_tweet(const TraceItem& query, std::span<const TraceItem> train, std::size_t k,
                        const DistanceSpec& spec);

/// Empty items are skipped; throws if none are left.
RoleLabel predict_account(std::span<const TraceItem> account_items,
                          std::span<const TraceItem> train, std::size_t k,
                          const DistanceSpec& spec, const ClassCounts& training_accounts);

struct SweepGrid {
  std::vector<std::size_t> k_values;
  std::vector<double> thetas;
};

/// Tweet-level predictions for every (theta, k) of a grid.
class SweepPredictions {
 public:
  SweepPredictions() = default;
  SweepPredictions(std::size_t num_thetas, std::size_t num_ks, std::size_t num_queries)
      : num_ks_(num_ks),
        num_queries_(num_queries),
        labels_(num_thetas * num_ks * num_queries, RoleLabel::LeftTroll) {}

  RoleLabel& at(std::size_t theta_index, std::size_t k_index, std::size_t query) {
    return labels_[(theta_index * num_ks_ + k_index) * num_queries_ + query];
  }
  RoleLabel at(std::size_t theta_index, std::size_t k_index, std::size_t query) const {
    return labels_[(theta_index * num_ks_ + k_index) * num_queries_ + query];
  }
  std::span<const RoleLabel> column(std::size_t theta_index, std::size_t k_index) const {
    return {labels_.data() + (theta_index * num_ks_ + k_index) * num_queries_, num_queries_};
  }
  std::size_t num_queries() const { return num_queries_; }

 private:
  std::size_t num_ks_ = 0;
  std::size_t num_queries_ = 0;
  std::vector<RoleLabel> labels_;
};

/// Computes each query's base distances to the training pool once, then
/// applies every theta of the grid and votes every k. `base_spec.theta` is
/// ignored. Queries are split across workers; results do not depend on the
/// worker count.
SweepPredictions knn_sweep(std::span<const TraceItem> queries, std::span<const TraceItem> train,
                           const DistanceSpec& base_spec, const SweepGrid& grid, int workers = 0);

}  // namespace tsed
