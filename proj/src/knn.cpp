#include "tsed/knn.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "tsed/error.hpp"
#include "tsed/parallel.hpp"

namespace tsed {

namespace {

void check_train(std::span<const TraceItem> train, std::size_t k) {
  if (train.empty()) throw ConfigError("KNN training set is empty");
  if (k == 0 || k > train.size()) throw ConfigError("k must be in [1, |train|]");
}

// Selects the first k of `order` under (distance, item_id).
void select_smallest(std::vector<std::size_t>& order, std::span<const double> distances,
                     std::span<const TraceItem> train, std::size_t k) {
  order.resize(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto less = [&](std::size_t x, std::size_t y) {
    if (distances[x] != distances[y]) return distances[x] < distances[y];
    return train[x].item_id < train[y].item_id;
  };
  const auto kth = order.begin() + static_cast<std::ptrdiff_t>(k);
  if (k < order.size()) std::nth_element(order.begin(), kth - 1, order.end(), less);
  std::sort(order.begin(), kth, less);
}

void fill_neighbors(std::vector<Neighbor>& out, const std::vector<std::size_t>& order,
                    std::span<const double> distances, std::span<const TraceItem> train, std::size_t k) {
  out.clear();
  for (std::size_t i = 0; i < k; ++i) {
    const TraceItem& item = train[order[i]];
    out.push_back({item.item_id, distances[order[i]], *item.label});
  }
}

void require_labels(std::span<const TraceItem> train) {
  for (const TraceItem& item : train) {
    if (!item.label) throw ConfigError("training item " + std::to_string(item.item_id) + " has no label");
  }
}

}  // namespace

NeighborSet nearest_neighbors(std::uint64_t query_id, std::span<const double> distances,
                              std::span<const TraceItem> train, std::size_t k) {
  check_train(train, k);
  require_labels(train);
  if (distances.size() != train.size()) throw std::invalid_argument("one distance per training item required");
  std::vector<std::size_t> order;
  select_smallest(order, distances, train, k);
  NeighborSet set{query_id, {}};
  fill_neighbors(set.neighbors, order, distances, train, k);
  return set;
}

RoleLabel vote_tweet(std::span<const Neighbor> neighbors) {
  if (neighbors.empty()) throw std::invalid_argument("cannot vote without neighbors");
  ClassCounts counts{};
  std::array<double, kNumLabels> sums{};
  for (const Neighbor& n : neighbors) {
    ++counts[label_index(n.label)];
    sums[label_index(n.label)] += n.distance;
  }
  std::size_t best = 0;
  for (std::size_t c = 1; c < kNumLabels; ++c) {
    if (counts[c] > counts[best] || (counts[c] == counts[best] && sums[c] < sums[best])) best = c;
  }
  return kAllLabels[best];
}

RoleLabel vote_account(std::span<const RoleLabel> tweet_predictions, const ClassCounts& training_accounts) {
  if (tweet_predictions.empty()) throw ConfigError("account has no predicted tweets");
  ClassCounts counts{};
  for (RoleLabel label : tweet_predictions) ++counts[label_index(label)];
  std::size_t best = 0;
  for (std::size_t c = 1; c < kNumLabels; ++c) {
    if (counts[c] > counts[best] ||
        (counts[c] == counts[best] && training_accounts[c] > training_accounts[best])) {
      best = c;
    }
  }
  return kAllLabels[best];
}

RoleLabel predict_tweet(const TraceItem& query, std::span<const TraceItem> train, std::size_t k,
                        const DistanceSpec& spec) {
  check_train(train, k);
  DistanceKernel kernel(spec);
  std::vector<double> distances(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) distances[i] = kernel(query, train[i]);
  return vote_tweet(nearest_neighbors(query.item_id, distances, train, k).neighbors);
}

RoleLabel predict_account(std::span<const TraceItem> account_items, std::span<const TraceItem> train,
                          std::size_t k, const DistanceSpec& spec, const ClassCounts& training_accounts) {
  std::vector<RoleLabel> predictions;
  for (const TraceItem& item : account_items) {
    if (!item.is_empty()) predictions.push_back(predict_tweet(item, train, k, spec));
  }
  if (predictions.empty()) throw ConfigError("account has no nonempty items");
  return vote_account(predictions, training_accounts);
}

SweepPredictions knn_sweep(std::span<const TraceItem> queries, std::span<const TraceItem> train,
                           const DistanceSpec& base_spec, const SweepGrid& grid, int workers) {
  if (grid.k_values.empty() || grid.thetas.empty()) throw ConfigError("KNN grid must be nonempty");
  const std::size_t k_max = *std::max_element(grid.k_values.begin(), grid.k_values.end());
  check_train(train, k_max);
  if (std::find(grid.k_values.begin(), grid.k_values.end(), 0u) != grid.k_values.end()) {
    throw ConfigError("k must be at least 1");
  }
  require_labels(train);
  DistanceSpec spec = base_spec;
  spec.theta = 0.0;
  for (double theta : grid.thetas) {
    spec.theta = theta;
    spec.validate();
  }
  spec.theta = 0.0;

  SweepPredictions out(grid.thetas.size(), grid.k_values.size(), queries.size());
  const auto num_queries = static_cast<std::ptrdiff_t>(queries.size());
  [[maybe_unused]] const int threads = resolve_workers(workers);

#pragma omp parallel num_threads(threads)
  {
    DistanceKernel kernel(spec);
    std::vector<double> base(train.size());
    std::vector<double> distances(train.size());
    std::vector<std::size_t> order;
    std::vector<Neighbor> neighbors;

#pragma omp for schedule(dynamic, 1)
    for (std::ptrdiff_t qi = 0; qi < num_queries; ++qi) {
      const auto q = static_cast<std::size_t>(qi);
      const TraceItem& query = queries[q];
      for (std::size_t i = 0; i < train.size(); ++i) base[i] = kernel.base(query.tokens, train[i].tokens);
      for (std::size_t t = 0; t < grid.thetas.size(); ++t) {
        for (std::size_t i = 0; i < train.size(); ++i) {
          distances[i] = time_sensitive(base[i], query.timestamp, train[i].timestamp, grid.thetas[t]);
        }
        select_smallest(order, distances, train, k_max);
        fill_neighbors(neighbors, order, distances, train, k_max);
        for (std::size_t ki = 0; ki < grid.k_values.size(); ++ki) {
          out.at(t, ki, q) = vote_tweet(std::span(neighbors).first(grid.k_values[ki]));
        }
      }
    }
  }
  return out;
}

}  // namespace tsed
