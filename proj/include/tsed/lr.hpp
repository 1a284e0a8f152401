#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "tsed/corpus.hpp"

namespace tsed {

struct LrConfig {
  double learning_rate = 0.1;
  std::size_t epochs = 500;
  double l2 = 1e-4;
  double gradient_tolerance = 1e-6;
  // Training is full-batch from zero weights, so the seed only travels with
  // the model for provenance.
  std::uint64_t seed = 0;
};

struct TimeRange {
  Timestamp min = 0;
  Timestamp max = 0;
};

/// Sorted (feature index, value) pairs.
using SparseFeatures = std::vector<std::pair<std::uint32_t, double>>;

/// Token counts in [0, V), the bias at V, and with a time range the
/// normalised timestamp clipped to [0, 1] at V + 1.
SparseFeatures featurize(const TraceItem& item, std::size_t vocab_size,
                         const std::optional<TimeRange>& time_range);

inline std::size_t feature_dimension(std::size_t vocab_size, bool time_enabled) {
  return vocab_size + 1 + (time_enabled ? 1 : 0);
}

struct LossGradient {
  double loss = 0.0;
  std::vector<double> gradient;  // same layout as the weights
};

/// Mean softmax cross-entropy plus (l2 / 2) * |W|^2 over every column but
/// `bias_column`. `weights` is classes x dim, row-major; `targets` are class
/// positions in [0, num_classes).
LossGradient lr_loss_and_gradient(std::span<const double> weights, std::size_t num_classes,
                                  std::size_t dim, std::size_t bias_column,
                                  std::span<const SparseFeatures> samples,
                                  std::span<const std::size_t> targets, double l2);

/// Softmax of `scores` computed in place, max-shifted.
void softmax(std::span<double> scores);

class LrModel {
 public:
  LrModel() = default;
  LrModel(std::vector<RoleLabel> classes, std::size_t vocab_size,
          std::optional<TimeRange> time_range, LrConfig config);

  const std::vector<RoleLabel>& classes() const { return classes_; }
  std::size_t vocab_size() const { return vocab_size_; }
  std::size_t dimension() const { return feature_dimension(vocab_size_, time_range_.has_value()); }
  const std::optional<TimeRange>& time_range() const { return time_range_; }
  const LrConfig& config() const { return config_; }

  std::vector<double>& weights() { return weights_; }
  const std::vector<double>& weights() const { return weights_; }

  std::vector<double> scores(const SparseFeatures& features) const;
  std::vector<double> probabilities(const TraceItem& item) const;

  /// Loss after each epoch, filled by train_lr.
  std::vector<double> loss_history;

 private:
  std::vector<RoleLabel> classes_;
  std::size_t vocab_size_ = 0;
  std::optional<TimeRange> time_range_;
  LrConfig config_;
  std::vector<double> weights_;
};

/// Full-batch gradient descent. The class list is the labels present, in
/// fixed label order; fewer than two classes is a ConfigError. With
/// `time_enabled` the time range is the training min/max timestamp.
LrModel train_lr(std::span<const TraceItem> train_items, std::size_t vocab_size,
                 bool time_enabled, const LrConfig& config = {});

/// Highest score wins; equal scores go to the earlier class.
RoleLabel predict_lr(const LrModel& model, const TraceItem& item);

// "TSEDLRM1" magic, u32 version, header fields, then classes x dim f64 weights.
void save_lr_model(std::ostream& out, const LrModel& model);
LrModel load_lr_model(std::istream& in);

}  // namespace tsed
