#include "tsed/lr.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>

#include "tsed/binary_io.hpp"
#include "tsed/error.hpp"

namespace tsed {

SparseFeatures featurize(const TraceItem& item, std::size_t vocab_size,
                         const std::optional<TimeRange>& time_range) {
  std::map<std::uint32_t, double> counts;
  for (TokenId id : item.tokens) {
    if (id >= vocab_size) throw std::invalid_argument("token index exceeds vocabulary");
    counts[id] += 1.0;
  }
  SparseFeatures features(counts.begin(), counts.end());
  features.emplace_back(static_cast<std::uint32_t>(vocab_size), 1.0);
  if (time_range) {
    if (!(time_range->min < time_range->max)) throw ConfigError("time range needs min < max");
    const double span = static_cast<double>(time_range->max - time_range->min);
    const double t = static_cast<double>(item.timestamp - time_range->min) / span;
    features.emplace_back(static_cast<std::uint32_t>(vocab_size + 1), std::clamp(t, 0.0, 1.0));
  }
  return features;
}

void softmax(std::span<double> scores) {
  const double peak = *std::max_element(scores.begin(), scores.end());
  double total = 0.0;
  for (double& s : scores) {
    s = std::exp(s - peak);
    total += s;
  }
  for (double& s : scores) s /= total;
}

namespace {

void class_scores(std::span<const double> weights, std::size_t num_classes, std::size_t dim,
                  const SparseFeatures& x, std::span<double> out) {
  for (std::size_t c = 0; c < num_classes; ++c) {
    double s = 0.0;
    for (const auto& [f, v] : x) s += weights[c * dim + f] * v;
    out[c] = s;
  }
}

}  // namespace

LossGradient lr_loss_and_gradient(std::span<const double> weights, std::size_t num_classes, std::size_t dim,
                                  std::size_t bias_column, std::span<const SparseFeatures> samples,
                                  std::span<const std::size_t> targets, double l2) {
  if (weights.size() != num_classes * dim || samples.size() != targets.size() || samples.empty()) {
    throw std::invalid_argument("inconsistent logistic regression shapes");
  }
  LossGradient out;
  out.gradient.assign(weights.size(), 0.0);
  std::vector<double> p(num_classes);
  double loss = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    class_scores(weights, num_classes, dim, samples[i], p);
    const double peak = *std::max_element(p.begin(), p.end());
    double total = 0.0;
    for (double s : p) total += std::exp(s - peak);
    loss += peak + std::log(total) - p[targets[i]];
    softmax(p);
    p[targets[i]] -= 1.0;
    for (std::size_t c = 0; c < num_classes; ++c) {
      for (const auto& [f, v] : samples[i]) out.gradient[c * dim + f] += p[c] * v;
    }
  }
  const double inv_n = 1.0 / static_cast<double>(samples.size());
  loss *= inv_n;
  for (double& g : out.gradient) g *= inv_n;

  double penalty = 0.0;
  for (std::size_t c = 0; c < num_classes; ++c) {
    for (std::size_t f = 0; f < dim; ++f) {
      if (f == bias_column) continue;
      const double w = weights[c * dim + f];
      penalty += w * w;
      out.gradient[c * dim + f] += l2 * w;
    }
  }
  out.loss = loss + 0.5 * l2 * penalty;
  return out;
}

LrModel::LrModel(std::vector<RoleLabel> classes, std::size_t vocab_size, std::optional<TimeRange> time_range,
                 LrConfig config)
    : classes_(std::move(classes)),
      vocab_size_(vocab_size),
      time_range_(time_range),
      config_(config),
      weights_(classes_.size() * feature_dimension(vocab_size, time_range.has_value()), 0.0) {}

std::vector<double> LrModel::scores(const SparseFeatures& features) const {
  std::vector<double> out(classes_.size());
  class_scores(weights_, classes_.size(), dimension(), features, out);
  return out;
}

std::vector<double> LrModel::probabilities(const TraceItem& item) const {
  auto p = scores(featurize(item, vocab_size_, time_range_));
  softmax(p);
  return p;
}

LrModel train_lr(std::span<const TraceItem> train_items, std::size_t vocab_size, bool time_enabled,
                 const LrConfig& config) {
  std::array<bool, kNumLabels> present{};
  for (const TraceItem& item : train_items) {
    if (!item.label) throw ConfigError("logistic regression training item without label");
    present[label_index(*item.label)] = true;
  }
  std::vector<RoleLabel> classes;
  std::array<std::size_t, kNumLabels> position{};
  for (RoleLabel label : kAllLabels) {
    if (present[label_index(label)]) {
      position[label_index(label)] = classes.size();
      classes.push_back(label);
    }
  }
  if (classes.size() < 2) throw ConfigError("logistic regression needs at least two classes");

  std::optional<TimeRange> range;
  if (time_enabled) {
    const auto [lo, hi] = std::minmax_element(train_items.begin(), train_items.end(),
                                              [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; });
    range = TimeRange{lo->timestamp, hi->timestamp};
    if (!(range->min < range->max)) throw ConfigError("t-LR needs training timestamps spanning a range");
  }

  std::vector<SparseFeatures> samples;
  std::vector<std::size_t> targets;
  samples.reserve(train_items.size());
  for (const TraceItem& item : train_items) {
    samples.push_back(featurize(item, vocab_size, range));
    targets.push_back(position[label_index(*item.label)]);
  }

  LrModel model(std::move(classes), vocab_size, range, config);
  const std::size_t dim = model.dimension();
  auto& w = model.weights();
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    const LossGradient lg = lr_loss_and_gradient(w, model.classes().size(), dim, vocab_size, samples, targets, config.l2);
    model.loss_history.push_back(lg.loss);
    double norm_sq = 0.0;
    for (double g : lg.gradient) norm_sq += g * g;
    if (std::sqrt(norm_sq) < config.gradient_tolerance) break;
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= config.learning_rate * lg.gradient[i];
  }
  return model;
}

RoleLabel predict_lr(const LrModel& model, const TraceItem& item) {
  const auto s = model.scores(featurize(item, model.vocab_size(), model.time_range()));
  std::size_t best = 0;
  for (std::size_t c = 1; c < s.size(); ++c) {
    if (s[c] > s[best]) best = c;
  }
  return model.classes()[best];
}

namespace {
constexpr char kMagic[8] = {'T', 'S', 'E', 'D', 'L', 'R', 'M', '1'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

void save_lr_model(std::ostream& out, const LrModel& model) {
  out.write(kMagic, sizeof(kMagic));
  io::write_u32(out, kVersion);
  io::write_u32(out, static_cast<std::uint32_t>(model.classes().size()));
  for (RoleLabel label : model.classes()) io::write_u32(out, static_cast<std::uint32_t>(label_index(label)));
  io::write_u64(out, model.vocab_size());
  io::write_u32(out, model.time_range() ? 1 : 0);
  io::write_i64(out, model.time_range() ? model.time_range()->min : 0);
  io::write_i64(out, model.time_range() ? model.time_range()->max : 0);
  const LrConfig& c = model.config();
  io::write_f64(out, c.learning_rate);
  io::write_u64(out, c.epochs);
  io::write_f64(out, c.l2);
  io::write_f64(out, c.gradient_tolerance);
  io::write_u64(out, c.seed);
  io::write_u64(out, model.weights().size());
  for (double w : model.weights()) io::write_f64(out, w);
}

LrModel load_lr_model(std::istream& in) {
  char magic[8];
  if (!in.read(magic, sizeof(magic)) || !std::equal(magic, magic + 8, kMagic)) {
    throw FormatError("not a logistic regression model file");
  }
  if (io::read_u32(in) != kVersion) throw FormatError("unsupported model version");
  const std::uint32_t num_classes = io::read_u32(in);
  if (num_classes < 2 || num_classes > kNumLabels) throw FormatError("bad class count");
  std::vector<RoleLabel> classes;
  for (std::uint32_t i = 0; i < num_classes; ++i) {
    const std::uint32_t index = io::read_u32(in);
    if (index >= kNumLabels) throw FormatError("bad class label");
    classes.push_back(kAllLabels[index]);
  }
  const std::uint64_t vocab_size = io::read_u64(in);
  const bool time_enabled = io::read_u32(in) != 0;
  const Timestamp tmin = io::read_i64(in);
  const Timestamp tmax = io::read_i64(in);
  LrConfig config;
  config.learning_rate = io::read_f64(in);
  config.epochs = io::read_u64(in);
  config.l2 = io::read_f64(in);
  config.gradient_tolerance = io::read_f64(in);
  config.seed = io::read_u64(in);
  std::optional<TimeRange> range;
  if (time_enabled) range = TimeRange{tmin, tmax};
  LrModel model(std::move(classes), vocab_size, range, config);
  if (io::read_u64(in) != model.weights().size()) throw FormatError("weight count does not match header");
  for (double& w : model.weights()) w = io::read_f64(in);
  return model;
}

}  // namespace tsed
