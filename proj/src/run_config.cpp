#include "tsed/run_config.hpp"

#include <charconv>
#include <chrono>

#include "tsed/error.hpp"

namespace tsed {

namespace {

std::optional<Timestamp> parse_window_bound(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.size() == 10 && text[4] == '-' && text[7] == '-') {
    int y = 0;
    unsigned m = 0, d = 0;
    const char* p = text.data();
    if (std::from_chars(p, p + 4, y).ec != std::errc() || std::from_chars(p + 5, p + 7, m).ec != std::errc() ||
        std::from_chars(p + 8, p + 10, d).ec != std::errc()) {
      return std::nullopt;
    }
    using namespace std::chrono;
    const year_month_day ymd{year{y}, month{m}, day{d}};
    if (!ymd.ok()) return std::nullopt;
    return static_cast<Timestamp>(sys_days{ymd}.time_since_epoch().count()) * 86400;
  }
  Timestamp value = 0;
  const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc() || result.ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

}  // namespace

TimeWindow parse_time_window(std::string_view text) {
  const std::size_t comma = text.find(',');
  if (comma == std::string_view::npos) throw ConfigError("window must be 'start,end'");
  const auto start = parse_window_bound(text.substr(0, comma));
  const auto end = parse_window_bound(text.substr(comma + 1));
  if (!start || !end) throw ConfigError("cannot parse window '" + std::string(text) + "'");
  if (*end <= *start) throw ConfigError("window end must be after its start");
  return {*start, *end};
}

std::vector<std::string> all_method_names() {
  return {"LR", "ED", "Cosine", "SED", "SED/Max", "SED/ED", "t-LR", "t-ED", "t-Cosine", "t-SED"};
}

ExperimentConfig RunConfig::experiment() const {
  ExperimentConfig e;
  e.sample_size = sample;
  e.seed = seed;
  e.k_grid = k_grid;
  e.theta_grid = theta_grid;
  e.theta_grid_explicit = theta_grid_explicit;
  e.lr = lr;
  e.workers = workers;
  return e;
}

nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json window = nullptr;
  if (c.window) window = {{"start", c.window->start}, {"end", c.window->end}};
  return {
      {"input", c.input},
      {"columns",
       {{"author", c.columns.author},
        {"content", c.columns.content},
        {"publish_date", c.columns.publish_date},
        {"account_category", c.columns.account_category},
        {"language_column", c.columns.language_column},
        {"language_value", c.columns.language_value}}},
      {"min_count", c.min_count},
      {"sample", c.sample},
      {"seed", c.seed},
      {"metrics", c.metrics},
      {"theta_grid", c.theta_grid},
      {"theta_grid_explicit", c.theta_grid_explicit},
      {"k_grid", c.k_grid},
      {"theta", c.theta},
      {"window", window},
      {"out", c.out},
      {"workers", c.workers},
      {"lr",
       {{"learning_rate", c.lr.learning_rate},
        {"epochs", c.lr.epochs},
        {"l2", c.lr.l2},
        {"gradient_tolerance", c.lr.gradient_tolerance},
        {"seed", c.lr.seed}}},
  };
}

RunConfig run_config_from_json(const nlohmann::json& doc) {
  try {
    RunConfig c;
    c.input = doc.value("input", c.input);
    if (doc.contains("columns")) {
      const auto& cols = doc.at("columns");
      c.columns.author = cols.value("author", c.columns.author);
      c.columns.content = cols.value("content", c.columns.content);
      c.columns.publish_date = cols.value("publish_date", c.columns.publish_date);
      c.columns.account_category = cols.value("account_category", c.columns.account_category);
      c.columns.language_column = cols.value("language_column", c.columns.language_column);
      c.columns.language_value = cols.value("language_value", c.columns.language_value);
    }
    c.min_count = doc.value("min_count", c.min_count);
    c.sample = doc.value("sample", c.sample);
    c.seed = doc.value("seed", c.seed);
    c.metrics = doc.value("metrics", c.metrics);
    c.theta_grid = doc.value("theta_grid", c.theta_grid);
    c.theta_grid_explicit = doc.value("theta_grid_explicit", c.theta_grid_explicit);
    c.k_grid = doc.value("k_grid", c.k_grid);
    c.theta = doc.value("theta", c.theta);
    if (doc.contains("window") && !doc.at("window").is_null()) {
      c.window = TimeWindow{doc.at("window").at("start").get<Timestamp>(), doc.at("window").at("end").get<Timestamp>()};
    }
    c.out = doc.value("out", c.out);
    c.workers = doc.value("workers", c.workers);
    if (doc.contains("lr")) {
      const auto& lr = doc.at("lr");
      c.lr.learning_rate = lr.value("learning_rate", c.lr.learning_rate);
      c.lr.epochs = lr.value("epochs", c.lr.epochs);
      c.lr.l2 = lr.value("l2", c.lr.l2);
      c.lr.gradient_tolerance = lr.value("gradient_tolerance", c.lr.gradient_tolerance);
      c.lr.seed = lr.value("seed", c.lr.seed);
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid run config: ") + e.what());
  }
}

}  // namespace tsed
