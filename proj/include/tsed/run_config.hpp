#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "tsed/corpus.hpp"
#include "tsed/experiment.hpp"

namespace tsed {

/// [start, end) in epoch seconds.
struct TimeWindow {
  Timestamp start = 0;
  Timestamp end = 0;
};

/// "YYYY-MM-DD,YYYY-MM-DD" or "<epoch>,<epoch>"; end exclusive.
TimeWindow parse_time_window(std::string_view text);

/// Everything a command needs. Saved alongside every output so a run can be
/// repeated with `--config`.
struct RunConfig {
  std::string input;
  ColumnMap columns;
  std::uint32_t min_count = 3;
  std::size_t sample = 50;
  std::uint64_t seed = 42;
  std::vector<std::string> metrics;  // empty: every method
  std::vector<double> theta_grid = default_theta_grid();
  bool theta_grid_explicit = false;
  std::vector<std::size_t> k_grid = default_k_grid();
  double theta = 0.0;  // export only
  std::optional<TimeWindow> window;
  std::string out;
  int workers = 0;  // never affects results
  LrConfig lr;

  ExperimentConfig experiment() const;
};

std::vector<std::string> all_method_names();

nlohmann::json to_json(const RunConfig& config);
RunConfig run_config_from_json(const nlohmann::json& doc);

}  // namespace tsed
