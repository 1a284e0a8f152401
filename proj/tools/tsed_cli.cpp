// tsed: ingest a troll-tweet CSV, evaluate KNN/LR role classifiers, and
// export pairwise distance matrices.
//
//   tsed ingest   --input tweets.csv --out corpus/
//   tsed evaluate --input corpus/ --out results/ --metric t-SED --metric SED
//   tsed export-distances --input corpus/ --out sept/ --window 2016-09-01,2016-10-01 --metric t-SED --theta 0.1

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "tsed/commands.hpp"
#include "tsed/error.hpp"
#include "tsed/parallel.hpp"

namespace {

struct Flags {
  std::string config_path;
  std::string input;
  std::string columns;
  std::string language;
  std::uint32_t min_count = 3;
  std::size_t sample = 50;
  std::uint64_t seed = 42;
  std::vector<std::string> metrics;
  std::string theta_grid;
  std::string k_grid;
  double theta = 0.0;
  std::string window;
  std::string out;
  int workers = 0;
  bool progress = false;
};

template <class T>
std::vector<T> parse_list(const std::string& text, const char* flag) {
  std::vector<T> values;
  std::stringstream stream(text);
  std::string piece;
  while (std::getline(stream, piece, ',')) {
    std::stringstream item(piece);
    T value{};
    if (!(item >> value) || !(item >> std::ws).eof()) {
      throw tsed::ConfigError(std::string("bad value '") + piece + "' in " + flag);
    }
    values.push_back(value);
  }
  if (values.empty()) throw tsed::ConfigError(std::string(flag) + " must not be empty");
  return values;
}

tsed::RunConfig build_config(const Flags& f, const CLI::App& sub) {
  tsed::RunConfig c;
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) throw tsed::ConfigError("cannot open config " + f.config_path);
    try {
      c = tsed::run_config_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
      throw tsed::ConfigError("cannot parse config " + f.config_path + ": " + e.what());
    }
  }
  auto given = [&](const char* name) {
    const CLI::Option* option = sub.get_option_no_throw(name);
    return option != nullptr && option->count() > 0;
  };
  if (given("--input")) c.input = f.input;
  if (given("--columns")) {
    const std::string language_value = c.columns.language_value;
    c.columns = tsed::ColumnMap::parse(f.columns);
    c.columns.language_value = language_value;
  }
  if (given("--language")) {
    c.columns.language_value = f.language;
    if (c.columns.language_column.empty()) c.columns.language_column = "language";
  }
  if (given("--min-count")) c.min_count = f.min_count;
  if (given("--sample")) c.sample = f.sample;
  if (given("--seed")) c.seed = f.seed;
  if (given("--metric")) c.metrics = f.metrics;
  if (given("--theta-grid")) {
    c.theta_grid = parse_list<double>(f.theta_grid, "--theta-grid");
    c.theta_grid_explicit = true;
  }
  if (given("--k-grid")) c.k_grid = parse_list<std::size_t>(f.k_grid, "--k-grid");
  if (given("--theta")) c.theta = f.theta;
  if (given("--window")) c.window = tsed::parse_time_window(f.window);
  if (given("--out")) c.out = f.out;
  if (given("--workers")) c.workers = f.workers;
  return c;
}

void add_common(CLI::App& sub, Flags& f) {
  sub.add_option("--config", f.config_path, "Saved run_config.json to start from");
  sub.add_option("--input", f.input, "Input CSV (ingest) or corpus directory");
  sub.add_option("--out", f.out, "Output directory");
  sub.add_option("--seed", f.seed, "Seed for splits and sampling");
  sub.add_option("--workers", f.workers, "Worker threads (default $TSED_WORKERS or all cores)");
  sub.add_flag("--progress", f.progress, "Report elapsed time and worker count");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-sensitive semantic edit distance toolkit"};
  app.require_subcommand(1);
  Flags f;

  auto* ingest = app.add_subcommand("ingest", "Tokenize a CSV and write corpus artifacts");
  add_common(*ingest, f);
  ingest->add_option("--columns", f.columns, "logical=physical column remapping, comma separated");
  ingest->add_option("--language", f.language, "Keep only rows whose language column equals this value");
  ingest->add_option("--min-count", f.min_count, "Minimum corpus frequency for a token");

  auto* evaluate = app.add_subcommand("evaluate", "Split, grid-search and score classifiers");
  add_common(*evaluate, f);
  evaluate->add_option("--metric", f.metrics, "Method(s): LR t-LR ED t-ED Cosine t-Cosine SED t-SED SED/Max SED/ED");
  evaluate->add_option("--sample", f.sample, "Tweets sampled per account");
  evaluate->add_option("--theta-grid", f.theta_grid, "Comma-separated per-day decay rates");
  evaluate->add_option("--k-grid", f.k_grid, "Comma-separated neighbour counts");

  auto* exporter = app.add_subcommand("export-distances", "Write a pairwise distance matrix for a time window");
  add_common(*exporter, f);
  exporter->add_option("--metric", f.metrics, "Distance metric, e.g. t-SED");
  exporter->add_option("--window", f.window, "start,end as YYYY-MM-DD or epoch seconds (end exclusive)");
  exporter->add_option("--theta", f.theta, "Per-day decay rate for t- metrics");
  exporter->add_option("--sample", f.sample, "Tweets sampled per account inside the window");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const auto started = std::chrono::steady_clock::now();
  try {
    if (ingest->parsed()) {
      tsed::cmd_ingest(build_config(f, *ingest), std::cerr);
    } else if (evaluate->parsed()) {
      tsed::cmd_evaluate(build_config(f, *evaluate), std::cerr);
    } else if (exporter->parsed()) {
      tsed::cmd_export_distances(build_config(f, *exporter), std::cerr);
    }
  } catch (const tsed::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  if (f.progress) {
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    std::cerr << "done in " << seconds << " s with " << tsed::resolve_workers(f.workers) << " worker(s)\n";
  }
  return 0;
}
