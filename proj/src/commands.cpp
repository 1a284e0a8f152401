#include "tsed/commands.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>

#include "tsed/binary_io.hpp"
#include "tsed/error.hpp"
#include "tsed/matrix_io.hpp"
#include "tsed/parallel.hpp"

namespace tsed {

namespace fs = std::filesystem;

namespace {

std::ofstream open_output(const fs::path& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string() + " (run ingest first?)");
  return in;
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw ConfigError(std::string("missing required ") + flag);
}

void make_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create directory " + dir.string() + ": " + ec.message());
}

void write_json(const fs::path& path, const nlohmann::json& doc) {
  auto out = open_output(path);
  out << doc.dump(2) << '\n';
}

}  // namespace

void cmd_ingest(const RunConfig& config, std::ostream& log) {
  require(config.input, "--input");
  require(config.out, "--out");
  if (config.min_count < 1) throw ConfigError("--min-count must be at least 1");

  IngestResult ingested = ingest_csv(config.input, config.columns);
  const IngestStats& stats = ingested.stats;
  log << "rows: " << stats.total_rows << " retained: " << stats.retained << " dropped (category "
      << stats.dropped_category << ", language " << stats.dropped_language << ", malformed " << stats.malformed
      << ", bad date " << stats.bad_date << ")\n";
  if (stats.bad_date > 0) log << "warning: " << stats.bad_date << " rows with unparseable publish_date skipped\n";
  if (ingested.records.empty()) throw ConfigError("no usable rows in " + config.input);

  Corpus corpus;
  corpus.vocab = build_vocabulary(ingested.records, config.min_count);
  MaterializeResult materialized = materialize(ingested.records, corpus.vocab);
  corpus.items = std::move(materialized.items);
  const CooccurrenceMatrix cooccurrence = build_cooccurrence(corpus.items, corpus.vocab.size());
  log << "vocabulary: " << corpus.vocab.size() << " tokens (min count " << config.min_count << "), items: "
      << corpus.items.size() << " (" << materialized.empty_items << " empty), co-occurring pairs: "
      << cooccurrence.nnz() << '\n';

  const fs::path dir = config.out;
  make_directory(dir);
  {
    auto out = open_output(dir / kRecordsFile, true);
    write_record_dump(out, corpus);
  }
  {
    auto out = open_output(dir / kVocabularyFile, true);
    write_vocabulary(out, corpus.vocab);
  }
  save_cooccurrence(cooccurrence, dir / kCooccurrenceFile);

  nlohmann::json manifest = {
      {"schema_version", 1},
      {"input_hash", io::to_hex(io::hash_file(config.input))},
      {"min_count", config.min_count},
      {"columns", to_json(config).at("columns")},
      {"ingest",
       {{"total_rows", stats.total_rows},
        {"retained", stats.retained},
        {"dropped_category", stats.dropped_category},
        {"dropped_language", stats.dropped_language},
        {"malformed", stats.malformed},
        {"bad_date", stats.bad_date}}},
      {"vocabulary_size", corpus.vocab.size()},
      {"items", corpus.items.size()},
      {"empty_items", materialized.empty_items},
      {"removed_tokens", materialized.removed_tokens},
      {"artifacts",
       {{kRecordsFile, io::to_hex(io::hash_file(dir / kRecordsFile))},
        {kVocabularyFile, io::to_hex(io::hash_file(dir / kVocabularyFile))},
        {kCooccurrenceFile, io::to_hex(io::hash_file(dir / kCooccurrenceFile))}}},
  };
  write_json(dir / kManifestFile, manifest);
  log << "wrote corpus artifacts to " << dir.string() << '\n';
}

CorpusArtifacts load_corpus_artifacts(const fs::path& dir) {
  CorpusArtifacts a;
  {
    auto in = open_input(dir / kManifestFile);
    try {
      a.manifest = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("bad manifest: " + std::string(e.what()));
    }
  }
  for (const char* name : {kRecordsFile, kVocabularyFile, kCooccurrenceFile}) {
    const std::string expected = a.manifest.at("artifacts").value(name, "");
    if (expected != io::to_hex(io::hash_file(dir / name))) {
      throw FormatError(std::string(name) + " does not match the manifest; re-run ingest");
    }
  }
  a.records_hash = a.manifest["artifacts"][kRecordsFile].get<std::string>();
  {
    auto in = open_input(dir / kVocabularyFile);
    a.corpus.vocab = read_vocabulary(in);
  }
  {
    auto in = open_input(dir / kRecordsFile);
    a.corpus.items = read_record_dump(in, a.corpus.vocab);
  }
  a.cooccurrence = load_cooccurrence(dir / kCooccurrenceFile);
  if (a.cooccurrence.vocab_size() != a.corpus.vocab.size()) {
    throw FormatError("co-occurrence matrix and vocabulary sizes differ");
  }
  return a;
}

std::vector<EvalReport> cmd_evaluate(const RunConfig& config, std::ostream& log) {
  require(config.input, "--input");
  require(config.out, "--out");
  const auto names = config.metrics.empty() ? all_method_names() : config.metrics;
  std::vector<MethodSpec> methods;
  for (const auto& name : names) {
    const auto method = parse_method(name);
    if (!method) throw ConfigError("unknown metric '" + name + "'");
    methods.push_back(*method);
  }
  if (config.k_grid.empty() || config.theta_grid.empty()) throw ConfigError("k and theta grids must be nonempty");

  const CorpusArtifacts artifacts = load_corpus_artifacts(config.input);
  const ExperimentConfig experiment_config = config.experiment();
  const PreparedExperiment ex = prepare_experiment(artifacts.corpus, artifacts.cooccurrence, experiment_config);
  log << "accounts: train " << ex.training_accounts[0] + ex.training_accounts[1] + ex.training_accounts[2]
      << ", validation " << ex.validation_accounts.size() << ", test " << ex.test_accounts.size() << " ("
      << ex.dropped_accounts << " dropped without tweets); tweets: " << ex.train.size() << '/'
      << ex.validation.size() << '/' << ex.test.size() << '\n';

  const fs::path dir = config.out;
  make_directory(dir);
  write_json(dir / "run_config.json", to_json(config));

  std::vector<EvalReport> reports;
  nlohmann::json timing = nlohmann::json::object();
  for (const MethodSpec& method : methods) {
    EvalReport report = run_method(ex, method, experiment_config, artifacts.records_hash);
    const std::string slug = method_slug(method.name);
    write_json(dir / ("report_" + slug + ".json"), report_to_json(report, ex));
    {
      auto out = open_output(dir / ("grid_" + slug + ".csv"));
      write_grid_csv(out, report);
    }
    {
      auto out = open_output(dir / ("predictions_" + slug + ".csv"));
      write_predictions_csv(out, report, ex);
    }
    timing[method.name] = report.elapsed_seconds;
    log << report.effective_method << ": micro F1 " << report.by_micro.test.micro << " (k="
        << (report.by_micro.k ? std::to_string(*report.by_micro.k) : "-") << "), macro F1 "
        << report.by_macro.test.macro << " (k=" << (report.by_macro.k ? std::to_string(*report.by_macro.k) : "-")
        << ")\n";
    reports.push_back(std::move(report));
  }
  write_json(dir / "timing.json", timing);
  return reports;
}

void cmd_export_distances(const RunConfig& config, std::ostream& log) {
  require(config.input, "--input");
  require(config.out, "--out");
  if (!config.window) throw ConfigError("missing required --window");
  if (config.metrics.size() > 1) throw ConfigError("export takes a single --metric");
  const std::string name = config.metrics.empty() ? "t-SED" : config.metrics.front();
  const auto method = parse_method(name);
  if (!method) throw ConfigError("unknown metric '" + name + "'");
  if (method->family != MethodFamily::Knn) throw ConfigError("export needs a distance metric, not " + name);
  if (config.sample < 1) throw ConfigError("--sample must be at least 1");

  const CorpusArtifacts artifacts = load_corpus_artifacts(config.input);
  std::map<std::string, std::vector<TraceItem>> by_account;
  for (const TraceItem& item : artifacts.corpus.items) {
    if (!item.is_empty() && item.timestamp >= config.window->start && item.timestamp < config.window->end) {
      by_account[item.account_id].push_back(item);
    }
  }
  std::vector<TraceItem> items;
  for (const auto& [account, account_items] : by_account) {
    auto sample = sample_tweets(account_items, config.sample, config.seed);
    items.insert(items.end(), sample.begin(), sample.end());
  }
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.item_id < b.item_id; });
  if (items.empty()) throw ConfigError("window contains no tweets");

  const DistanceSpec spec{method->base, method->temporal || config.theta > 0 ? config.theta : 0.0,
                          &artifacts.cooccurrence};
  const DistanceMatrix m = pairwise_matrix(items, items, spec, config.workers);

  std::vector<std::uint64_t> ids;
  for (const auto& item : items) ids.push_back(item.item_id);
  const fs::path dir = config.out;
  make_directory(dir);
  {
    auto out = open_output(dir / "distances.csv");
    write_matrix_csv(out, m, ids, ids);
  }
  {
    auto out = open_output(dir / "distances.bin", true);
    write_matrix_binary(out, m);
  }
  {
    auto out = open_output(dir / "items.tsv");
    write_label_sidecar(out, items);
  }
  write_json(dir / "run_config.json", to_json(config));
  log << "exported " << items.size() << "x" << items.size() << " " << method->name << " matrix (theta "
      << spec.theta << ") to " << dir.string() << '\n';
}

}  // namespace tsed
