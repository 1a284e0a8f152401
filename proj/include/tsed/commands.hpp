#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "json.hpp"
#include "tsed/cooccur.hpp"
#include "tsed/corpus.hpp"
#include "tsed/experiment.hpp"
#include "tsed/run_config.hpp"

namespace tsed {

// Corpus artifact directory written by cmd_ingest.
inline constexpr const char* kRecordsFile = "records.tsv";
inline constexpr const char* kVocabularyFile = "vocab.tsv";
inline constexpr const char* kCooccurrenceFile = "cooccur.bin";
inline constexpr const char* kManifestFile = "manifest.json";

struct CorpusArtifacts {
  Corpus corpus;
  CooccurrenceMatrix cooccurrence;
  nlohmann::json manifest;
  std::string records_hash;
};

/// Loads a corpus directory, rejecting it if any artifact's hash differs
/// from the manifest.
CorpusArtifacts load_corpus_artifacts(const std::filesystem::path& dir);

/// config.input: CSV file, config.out: corpus directory.
void cmd_ingest(const RunConfig& config, std::ostream& log);

/// config.input: corpus directory, config.out: report directory. Writes
/// report_<method>.json, grid_<method>.csv and predictions_<method>.csv for
/// each method, plus run_config.json and timing.json.
std::vector<EvalReport> cmd_evaluate(const RunConfig& config, std::ostream& log);

/// config.input: corpus directory. Writes distances.csv, distances.bin and
/// items.tsv for the nonempty tweets inside config.window, sampled per
/// account to config.sample.
void cmd_export_distances(const RunConfig& config, std::ostream& log);

}  // namespace tsed
