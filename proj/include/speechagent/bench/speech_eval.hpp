#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "speechagent/bench/manifest.hpp"
#include "speechagent/metrics/report.hpp"
#include "speechagent/pipeline/pipeline.hpp"

namespace speechagent::bench {

struct SpeechEvalConfig {
  std::uint64_t seed = 0;  // drives the A/B shuffle
  bool use_class_in_prompt = true;
  std::string style;
  // Pass the manifest's impaired_text as the transcript (mock recognizer).
  bool sidecar_from_manifest = false;
  int workers = 1;
  // Listening-test clips are copied here when non-empty.
  std::filesystem::path listening_dir;
};

struct ListeningPair {
  std::string pair_id;     // "p001", ...
  std::string sample_id;   // key only
  sir::ImpairmentClass cls = sir::ImpairmentClass::Healthy;
  bool refined_is_b = true;
};

struct SpeechEvalResult {
  metrics::SpeechReport report;
  std::vector<pipeline::RefineSession> sessions;
  std::vector<ListeningPair> pairs;  // in presentation order
  nlohmann::json rater_manifest;     // what raters see: pair ids, clip files, questions
  nlohmann::json key;                // blinded id -> condition; keep away from raters
  std::size_t failures = 0;
};

// Rater-facing questionnaire text for the two scales.
std::string clarity_question();
std::string cmos_question();

// Each impaired-class entry is classified as is (Impaired row) and run
// through the pipeline (refined row); Recover is the Healthy share of each.
// Then the successful pairs are shuffled with `seed` and each pair gets a
// random A/B order. MissingModel when the pipeline has no classifier.
SpeechEvalResult run_speech_eval(const std::vector<ManifestEntry>& entries, const pipeline::Pipeline& pipe,
                                 const SpeechEvalConfig& cfg);

// CSV with header blinded_id,clarity,cmos. blinded_id is "<pair>-A" or
// "<pair>-B"; clarity (1..5) rates that clip; cmos (-3..3) rates B against A
// and may sit on either row of its pair. Empty cells are allowed. Fills
// Clarity and C-MOS (refined relative to impaired) into the report's rows.
// ManifestInvalid on unknown ids or out-of-range scores.
void ingest_ratings(std::istream& csv, const nlohmann::json& key, metrics::SpeechReport& report);

// Writes listening/manifest.json and listening_key.json next to it (not inside).
void write_listening_materials(const SpeechEvalResult& result, const std::filesystem::path& out_dir);

}  // namespace speechagent::bench
