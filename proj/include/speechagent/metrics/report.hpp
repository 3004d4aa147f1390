#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "speechagent/sir/evaluate.hpp"
#include "speechagent/sir/impairment.hpp"

namespace speechagent::metrics {

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation; 0 for a single value
  std::size_t n = 0;
};

MeanStd mean_std(std::span<const double> values);

// One cell group of the text-refinement table.
struct TextCell {
  std::optional<MeanStd> bert;  // only with an external embedding backend
  MeanStd bleu;
  MeanStd cosine;
};

struct TextRow {
  std::string method;  // "Impaired", "rule", "w/o C: mock-llm", ...
  std::map<sir::ImpairmentClass, TextCell> cells;
  std::size_t failures = 0;
};

struct TextReport {
  std::vector<TextRow> rows;
  bool has_bert = false;
  nlohmann::json run_config;  // everything needed to regenerate the numbers
};

nlohmann::json to_json(const TextReport& report);
// Aligned columns in the order Dysarthria | Stuttering | Aphasia, each with
// BERT (when present), BLEU, CosSim.
std::string to_text(const TextReport& report);

struct SpeechCell {
  std::optional<double> clarity;  // from ingested ratings
  std::optional<double> cmos;
  std::optional<double> recover;  // percent
  std::size_t n = 0;
};

struct SpeechRow {
  std::string method;
  std::map<sir::ImpairmentClass, SpeechCell> cells;
};

struct SpeechReport {
  std::vector<SpeechRow> rows;
  nlohmann::json run_config;
};

nlohmann::json to_json(const SpeechReport& report);
std::string to_text(const SpeechReport& report);

// Classification table: per-class Acc (percent), F1, AUC, then the macro row.
nlohmann::json to_json(const sir::EvalReport& report);
std::string to_text(const sir::EvalReport& report, const std::string& model_name);

}  // namespace speechagent::metrics
