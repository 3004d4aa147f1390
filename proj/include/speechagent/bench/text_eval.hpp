#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "speechagent/backends/backend.hpp"
#include "speechagent/bench/manifest.hpp"
#include "speechagent/metrics/report.hpp"
#include "speechagent/metrics/text.hpp"

namespace speechagent::bench {

enum class RefinerVariant { WithClass, WithoutClass, Rule };

std::string_view to_string(RefinerVariant v);
RefinerVariant parse_variant(std::string_view name);  // ConfigInvalid

struct EvalRunConfig {
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};
  std::vector<RefinerVariant> variants = {RefinerVariant::Rule, RefinerVariant::WithClass,
                                          RefinerVariant::WithoutClass};
  metrics::Smoothing smoothing = metrics::Smoothing::AddEpsilon;
  backends::CompletionParams completion;
  int workers = 1;
  nlohmann::json backends;  // descriptive, copied into the report

  void validate() const;  // ConfigInvalid
};

nlohmann::json to_json(const EvalRunConfig& cfg);

// Seed for corrupting one entry in one run.
std::uint64_t corruption_seed(std::uint64_t run_seed, std::string_view sample_id);

// Per run seed: impaired text is the entry's, or its seeded corruption of the
// intent; every variant refines it; BLEU and cosine against the intent are
// averaged per class. Cells report mean and std of those per-run averages.
// Healthy entries are skipped. A failing entry is counted and left out.
// `llm` may be null when only the rule variant is requested.
metrics::TextReport run_text_eval(const std::vector<ManifestEntry>& entries, const EvalRunConfig& cfg,
                                  backends::LlmBackend* llm, backends::Embedder& embedder);

}  // namespace speechagent::bench
