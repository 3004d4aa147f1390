#include "speechagent/bench/text_eval.hpp"

#include <map>
#include <optional>

#include "speechagent/backends/mock.hpp"
#include "speechagent/bench/parallel.hpp"
#include "speechagent/refine/corrupt.hpp"
#include "speechagent/refine/refine.hpp"
#include "speechagent/refine/rule_refiner.hpp"

namespace speechagent::bench {

std::string_view to_string(RefinerVariant v) {
  switch (v) {
    case RefinerVariant::WithClass: return "with_class";
    case RefinerVariant::WithoutClass: return "without_class";
    case RefinerVariant::Rule: return "rule";
  }
  return "?";
}

RefinerVariant parse_variant(std::string_view name) {
  for (auto v : {RefinerVariant::WithClass, RefinerVariant::WithoutClass, RefinerVariant::Rule}) {
    if (name == to_string(v)) return v;
  }
  throw Error(Errc::ConfigInvalid, "unknown refiner variant '" + std::string(name) + "'");
}

void EvalRunConfig::validate() const {
  if (seeds.empty()) throw Error(Errc::ConfigInvalid, "at least one seed is required");
  if (variants.empty()) throw Error(Errc::ConfigInvalid, "at least one variant is required");
  if (workers < 1) throw Error(Errc::ConfigInvalid, "workers must be positive");
}

nlohmann::json to_json(const EvalRunConfig& cfg) {
  nlohmann::json variants = nlohmann::json::array();
  for (auto v : cfg.variants) variants.push_back(to_string(v));
  return {{"seeds", cfg.seeds},
          {"variants", variants},
          {"smoothing", cfg.smoothing == metrics::Smoothing::None ? "none" : "add_epsilon"},
          {"temperature", cfg.completion.temperature},
          {"max_tokens", cfg.completion.max_tokens},
          {"workers", cfg.workers},
          {"backends", cfg.backends}};
}

std::uint64_t corruption_seed(std::uint64_t run_seed, std::string_view sample_id) {
  return backends::TrigramEmbedder::fnv1a(sample_id) ^ (run_seed * 0x9e3779b97f4a7c15ULL);
}

namespace {

struct Score {
  bool ok = false;
  double bleu = 0.0;
  double cosine = 0.0;
};

}  // namespace

metrics::TextReport run_text_eval(const std::vector<ManifestEntry>& entries, const EvalRunConfig& cfg,
                                  backends::LlmBackend* llm, backends::Embedder& embedder) {
  cfg.validate();
  std::vector<const ManifestEntry*> usable;
  for (const auto& e : entries) {
    if (!e.intent_text) throw Error(Errc::ManifestInvalid, "entry " + e.sample_id + " has no intent_text");
    if (e.class_label != sir::ImpairmentClass::Healthy) usable.push_back(&e);
  }
  for (auto v : cfg.variants) {
    if (v != RefinerVariant::Rule && !llm) {
      throw Error(Errc::ConfigInvalid, "variant " + std::string(to_string(v)) + " needs an LLM backend");
    }
  }

  // Row 0 is the unrefined baseline; then one row per variant.
  const std::size_t n_rows = cfg.variants.size() + 1;
  std::vector<metrics::TextRow> rows(n_rows);
  rows[0].method = "Impaired";
  for (std::size_t v = 0; v < cfg.variants.size(); ++v) {
    switch (cfg.variants[v]) {
      case RefinerVariant::Rule: rows[v + 1].method = "rule"; break;
      case RefinerVariant::WithClass: rows[v + 1].method = "w/ C: " + llm->id(); break;
      case RefinerVariant::WithoutClass: rows[v + 1].method = "w/o C: " + llm->id(); break;
    }
  }

  // per_run[row][class] -> per-seed averages
  std::vector<std::map<sir::ImpairmentClass, std::vector<double>>> run_bleu(n_rows), run_cos(n_rows);
  for (const auto seed : cfg.seeds) {
    std::vector<std::vector<Score>> scores(n_rows, std::vector<Score>(usable.size()));
    parallel_for(usable.size(), cfg.workers, [&](std::size_t i) {
      const auto& e = *usable[i];
      const std::string& intent = *e.intent_text;
      std::string impaired;
      try {
        impaired = e.impaired_text ? *e.impaired_text
                                   : refine::corrupt_text(intent, e.class_label, corruption_seed(seed, e.sample_id));
      } catch (const Error&) {
        return;  // every row counts this entry as failed
      }
      auto score = [&](std::size_t row, const std::string& candidate) {
        const auto s = metrics::score_pair(candidate, intent, embedder, cfg.smoothing);
        scores[row][i] = {true, s.bleu, s.cosine};
      };
      score(0, impaired);
      for (std::size_t v = 0; v < cfg.variants.size(); ++v) {
        try {
          switch (cfg.variants[v]) {
            case RefinerVariant::Rule: score(v + 1, refine::rule_refine(impaired)); break;
            case RefinerVariant::WithClass:
              score(v + 1, refine::refine_text(impaired, e.class_label, *llm, cfg.completion).refined_text);
              break;
            case RefinerVariant::WithoutClass:
              score(v + 1, refine::refine_text(impaired, std::nullopt, *llm, cfg.completion).refined_text);
              break;
          }
        } catch (const Error&) {
          // left as not ok; counted below
        }
      }
    });

    for (std::size_t r = 0; r < n_rows; ++r) {
      std::map<sir::ImpairmentClass, std::pair<double, double>> sum;
      std::map<sir::ImpairmentClass, int> count;
      for (std::size_t i = 0; i < usable.size(); ++i) {
        const auto& s = scores[r][i];
        if (!s.ok) {
          ++rows[r].failures;
          continue;
        }
        auto& acc = sum[usable[i]->class_label];
        acc.first += s.bleu;
        acc.second += s.cosine;
        ++count[usable[i]->class_label];
      }
      for (const auto& [cls, acc] : sum) {
        run_bleu[r][cls].push_back(acc.first / count[cls]);
        run_cos[r][cls].push_back(acc.second / count[cls]);
      }
    }
  }

  metrics::TextReport report;
  for (std::size_t r = 0; r < n_rows; ++r) {
    for (const auto& [cls, values] : run_bleu[r]) {
      metrics::TextCell cell;
      cell.bleu = metrics::mean_std(values);
      cell.cosine = metrics::mean_std(run_cos[r][cls]);
      rows[r].cells[cls] = cell;
    }
  }
  report.rows = std::move(rows);
  report.run_config = to_json(cfg);
  report.run_config["embedder"] = embedder.id();
  report.run_config["n_entries"] = usable.size();
  return report;
}

}  // namespace speechagent::bench
