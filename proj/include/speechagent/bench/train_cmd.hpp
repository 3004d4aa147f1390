#pragma once

#include <vector>

#include <json.hpp>

#include "speechagent/bench/manifest.hpp"
#include "speechagent/sir/evaluate.hpp"
#include "speechagent/sir/train.hpp"

namespace speechagent::bench {

struct TrainCmdConfig {
  sir::TrainHyper hyper;
  audio::DspConfig dsp;
  double test_fraction = 0.1;
  std::uint64_t split_seed = 0;
  int min_per_class = 20;
  int workers = 1;
};

struct TrainCmdResult {
  sir::TrainResult train;
  sir::EvalReport eval;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  nlohmann::json run_config;
};

// Reads every entry's audio (resampled to dsp.target_rate) into log-mel
// items. ManifestInvalid for entries without audio_path.
sir::LabeledDataset load_labeled(const std::vector<ManifestEntry>& entries, const audio::DspConfig& dsp,
                                 int workers = 1);

// Stratified split, train, evaluate on the held-out side. InsufficientData
// when a class has fewer than min_per_class entries.
TrainCmdResult train_sir_cmd(const std::vector<ManifestEntry>& entries, const TrainCmdConfig& cfg);
TrainCmdResult train_sir_cmd(const sir::LabeledDataset& data, const TrainCmdConfig& cfg);

nlohmann::json to_json(const sir::TrainHyper& h);

}  // namespace speechagent::bench
