#include "speechagent/bench/train_cmd.hpp"

#include <array>

#include "speechagent/audio/resample.hpp"
#include "speechagent/audio/wav.hpp"
#include "speechagent/bench/parallel.hpp"
#include "speechagent/pipeline/config.hpp"

namespace speechagent::bench {

sir::LabeledDataset load_labeled(const std::vector<ManifestEntry>& entries, const audio::DspConfig& dsp,
                                 int workers) {
  audio::validate(dsp);
  for (const auto& e : entries) {
    if (!e.audio_path) throw Error(Errc::ManifestInvalid, "entry " + e.sample_id + " has no audio_path");
  }
  sir::LabeledDataset data;
  data.dsp = dsp;
  data.items.resize(entries.size());
  parallel_for(entries.size(), workers, [&](std::size_t i) {
    const auto clip = audio::resample(audio::load_wav_file(*entries[i].audio_path), dsp.target_rate);
    data.items[i] = {audio::log_mel(clip, dsp), entries[i].class_label, entries[i].sample_id};
  });
  return data;
}

nlohmann::json to_json(const sir::TrainHyper& h) {
  return {{"hidden", h.hidden},   {"pool_mode", sir::to_string(h.pool_mode)},
          {"lr", h.lr},           {"epochs", h.epochs},
          {"batch", h.batch},     {"seed", h.seed},
          {"init_scale", h.init_scale}, {"standardize", h.standardize}};
}

TrainCmdResult train_sir_cmd(const sir::LabeledDataset& data, const TrainCmdConfig& cfg) {
  std::array<int, sir::kNumClasses> counts{};
  for (const auto& item : data.items) ++counts[static_cast<std::size_t>(sir::index_of(item.label))];
  for (std::size_t c = 0; c < sir::kNumClasses; ++c) {
    if (counts[c] < cfg.min_per_class) {
      throw Error(Errc::InsufficientData, "class " + std::string(sir::to_string(sir::kAllClasses[c])) + " has " +
                                              std::to_string(counts[c]) + " entries; need " +
                                              std::to_string(cfg.min_per_class));
    }
  }
  const auto [train_set, test_set] = sir::stratified_split(data, cfg.test_fraction, cfg.split_seed);
  TrainCmdResult r;
  r.n_train = train_set.items.size();
  r.n_test = test_set.items.size();
  r.train = sir::train(train_set, cfg.hyper);
  r.eval = sir::evaluate(r.train.model, test_set);
  r.run_config = {{"hyper", to_json(cfg.hyper)},
                  {"dsp", pipeline::to_json(data.dsp)},
                  {"test_fraction", cfg.test_fraction},
                  {"split_seed", cfg.split_seed},
                  {"n_train", r.n_train},
                  {"n_test", r.n_test}};
  return r;
}

TrainCmdResult train_sir_cmd(const std::vector<ManifestEntry>& entries, const TrainCmdConfig& cfg) {
  return train_sir_cmd(load_labeled(entries, cfg.dsp, cfg.workers), cfg);
}

}  // namespace speechagent::bench
