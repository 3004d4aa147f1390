#include "speechagent/metrics/recovery.hpp"

#include "speechagent/error.hpp"

namespace speechagent::metrics {

RecoveryReport recovery_from_labels(std::span<const sir::ImpairmentClass> predicted) {
  if (predicted.empty()) throw Error(Errc::EmptyInput, "no clips to score");
  RecoveryReport r;
  r.n_total = predicted.size();
  for (auto label : predicted) r.n_recovered += label == sir::ImpairmentClass::Healthy;
  r.rate_percent = 100.0 * static_cast<double>(r.n_recovered) / static_cast<double>(r.n_total);
  return r;
}

RecoveryReport recovery_rate(std::span<const audio::AudioClip> clips, const sir::SirModel& model,
                             const audio::DspConfig& cfg) {
  if (clips.empty()) throw Error(Errc::EmptyInput, "no clips to score");
  if (audio::fingerprint(cfg) != model.cfg_fingerprint) {
    throw Error(Errc::FingerprintMismatch, "DSP configuration differs from the model's");
  }
  std::vector<sir::ImpairmentClass> labels;
  labels.reserve(clips.size());
  for (const auto& clip : clips) labels.push_back(sir::predict(clip, model, cfg).label);
  return recovery_from_labels(labels);
}

}  // namespace speechagent::metrics
