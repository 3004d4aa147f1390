#pragma once

#include <cstddef>
#include <span>

#include "speechagent/audio/audio_clip.hpp"
#include "speechagent/sir/model.hpp"

namespace speechagent::metrics {

struct RecoveryReport {
  std::size_t n_total = 0;
  std::size_t n_recovered = 0;
  double rate_percent = 0.0;
};

// Share of clips the classifier labels Healthy, in percent. EmptyInput for an
// empty list; FingerprintMismatch when `cfg` is not the model's training
// configuration.
RecoveryReport recovery_rate(std::span<const audio::AudioClip> clips, const sir::SirModel& model,
                             const audio::DspConfig& cfg);

// Same arithmetic over labels that were already predicted.
RecoveryReport recovery_from_labels(std::span<const sir::ImpairmentClass> predicted);

}  // namespace speechagent::metrics
