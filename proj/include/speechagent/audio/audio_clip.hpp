#pragma once

#include <Eigen/Dense>

namespace speechagent::audio {

// Mono PCM waveform with amplitudes nominally in [-1, 1].
struct AudioClip {
  Eigen::VectorXd samples;
  int sample_rate = 0;

  Eigen::Index size() const { return samples.size(); }
  bool empty() const { return samples.size() == 0; }
  double duration_s() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate
                           : 0.0;
  }
};

// Throws Errc::InvalidArgument when the rate is not positive or a sample is
// not finite.
void validate(const AudioClip& clip);

}  // namespace speechagent::audio
