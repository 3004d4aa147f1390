#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "speechagent/audio/audio_clip.hpp"

namespace testsupport {

inline speechagent::audio::AudioClip sine(double freq, double seconds, int rate,
                                          double amp = 0.5) {
  speechagent::audio::AudioClip clip;
  clip.sample_rate = rate;
  const auto n = static_cast<Eigen::Index>(std::llround(seconds * rate));
  clip.samples.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    clip.samples[i] = amp * std::sin(2.0 * std::numbers::pi * freq * i / rate);
  }
  return clip;
}

// Frequency (Hz) of the largest-magnitude FFT bin, excluding DC, and the bin
// width in Hz.
struct Peak {
  double hz;
  double bin_hz;
};

inline Peak fft_peak(const speechagent::audio::AudioClip& clip) {
  std::vector<double> x(clip.samples.data(), clip.samples.data() + clip.samples.size());
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  std::vector<std::complex<double>> spec;
  fft.fwd(spec, x);
  std::size_t best = 1;
  for (std::size_t k = 1; k < spec.size(); ++k) {
    if (std::abs(spec[k]) > std::abs(spec[best])) best = k;
  }
  const double bin_hz = static_cast<double>(clip.sample_rate) / static_cast<double>(x.size());
  return {static_cast<double>(best) * bin_hz, bin_hz};
}

inline speechagent::audio::AudioClip noise(Eigen::Index n, int rate, std::uint64_t seed,
                                           double amp = 0.3) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-amp, amp);
  speechagent::audio::AudioClip clip;
  clip.sample_rate = rate;
  clip.samples.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) clip.samples[i] = u(rng);
  return clip;
}

}  // namespace testsupport
