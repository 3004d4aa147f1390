#pragma once

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "speechagent/audio/audio_clip.hpp"
#include "speechagent/error.hpp"

namespace speechagent::audio {

// Front-end parameters. Defaults: 16 kHz, 1024-sample Hann window, hop 256,
// 80 mel bands spanning 0..8000 Hz.
struct DspConfig {
  int target_rate = 16000;
  int win_size = 1024;
  int hop_size = 256;
  int n_mels = 80;
  double fmin = 0.0;
  double fmax = 8000.0;
  double log_floor = 1e-10;

  friend bool operator==(const DspConfig&, const DspConfig&) = default;
};

// Throws Errc::ConfigInvalid on the first violated constraint.
void validate(const DspConfig& cfg);

// Stable hex digest of every field; stored with trained models.
std::string fingerprint(const DspConfig& cfg);

struct MelSpectrogram {
  Eigen::MatrixXd values;  // n_mels x n_frames, natural-log energies
  double frame_rate = 0.0;
  double source_duration_s = 0.0;

  Eigen::Index n_mels() const { return values.rows(); }
  Eigen::Index n_frames() const { return values.cols(); }
};

template <typename Scalar>
Scalar hz_to_mel(Scalar hz) {
  using std::log10;
  return Scalar(2595) * log10(Scalar(1) + hz / Scalar(700));
}

template <typename Scalar>
Scalar mel_to_hz(Scalar mel) {
  using std::pow;
  return Scalar(700) * (pow(Scalar(10), mel / Scalar(2595)) - Scalar(1));
}

// n_mels + 2 edge frequencies, equally spaced on the mel scale; filter k
// rises from edge k to its peak at edge k+1 and falls to zero at edge k+2.
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> mel_edge_frequencies(const DspConfig& cfg) {
  validate(cfg);
  const Scalar lo = hz_to_mel(Scalar(cfg.fmin));
  const Scalar hi = hz_to_mel(Scalar(cfg.fmax));
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> edges(cfg.n_mels + 2);
  for (int i = 0; i < cfg.n_mels + 2; ++i) {
    edges[i] = mel_to_hz(lo + (hi - lo) * Scalar(i) / Scalar(cfg.n_mels + 1));
  }
  return edges;
}

template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> mel_center_frequencies(const DspConfig& cfg) {
  return mel_edge_frequencies<Scalar>(cfg).segment(1, cfg.n_mels);
}

// Triangular filterbank, n_mels x (n_fft/2 + 1), peak weight 1 at each
// center. Throws ConfigInvalid when n_fft != win_size or when a filter is too
// narrow to cover any FFT bin.
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> mel_filterbank(
    const DspConfig& cfg, int n_fft) {
  validate(cfg);
  if (n_fft != cfg.win_size) {
    throw Error(Errc::ConfigInvalid, "n_fft must equal win_size");
  }
  const auto edges = mel_edge_frequencies<Scalar>(cfg);
  const int n_bins = n_fft / 2 + 1;
  const Scalar bin_hz = Scalar(cfg.target_rate) / Scalar(n_fft);
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> fb =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(cfg.n_mels, n_bins);
  for (int k = 0; k < cfg.n_mels; ++k) {
    const Scalar left = edges[k], center = edges[k + 1], right = edges[k + 2];
    for (int j = 0; j < n_bins; ++j) {
      const Scalar f = bin_hz * Scalar(j);
      const Scalar up = (f - left) / (center - left);
      const Scalar down = (right - f) / (right - center);
      const Scalar w = std::min(up, down);
      if (w > Scalar(0)) fb(k, j) = w;
    }
    if (!(fb.row(k).maxCoeff() > Scalar(0))) {
      throw Error(Errc::ConfigInvalid,
                  "mel filter " + std::to_string(k) +
                      " covers no FFT bin; reduce n_mels or raise win_size");
    }
  }
  return fb;
}

// 1 + floor(len / hop): the frame count under center padding.
inline Eigen::Index frame_count(Eigen::Index n_samples, int hop_size) {
  return 1 + n_samples / hop_size;
}

// Center (reflect) padded framing, periodic Hann window, power spectrum, mel
// projection, natural log with floor. Requires clip.sample_rate ==
// cfg.target_rate (Errc::RateMismatch otherwise).
MelSpectrogram log_mel(const AudioClip& clip, const DspConfig& cfg);

}  // namespace speechagent::audio
