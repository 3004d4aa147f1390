#include "speechagent/audio/resample.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "speechagent/error.hpp"

namespace speechagent::audio {

namespace {

constexpr int kTableResolution = 512;  // entries per zero crossing

double sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

// Windowed sinc tabulated over [0, half_taps] zero crossings.
std::vector<double> kernel_table(const ResamplerParams& p) {
  const int n = p.half_taps * kTableResolution + 2;
  const double i0_beta = std::cyl_bessel_i(0.0, p.kaiser_beta);
  std::vector<double> table(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) / kTableResolution;
    const double u = x / p.half_taps;
    if (u >= 1.0) break;
    table[static_cast<std::size_t>(i)] =
        sinc(x) *
        std::cyl_bessel_i(0.0, p.kaiser_beta * std::sqrt(1.0 - u * u)) / i0_beta;
  }
  return table;
}

double lookup(const std::vector<double>& table, double x) {
  const double pos = std::abs(x) * kTableResolution;
  const auto i = static_cast<std::size_t>(pos);
  if (i + 1 >= table.size()) return 0.0;
  const double frac = pos - static_cast<double>(i);
  return table[i] + frac * (table[i + 1] - table[i]);
}

}  // namespace

AudioClip resample(const AudioClip& clip, int target_rate,
                   const ResamplerParams& params) {
  if (clip.empty()) throw Error(Errc::EmptyAudio, "cannot resample an empty clip");
  if (target_rate <= 0) {
    throw Error(Errc::InvalidArgument, "target rate must be positive");
  }
  if (params.half_taps < 1) {
    throw Error(Errc::InvalidArgument, "resampler needs at least one tap");
  }
  validate(clip);
  if (clip.sample_rate == target_rate) return clip;

  const double ratio = static_cast<double>(target_rate) / clip.sample_rate;
  const double cutoff = std::min(1.0, ratio);
  const double half_width = params.half_taps / cutoff;
  const auto table = kernel_table(params);

  const auto in_len = clip.samples.size();
  const auto out_len = static_cast<Eigen::Index>(
      std::llround(static_cast<double>(in_len) * ratio));

  AudioClip out;
  out.sample_rate = target_rate;
  out.samples = Eigen::VectorXd::Zero(out_len);
  for (Eigen::Index n = 0; n < out_len; ++n) {
    const double t = static_cast<double>(n) * clip.sample_rate / target_rate;
    const auto first = std::max<Eigen::Index>(
        0, static_cast<Eigen::Index>(std::ceil(t - half_width)));
    const auto last = std::min<Eigen::Index>(
        in_len - 1, static_cast<Eigen::Index>(std::floor(t + half_width)));
    double acc = 0.0;
    for (Eigen::Index k = first; k <= last; ++k) {
      acc += clip.samples[k] * lookup(table, cutoff * (t - static_cast<double>(k)));
    }
    out.samples[n] = cutoff * acc;
  }
  return out;
}

}  // namespace speechagent::audio
