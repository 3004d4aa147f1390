#include "speechagent/audio/mel.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <map>
#include <mutex>
#include <numbers>
#include <vector>

#include <fftw3.h>
#include <openssl/sha.h>

namespace speechagent::audio {

namespace {

// Mirror index into [0, n) without repeating the edge sample; wraps for pads
// longer than the clip.
Eigen::Index reflect_index(Eigen::Index i, Eigen::Index n) {
  if (n == 1) return 0;
  const Eigen::Index period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

template <typename T>
struct FftwBuffer {
  explicit FftwBuffer(std::size_t n) : data(static_cast<T*>(fftw_malloc(sizeof(T) * n))) {
    if (!data) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  T* data;
};

// Real-to-half-complex plan per transform size, for fftw_malloc-aligned
// arrays. FFTW's planner is not thread-safe, so plans are made once under a
// lock; executing a plan on other arrays of the same alignment is.
fftw_plan r2c_plan(int n) {
  static std::mutex mu;
  static std::map<int, fftw_plan> plans;
  std::lock_guard lock(mu);
  auto it = plans.find(n);
  if (it == plans.end()) {
    FftwBuffer<double> in(static_cast<std::size_t>(n));
    FftwBuffer<fftw_complex> out(static_cast<std::size_t>(n / 2 + 1));
    const fftw_plan p = fftw_plan_dft_r2c_1d(n, in.data, out.data, FFTW_ESTIMATE);
    if (!p) throw Error(Errc::ConfigInvalid, "cannot plan a " + std::to_string(n) + "-point transform");
    it = plans.emplace(n, p).first;
  }
  return it->second;
}

}  // namespace

void validate(const DspConfig& cfg) {
  auto fail = [](const std::string& msg) { throw Error(Errc::ConfigInvalid, msg); };
  if (cfg.target_rate <= 0) fail("target_rate must be positive");
  if (cfg.win_size < 2) fail("win_size must be at least 2");
  if (cfg.hop_size < 1) fail("hop_size must be positive");
  if (cfg.hop_size > cfg.win_size) fail("hop_size must not exceed win_size");
  if (cfg.n_mels < 1) fail("n_mels must be at least 1");
  if (!(cfg.fmin >= 0.0)) fail("fmin must be non-negative");
  if (!(cfg.fmin < cfg.fmax)) fail("fmin must be below fmax");
  if (cfg.fmax > cfg.target_rate / 2.0) fail("fmax exceeds Nyquist");
  if (!(cfg.log_floor > 0.0)) fail("log_floor must be positive");
}

std::string fingerprint(const DspConfig& cfg) {
  char canon[256];
  std::snprintf(canon, sizeof canon,
                "rate=%d;win=%d;hop=%d;mels=%d;fmin=%.17g;fmax=%.17g;floor=%.17g",
                cfg.target_rate, cfg.win_size, cfg.hop_size, cfg.n_mels, cfg.fmin,
                cfg.fmax, cfg.log_floor);
  unsigned char digest[SHA256_DIGEST_LENGTH];
  const std::string s(canon);
  SHA256(reinterpret_cast<const unsigned char*>(s.data()), s.size(), digest);
  std::string hex;
  char buf[3];
  for (int i = 0; i < 8; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

MelSpectrogram log_mel(const AudioClip& clip, const DspConfig& cfg) {
  validate(cfg);
  if (clip.empty()) throw Error(Errc::EmptyAudio, "log_mel needs at least one sample");
  if (clip.sample_rate != cfg.target_rate) {
    throw Error(Errc::RateMismatch, "clip is at " + std::to_string(clip.sample_rate) +
                                        " Hz, front end expects " +
                                        std::to_string(cfg.target_rate) + " Hz");
  }

  const Eigen::Index len = clip.samples.size();
  const int win = cfg.win_size;
  const Eigen::Index pad_left = win / 2;
  const Eigen::Index n_frames = frame_count(len, cfg.hop_size);
  const int n_bins = win / 2 + 1;

  const auto fb = mel_filterbank<double>(cfg, win);
  // Each triangle touches a short run of bins; project over that run only.
  struct Support {
    int first;
    Eigen::VectorXd weights;
  };
  std::vector<Support> support(static_cast<std::size_t>(cfg.n_mels));
  for (int m = 0; m < cfg.n_mels; ++m) {
    int lo = 0, hi = n_bins - 1;
    while (fb(m, lo) == 0.0) ++lo;
    while (fb(m, hi) == 0.0) --hi;
    support[static_cast<std::size_t>(m)] = {lo, fb.row(m).segment(lo, hi - lo + 1).transpose()};
  }
  Eigen::VectorXd window(win);
  for (int n = 0; n < win; ++n) {
    window[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n / win);
  }

  const fftw_plan plan = r2c_plan(win);
  FftwBuffer<double> frame_buf(static_cast<std::size_t>(win));
  FftwBuffer<fftw_complex> spectrum_buf(static_cast<std::size_t>(n_bins));
  double* frame = frame_buf.data;
  fftw_complex* spectrum = spectrum_buf.data;
  Eigen::VectorXd power(n_bins);
  Eigen::MatrixXd projected(cfg.n_mels, n_frames);

  for (Eigen::Index t = 0; t < n_frames; ++t) {
    const Eigen::Index start = t * cfg.hop_size - pad_left;
    if (start >= 0 && start + win <= len) {
      for (int n = 0; n < win; ++n) frame[n] = clip.samples[start + n] * window[n];
    } else {
      for (int n = 0; n < win; ++n) {
        frame[n] = clip.samples[reflect_index(start + n, len)] * window[n];
      }
    }
    fftw_execute_dft_r2c(plan, frame, spectrum);
    for (int k = 0; k < n_bins; ++k) {
      const auto& c = spectrum[k];
      power[k] = c[0] * c[0] + c[1] * c[1];
    }
    for (int m = 0; m < cfg.n_mels; ++m) {
      const auto& sup = support[static_cast<std::size_t>(m)];
      projected(m, t) = sup.weights.dot(power.segment(sup.first, sup.weights.size()));
    }
  }

  MelSpectrogram mel;
  mel.values = projected.cwiseMax(cfg.log_floor).unaryExpr([](double e) { return std::log(e); });
  mel.frame_rate = static_cast<double>(cfg.target_rate) / cfg.hop_size;
  mel.source_duration_s = clip.duration_s();
  return mel;
}

}  // namespace speechagent::audio
