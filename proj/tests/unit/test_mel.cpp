#include <random>

#include "doctest.h"
#include "speechagent/audio/mel.hpp"
#include "unit/test_support.hpp"

using namespace speechagent;
using namespace speechagent::audio;

namespace {

// Mel-scale edges computed without the library helpers.
std::vector<double> oracle_edges(int n_mels, double fmin, double fmax) {
  auto to_mel = [](double f) { return 2595.0 * std::log10(1.0 + f / 700.0); };
  auto to_hz = [](double m) { return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0); };
  std::vector<double> e;
  for (int i = 0; i < n_mels + 2; ++i) {
    e.push_back(to_hz(to_mel(fmin) + (to_mel(fmax) - to_mel(fmin)) * i / (n_mels + 1)));
  }
  return e;
}

DspConfig small_cfg() {
  DspConfig c;
  c.win_size = 64;
  c.hop_size = 16;
  c.n_mels = 8;
  return c;
}

}  // namespace

TEST_CASE("one second at 16 kHz with hop 256 gives 63 frames") {
  const DspConfig cfg;
  const auto mel = log_mel(testsupport::noise(16000, 16000, 7), cfg);
  CHECK(mel.n_frames() == 63);
  CHECK(mel.n_mels() == 80);
  CHECK(mel.frame_rate == doctest::Approx(62.5));
  CHECK(mel.source_duration_s == doctest::Approx(1.0));
}

TEST_CASE("property: frame count is 1 + floor(len / hop)") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> len_dist(1, 4000);
  for (int trial = 0; trial < 60; ++trial) {
    DspConfig cfg = small_cfg();
    cfg.hop_size = std::uniform_int_distribution<int>(1, cfg.win_size)(rng);
    const int len = len_dist(rng);
    const auto mel = log_mel(testsupport::noise(len, cfg.target_rate, trial), cfg);
    INFO("len=" << len << " hop=" << cfg.hop_size);
    CHECK(mel.n_frames() == 1 + len / cfg.hop_size);
    CHECK(mel.values.allFinite());
  }
}

TEST_CASE("clips shorter than half a window still frame correctly") {
  DspConfig cfg;
  for (int len : {1, 2, 100, 511, 512, 513}) {
    const auto mel = log_mel(testsupport::noise(len, 16000, static_cast<std::uint64_t>(len)), cfg);
    CHECK(mel.n_frames() == 1 + len / 256);
    CHECK(mel.values.allFinite());
  }
}

TEST_CASE("silence maps every cell to log(log_floor)") {
  const DspConfig cfg;
  AudioClip clip{Eigen::VectorXd::Zero(4000), 16000};
  const auto mel = log_mel(clip, cfg);
  CHECK((mel.values.array() == std::log(cfg.log_floor)).all());
}

TEST_CASE("values never drop below log(log_floor)") {
  const DspConfig cfg;
  const auto mel = log_mel(testsupport::noise(8000, 16000, 5, 1e-7), cfg);
  CHECK(mel.values.minCoeff() >= std::log(cfg.log_floor));
}

TEST_CASE("1 kHz tone peaks in the band the filterbank construction predicts") {
  const DspConfig cfg;
  const auto edges = oracle_edges(cfg.n_mels, cfg.fmin, cfg.fmax);
  int expected = 0;
  double best = -1.0;
  for (int k = 0; k < cfg.n_mels; ++k) {
    const double w = std::max(0.0, std::min((1000.0 - edges[k]) / (edges[k + 1] - edges[k]),
                                            (edges[k + 2] - 1000.0) / (edges[k + 2] - edges[k + 1])));
    if (w > best) {
      best = w;
      expected = k;
    }
  }
  CHECK(expected == 28);

  const auto mel = log_mel(testsupport::sine(1000.0, 1.0, 16000), cfg);
  int hits = 0;
  for (Eigen::Index t = 0; t < mel.n_frames(); ++t) {
    Eigen::Index arg = 0;
    mel.values.col(t).maxCoeff(&arg);
    if (arg == expected) ++hits;
  }
  CHECK(hits >= static_cast<int>(std::ceil(0.95 * static_cast<double>(mel.n_frames()))));
}

TEST_CASE("filterbank rows are non-degenerate and centers increase") {
  const DspConfig cfg;
  const auto fb = mel_filterbank(cfg, cfg.win_size);
  CHECK(fb.rows() == 80);
  CHECK(fb.cols() == 513);
  CHECK(fb.minCoeff() >= 0.0);
  for (Eigen::Index k = 0; k < fb.rows(); ++k) CHECK(fb.row(k).maxCoeff() > 0.0);
  const auto centers = mel_center_frequencies(cfg);
  for (Eigen::Index k = 1; k < centers.size(); ++k) CHECK(centers[k] > centers[k - 1]);
}

TEST_CASE("filter centers match an independent mel-scale computation") {
  DspConfig cfg;
  cfg.n_mels = 80;
  cfg.fmin = 0.0;
  cfg.fmax = 8000.0;
  const auto centers = mel_center_frequencies(cfg);
  const auto edges = oracle_edges(80, 0.0, 8000.0);
  for (int k = 0; k < 80; ++k) CHECK(std::abs(centers[k] - edges[k + 1]) <= 1e-6);
  // Frozen from a numpy script.
  CHECK(std::abs(centers[0] - 22.120065726919712) <= 1e-6);
  CHECK(std::abs(centers[39] - 1729.7017126907115) <= 1e-6);
  CHECK(std::abs(centers[79] - 7733.50058950311) <= 1e-6);
}

TEST_CASE("filter supports only overlap their neighbours") {
  const DspConfig cfg;
  const auto fb = mel_filterbank(cfg, cfg.win_size);
  for (Eigen::Index j = 0; j < fb.cols(); ++j) {
    std::vector<Eigen::Index> active;
    for (Eigen::Index k = 0; k < fb.rows(); ++k) {
      if (fb(k, j) > 0.0) active.push_back(k);
    }
    CHECK(active.size() <= 2);
    if (active.size() == 2) CHECK(active[1] == active[0] + 1);
  }
}

TEST_CASE("log_mel is bitwise deterministic") {
  const DspConfig cfg;
  const auto clip = testsupport::noise(12345, 16000, 9);
  CHECK(log_mel(clip, cfg).values == log_mel(clip, cfg).values);
}

TEST_CASE("property: amplifying a clip never lowers any cell") {
  const DspConfig cfg;
  std::mt19937_64 rng(3);
  for (double gain : {1.1, 2.0, 10.0}) {
    const auto clip = testsupport::noise(6000, 16000, rng());
    AudioClip louder = clip;
    louder.samples *= gain;
    const auto a = log_mel(clip, cfg).values;
    const auto b = log_mel(louder, cfg).values;
    CHECK((b.array() >= a.array()).all());
  }
}

TEST_CASE("invalid configurations and rate mismatches are rejected") {
  auto code = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::Io;
  };
  const auto clip = testsupport::noise(2000, 16000, 1);
  DspConfig c;
  c.hop_size = 2048;
  CHECK(code([&] { log_mel(clip, c); }) == Errc::ConfigInvalid);
  c = DspConfig{};
  c.fmax = 9000;
  CHECK(code([&] { log_mel(clip, c); }) == Errc::ConfigInvalid);
  c = DspConfig{};
  c.n_mels = 0;
  CHECK(code([&] { log_mel(clip, c); }) == Errc::ConfigInvalid);
  c = DspConfig{};
  c.log_floor = 0.0;
  CHECK(code([&] { log_mel(clip, c); }) == Errc::ConfigInvalid);
  c = DspConfig{};
  c.n_mels = 400;
  CHECK(code([&] { mel_filterbank(c, c.win_size); }) == Errc::ConfigInvalid);
  CHECK(code([&] { mel_filterbank(DspConfig{}, 512); }) == Errc::ConfigInvalid);
  CHECK(code([&] { log_mel(testsupport::noise(2000, 8000, 1), DspConfig{}); }) ==
        Errc::RateMismatch);
}

TEST_CASE("fingerprint changes with any field") {
  const DspConfig base;
  DspConfig other = base;
  other.n_mels = 64;
  CHECK(fingerprint(base) == fingerprint(DspConfig{}));
  CHECK(fingerprint(base) != fingerprint(other));
}
