#include <array>
#include <random>

#include "doctest.h"
#include "speechagent/audio/resample.hpp"
#include "speechagent/error.hpp"
#include "unit/test_support.hpp"

using namespace speechagent;
using namespace speechagent::audio;

TEST_CASE("equal rates return the clip unchanged") {
  const auto clip = testsupport::noise(777, 16000, 1);
  const auto out = resample(clip, 16000);
  CHECK(out.sample_rate == 16000);
  CHECK(out.samples == clip.samples);
}

TEST_CASE("output length is round(len * dst / src)") {
  CHECK(resample(testsupport::sine(200, 1.0, 8000), 16000).samples.size() == 16000);
  CHECK(resample(testsupport::noise(1001, 44100, 2), 16000).samples.size() ==
        std::llround(1001.0 * 16000 / 44100));
  CHECK(resample(testsupport::noise(3, 16000, 2), 8000).samples.size() == 2);
}

TEST_CASE("440 Hz tone keeps its FFT peak when going 48 kHz -> 16 kHz") {
  const auto src = testsupport::sine(440.0, 1.0, 48000);
  const auto dst = resample(src, 16000);
  const auto p_src = testsupport::fft_peak(src);
  const auto p_dst = testsupport::fft_peak(dst);
  CHECK(std::abs(p_src.hz - 440.0) <= p_src.bin_hz);
  CHECK(std::abs(p_dst.hz - 440.0) <= p_dst.bin_hz);
}

TEST_CASE("property: dominant frequency survives random rate conversions") {
  const std::array<int, 6> rates = {8000, 11025, 16000, 22050, 44100, 48000};
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<std::size_t> pick(0, rates.size() - 1);
  std::uniform_real_distribution<double> frac(0.02, 0.4);
  for (int trial = 0; trial < 25; ++trial) {
    const int src = rates[pick(rng)];
    const int dst = rates[pick(rng)];
    const double f = std::round(frac(rng) * std::min(src, dst));
    const auto in = testsupport::sine(f, 1.0, src);
    const auto out = resample(in, dst);
    const auto p_in = testsupport::fft_peak(in);
    const auto p_out = testsupport::fft_peak(out);
    INFO("src=" << src << " dst=" << dst << " f=" << f);
    CHECK(std::abs(p_out.hz - p_in.hz) <= p_out.bin_hz + 1e-9);
  }
}

TEST_CASE("passband amplitude is preserved away from the edges") {
  const auto out = resample(testsupport::sine(300.0, 1.0, 44100, 0.5), 16000);
  const auto mid = out.samples.segment(2000, 12000);
  const double rms = std::sqrt(mid.squaredNorm() / static_cast<double>(mid.size()));
  CHECK(rms == doctest::Approx(0.5 / std::sqrt(2.0)).epsilon(0.01));
}

TEST_CASE("resample preconditions") {
  CHECK_THROWS_AS(resample(AudioClip{Eigen::VectorXd(), 16000}, 8000), Error);
  CHECK_THROWS_AS(resample(testsupport::noise(10, 16000, 1), 0), Error);
}
