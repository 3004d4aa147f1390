#include <cstring>

#include "doctest.h"
#include "speechagent/audio/wav.hpp"
#include "speechagent/error.hpp"
#include "unit/test_support.hpp"

using namespace speechagent;
using namespace speechagent::audio;

namespace {

std::vector<std::uint8_t> make_wav(std::uint16_t format, std::uint16_t channels,
                                   std::uint16_t bits, std::uint32_t rate,
                                   const std::vector<std::int16_t>& samples) {
  AudioClip clip;
  clip.sample_rate = static_cast<int>(rate);
  clip.samples = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(samples.size()));
  auto bytes = encode_wav(clip.samples.size() ? clip : AudioClip{Eigen::VectorXd::Zero(1), 16000});
  if (samples.empty()) {
    bytes.resize(44);
    bytes[40] = bytes[41] = bytes[42] = bytes[43] = 0;
  } else {
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const auto v = static_cast<std::uint16_t>(samples[i]);
      bytes[44 + 2 * i] = static_cast<std::uint8_t>(v);
      bytes[45 + 2 * i] = static_cast<std::uint8_t>(v >> 8);
    }
  }
  bytes[20] = static_cast<std::uint8_t>(format);
  bytes[22] = static_cast<std::uint8_t>(channels);
  bytes[24] = static_cast<std::uint8_t>(rate);
  bytes[25] = static_cast<std::uint8_t>(rate >> 8);
  bytes[26] = static_cast<std::uint8_t>(rate >> 16);
  bytes[34] = static_cast<std::uint8_t>(bits);
  return bytes;
}

Errc code_of(const std::vector<std::uint8_t>& bytes) {
  try {
    load_wav(bytes);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected load_wav to throw");
  return Errc::Io;
}

}  // namespace

TEST_CASE("zero PCM16 file decodes to zeros at the header rate") {
  const auto clip = load_wav(make_wav(1, 1, 16, 16000, std::vector<std::int16_t>(16, 0)));
  CHECK(clip.sample_rate == 16000);
  CHECK(clip.samples.size() == 16);
  CHECK(clip.samples.isZero(0.0));
}

TEST_CASE("full-scale sample maps to 32767/32768") {
  const auto clip = load_wav(make_wav(1, 1, 16, 8000, {32767, -32768}));
  CHECK(clip.samples[0] == 32767.0 / 32768.0);
  CHECK(clip.samples[1] == -1.0);
}

TEST_CASE("sine encode/decode round trip stays within one quantization step") {
  const auto clip = testsupport::sine(440.0, 1.0, 16000, 0.9);
  const auto back = load_wav(encode_wav(clip));
  REQUIRE(back.samples.size() == clip.samples.size());
  CHECK(back.sample_rate == 16000);
  CHECK((back.samples - clip.samples).cwiseAbs().maxCoeff() <= 1.0 / 32768.0);
}

TEST_CASE("writer emits the canonical 44-byte header") {
  AudioClip clip{Eigen::VectorXd::Constant(3, 0.5), 22050};
  const auto b = encode_wav(clip);
  REQUIRE(b.size() == 44 + 6);
  CHECK(std::memcmp(b.data(), "RIFF", 4) == 0);
  CHECK(b[4] == 42);  // 36 + 6
  CHECK(std::memcmp(b.data() + 8, "WAVEfmt ", 8) == 0);
  CHECK(b[16] == 16);
  CHECK(b[20] == 1);
  CHECK(b[22] == 1);
  CHECK((b[24] | (b[25] << 8)) == 22050);
  CHECK((b[28] | (b[29] << 8) | (b[30] << 16)) == 44100);
  CHECK(b[32] == 2);
  CHECK(b[34] == 16);
  CHECK(std::memcmp(b.data() + 36, "data", 4) == 0);
  CHECK(b[40] == 6);
  CHECK((b[44] | (b[45] << 8)) == 16384);
}

TEST_CASE("re-encoding a decoded file is bit exact") {
  const auto first = encode_wav(testsupport::noise(1000, 16000, 3));
  CHECK(encode_wav(load_wav(first)) == first);
}

TEST_CASE("unknown chunks before data are skipped") {
  auto b = encode_wav(AudioClip{Eigen::VectorXd::Constant(4, 0.25), 16000});
  const std::vector<std::uint8_t> list = {'L', 'I', 'S', 'T', 3, 0, 0, 0, 'a', 'b', 'c', 0};
  b.insert(b.begin() + 36, list.begin(), list.end());
  const auto clip = load_wav(b);
  CHECK(clip.samples.size() == 4);
  CHECK(clip.samples[0] == 0.25);
}

TEST_CASE("malformed and unsupported containers are rejected") {
  CHECK(code_of({'R', 'I', 'F'}) == Errc::MalformedContainer);
  auto bad_magic = make_wav(1, 1, 16, 16000, {1, 2});
  bad_magic[8] = 'X';
  CHECK(code_of(bad_magic) == Errc::MalformedContainer);
  auto truncated = make_wav(1, 1, 16, 16000, {1, 2, 3, 4});
  truncated.resize(truncated.size() - 3);
  CHECK(code_of(truncated) == Errc::MalformedContainer);
  auto no_data = make_wav(1, 1, 16, 16000, {1});
  no_data.resize(36);
  CHECK(code_of(no_data) == Errc::MalformedContainer);

  CHECK(code_of(make_wav(3, 1, 16, 16000, {1})) == Errc::UnsupportedFormat);
  CHECK(code_of(make_wav(1, 2, 16, 16000, {1, 1})) == Errc::UnsupportedFormat);
  CHECK(code_of(make_wav(1, 1, 8, 16000, {1})) == Errc::UnsupportedFormat);
  CHECK(code_of(make_wav(1, 1, 16, 16000, {})) == Errc::EmptyAudio);
}

TEST_CASE("encode rejects clips without a valid rate") {
  CHECK_THROWS_AS(encode_wav(AudioClip{Eigen::VectorXd::Zero(2), 0}), Error);
}
