#include "speechagent/audio/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "speechagent/error.hpp"

namespace speechagent::audio {

namespace {

constexpr std::uint16_t kFormatPcm = 1;

std::uint32_t read_u32(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) |
         (static_cast<std::uint32_t>(b[at + 1]) << 8) |
         (static_cast<std::uint32_t>(b[at + 2]) << 16) |
         (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

std::uint16_t read_u16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

bool has_tag(std::span<const std::uint8_t> b, std::size_t at, const char* tag) {
  return std::memcmp(b.data() + at, tag, 4) == 0;
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

}  // namespace

void validate(const AudioClip& clip) {
  if (clip.sample_rate <= 0) {
    throw Error(Errc::InvalidArgument, "sample rate must be positive");
  }
  if (!clip.samples.allFinite()) {
    throw Error(Errc::InvalidArgument, "audio contains non-finite samples");
  }
}

AudioClip load_wav(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12 || !has_tag(bytes, 0, "RIFF") ||
      !has_tag(bytes, 8, "WAVE")) {
    throw Error(Errc::MalformedContainer, "missing RIFF/WAVE header");
  }

  bool have_fmt = false;
  std::uint16_t channels = 0;
  std::uint16_t bits = 0;
  std::uint32_t rate = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint32_t chunk_size = read_u32(bytes, pos + 4);
    const std::size_t body = pos + 8;
    if (chunk_size > bytes.size() - body) {
      throw Error(Errc::MalformedContainer, "chunk extends past end of file");
    }
    if (has_tag(bytes, pos, "fmt ")) {
      if (chunk_size < 16) {
        throw Error(Errc::MalformedContainer, "fmt chunk too short");
      }
      const std::uint16_t format = read_u16(bytes, body);
      channels = read_u16(bytes, body + 2);
      rate = read_u32(bytes, body + 4);
      bits = read_u16(bytes, body + 14);
      if (format != kFormatPcm) {
        throw Error(Errc::UnsupportedFormat,
                    "format tag " + std::to_string(format) + " is not PCM");
      }
      if (bits != 16) {
        throw Error(Errc::UnsupportedFormat,
                    std::to_string(bits) + "-bit samples; only 16-bit supported");
      }
      if (channels != 1) {
        throw Error(Errc::UnsupportedFormat,
                    std::to_string(channels) + " channels; only mono supported");
      }
      if (rate == 0) {
        throw Error(Errc::MalformedContainer, "sample rate is zero");
      }
      have_fmt = true;
    } else if (has_tag(bytes, pos, "data")) {
      if (!have_fmt) {
        throw Error(Errc::MalformedContainer, "data chunk before fmt chunk");
      }
      const std::size_t n = chunk_size / 2;
      if (n == 0) throw Error(Errc::EmptyAudio, "data chunk holds no samples");
      AudioClip clip;
      clip.sample_rate = static_cast<int>(rate);
      clip.samples.resize(static_cast<Eigen::Index>(n));
      for (std::size_t i = 0; i < n; ++i) {
        const auto v = static_cast<std::int16_t>(read_u16(bytes, body + 2 * i));
        clip.samples[static_cast<Eigen::Index>(i)] = v / 32768.0;
      }
      return clip;
    }
    // Chunks are word aligned.
    pos = body + chunk_size + (chunk_size & 1u);
  }
  throw Error(Errc::MalformedContainer,
              have_fmt ? "missing data chunk" : "missing fmt chunk");
}

AudioClip load_wav_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return load_wav(bytes);
}

std::vector<std::uint8_t> encode_wav(const AudioClip& clip) {
  validate(clip);
  const auto n = static_cast<std::uint32_t>(clip.samples.size());
  const std::uint32_t data_bytes = n * 2;
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, kFormatPcm);
  put_u16(out, 1);
  put_u32(out, static_cast<std::uint32_t>(clip.sample_rate));
  put_u32(out, static_cast<std::uint32_t>(clip.sample_rate) * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  put_tag(out, "data");
  put_u32(out, data_bytes);
  for (Eigen::Index i = 0; i < clip.samples.size(); ++i) {
    const double q = std::clamp(std::round(clip.samples[i] * 32768.0), -32768.0, 32767.0);
    put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
  }
  return out;
}

void save_wav_file(const std::filesystem::path& path, const AudioClip& clip) {
  const auto bytes = encode_wav(clip);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::Io, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

}  // namespace speechagent::audio
