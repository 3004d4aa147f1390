#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "speechagent/audio/audio_clip.hpp"

namespace speechagent::audio {

// Decodes a RIFF/WAVE container holding 16-bit little-endian mono PCM.
// Unknown chunks (LIST, fact, ...) are skipped. Samples are scaled by 1/32768.
//
// Errors: MalformedContainer for bad magic or truncated/missing chunks,
// UnsupportedFormat for anything other than PCM16 mono, EmptyAudio when the
// data chunk holds no samples.
AudioClip load_wav(std::span<const std::uint8_t> bytes);
AudioClip load_wav_file(const std::filesystem::path& path);

// Canonical 44-byte header followed by the samples quantized with
// round(x * 32768) clamped to the int16 range.
std::vector<std::uint8_t> encode_wav(const AudioClip& clip);
void save_wav_file(const std::filesystem::path& path, const AudioClip& clip);

}  // namespace speechagent::audio
