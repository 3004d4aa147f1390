#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "speechagent/audio/audio_clip.hpp"
#include "speechagent/bench/manifest.hpp"

namespace speechagent::bench {

// Offline stand-in for the pathological-speech corpora. Each class occupies
// its own spectral region so a small classifier can separate them:
//   dysarthria  80-200 Hz voiced tone under slow amplitude modulation
//   stutter     3.0-3.6 kHz short bursts separated by gaps
//   aphasia     4.2-5.2 kHz segments separated by long pauses
//   healthy     mock TTS of a corpus sentence (300-1500 Hz fundamentals)
// Every clip gets light white noise. Impaired entries carry a corpus
// sentence as intent and its seeded corruption as impaired text.
struct FixtureSpec {
  int per_class = 80;
  std::uint64_t seed = 0;
  double min_seconds = 1.0;  // impaired clip length range
  double max_seconds = 2.0;
  double noise_amplitude = 0.01;
};

struct FixtureItem {
  ManifestEntry entry;
  audio::AudioClip clip;
};

std::vector<FixtureItem> make_fixture(const FixtureSpec& spec);

// One synthetic impaired clip; deterministic in (cls, seed). HealthyClassInvalid
// for Healthy, whose clips come from the TTS.
audio::AudioClip synth_impaired_clip(sir::ImpairmentClass cls, std::uint64_t seed,
                                     const FixtureSpec& spec = {});

// Healthy clip: mock TTS (seeded) of `text` plus noise.
audio::AudioClip synth_healthy_clip(const std::string& text, std::uint64_t seed,
                                    const FixtureSpec& spec = {});

// Writes clips/<id>.wav, manifest.jsonl and asr_fixtures.json (content hash
// -> impaired text, for the mock recognizer). Returns the manifest path.
std::filesystem::path write_fixture(const std::filesystem::path& dir, const std::vector<FixtureItem>& items);

}  // namespace speechagent::bench
