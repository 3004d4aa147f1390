#include "speechagent/bench/fixtures.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>

#include <json.hpp>

#include "speechagent/audio/wav.hpp"
#include "speechagent/backends/mock.hpp"
#include "speechagent/bench/corpus.hpp"
#include "speechagent/error.hpp"
#include "speechagent/refine/corrupt.hpp"

namespace speechagent::bench {

namespace {

constexpr int kRate = 16000;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::mt19937_64 rng_for(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

void add_noise(audio::AudioClip& clip, double amp, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-amp, amp);
  for (Eigen::Index i = 0; i < clip.samples.size(); ++i) clip.samples[i] += u(rng);
}

// Gated carrier: on-segments of random length in [on_lo, on_hi] seconds
// separated by silences in [off_lo, off_hi].
void gated_tone(audio::AudioClip& clip, double freq, double on_lo, double on_hi, double off_lo,
                double off_hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> on(on_lo, on_hi), off(off_lo, off_hi);
  const Eigen::Index n = clip.samples.size();
  const auto ramp = static_cast<Eigen::Index>(0.005 * kRate);
  Eigen::Index i = static_cast<Eigen::Index>(off(rng) * kRate * 0.5);
  while (i < n) {
    const Eigen::Index len = std::min(n - i, static_cast<Eigen::Index>(on(rng) * kRate));
    for (Eigen::Index k = 0; k < len; ++k) {
      const double env = std::min({1.0, static_cast<double>(k) / ramp, static_cast<double>(len - k) / ramp});
      clip.samples[i + k] += 0.5 * env * std::sin(kTwoPi * freq * static_cast<double>(i + k) / kRate);
    }
    i += len + static_cast<Eigen::Index>(off(rng) * kRate);
  }
}

}  // namespace

audio::AudioClip synth_impaired_clip(sir::ImpairmentClass cls, std::uint64_t seed, const FixtureSpec& spec) {
  if (cls == sir::ImpairmentClass::Healthy) {
    throw Error(Errc::HealthyClassInvalid, "healthy fixture clips come from the TTS");
  }
  auto rng = rng_for(seed, static_cast<std::uint64_t>(sir::index_of(cls)) + 1);
  std::uniform_real_distribution<double> dur(spec.min_seconds, spec.max_seconds);
  audio::AudioClip clip;
  clip.sample_rate = kRate;
  clip.samples = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dur(rng) * kRate));

  switch (cls) {
    case sir::ImpairmentClass::Dysarthria: {
      const double f0 = std::uniform_real_distribution<double>(80.0, 200.0)(rng);
      const double am = std::uniform_real_distribution<double>(1.5, 4.0)(rng);
      const double phase = std::uniform_real_distribution<double>(0.0, kTwoPi)(rng);
      for (Eigen::Index i = 0; i < clip.samples.size(); ++i) {
        const double t = static_cast<double>(i) / kRate;
        const double env = 0.55 + 0.45 * std::sin(kTwoPi * am * t + phase);
        clip.samples[i] = env * (0.45 * std::sin(kTwoPi * f0 * t) + 0.15 * std::sin(kTwoPi * 2.0 * f0 * t));
      }
      break;
    }
    case sir::ImpairmentClass::Stutter: {
      const double f = std::uniform_real_distribution<double>(3000.0, 3600.0)(rng);
      gated_tone(clip, f, 0.05, 0.10, 0.04, 0.08, rng);
      break;
    }
    case sir::ImpairmentClass::Aphasia: {
      const double f = std::uniform_real_distribution<double>(4200.0, 5200.0)(rng);
      gated_tone(clip, f, 0.20, 0.40, 0.20, 0.35, rng);
      break;
    }
    case sir::ImpairmentClass::Healthy:
      break;
  }
  add_noise(clip, spec.noise_amplitude, rng);
  return clip;
}

audio::AudioClip synth_healthy_clip(const std::string& text, std::uint64_t seed, const FixtureSpec& spec) {
  backends::BackendConfig cfg;
  cfg.seed = seed;
  backends::MockTts tts(cfg);
  auto clip = tts.synthesize(text);
  auto rng = rng_for(seed, 99);
  add_noise(clip, spec.noise_amplitude, rng);
  return clip;
}

std::vector<FixtureItem> make_fixture(const FixtureSpec& spec) {
  if (spec.per_class < 1) throw Error(Errc::InvalidArgument, "per_class must be positive");
  if (!(spec.min_seconds >= 0.2 && spec.min_seconds <= spec.max_seconds)) {
    throw Error(Errc::InvalidArgument, "clip length range must lie above 0.2 s");
  }
  const auto corpus = command_corpus();
  auto rng = rng_for(spec.seed, 0);
  std::uniform_int_distribution<std::size_t> pick(0, corpus.size() - 1);

  std::vector<FixtureItem> items;
  for (auto cls : sir::kAllClasses) {
    for (int k = 0; k < spec.per_class; ++k) {
      const std::uint64_t item_seed = rng();
      FixtureItem item;
      auto& e = item.entry;
      char id[64];
      std::snprintf(id, sizeof id, "%s-%03d", std::string(sir::to_string(cls)).c_str(), k);
      e.sample_id = id;
      e.class_label = cls;
      e.intent_text = std::string(corpus[pick(rng)]);
      if (cls == sir::ImpairmentClass::Healthy) {
        e.impaired_text = e.intent_text;
        item.clip = synth_healthy_clip(*e.intent_text, item_seed, spec);
      } else {
        e.impaired_text = refine::corrupt_text(*e.intent_text, cls, item_seed);
        item.clip = synth_impaired_clip(cls, item_seed, spec);
      }
      items.push_back(std::move(item));
    }
  }
  return items;
}

std::filesystem::path write_fixture(const std::filesystem::path& dir, const std::vector<FixtureItem>& items) {
  std::filesystem::create_directories(dir / "clips");
  nlohmann::json asr = nlohmann::json::object();
  std::vector<ManifestEntry> entries;
  for (const auto& item : items) {
    auto e = item.entry;
    e.audio_path = dir / "clips" / (e.sample_id + ".wav");
    audio::save_wav_file(*e.audio_path, item.clip);
    // Hash of what a reader decodes from disk, which is what the recognizer sees.
    if (e.impaired_text) asr[backends::content_hash(audio::load_wav_file(*e.audio_path))] = *e.impaired_text;
    entries.push_back(std::move(e));
  }
  const auto manifest = dir / "manifest.jsonl";
  save_manifest(manifest, entries);
  std::ofstream out(dir / "asr_fixtures.json", std::ios::trunc);
  out << asr.dump(2) << '\n';
  if (!out) throw Error(Errc::Io, "cannot write " + (dir / "asr_fixtures.json").string());
  return manifest;
}

}  // namespace speechagent::bench
