#include "speechagent/backends/mock.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <thread>

#include <json.hpp>
#include <openssl/sha.h>

#include "speechagent/audio/wav.hpp"
#include "speechagent/error.hpp"
#include "speechagent/refine/rule_refiner.hpp"

namespace speechagent::backends {

namespace {

using Clock = std::chrono::steady_clock;

void artificial_delay(double seconds) {
  if (seconds > 0.0) std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::array<unsigned char, SHA256_DIGEST_LENGTH> sha256(const std::vector<std::uint8_t>& bytes) {
  std::array<unsigned char, SHA256_DIGEST_LENGTH> d{};
  SHA256(bytes.data(), bytes.size(), d.data());
  return d;
}

constexpr std::array<std::string_view, 32> kVocab = {
    "play",  "some",   "music", "set",    "a",      "timer", "for",    "ten",
    "call",  "my",     "mom",   "turn",   "on",     "the",   "lights", "what",
    "is",    "weather", "today", "book",  "table",  "at",    "seven",  "add",
    "milk",  "to",     "list",  "open",   "door",   "read",  "news",   "please"};

std::map<std::string, std::string> load_fixtures(const std::string& path) {
  std::map<std::string, std::string> out;
  if (path.empty()) return out;
  std::ifstream in(path);
  if (!in) throw Error(Errc::ConfigInvalid, "cannot read ASR fixtures " + path);
  nlohmann::json j;
  try {
    in >> j;
    for (const auto& [k, v] : j.items()) out[k] = v.get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ConfigInvalid, "ASR fixtures " + path + ": " + e.what());
  }
  return out;
}

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); });
  return out;
}

std::size_t count_codepoints(std::string_view s) {
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) {
    return (static_cast<unsigned char>(c) & 0xC0) != 0x80;
  }));
}

// Locates the template's input slot: the first line starting with "Input:"
// (the template has exactly one, and user text comes after it) up to the last
// "Output:" line.
std::string_view extract_input(std::string_view prompt) {
  std::size_t start = std::string_view::npos;
  if (prompt.starts_with("Input:")) {
    start = 0;
  } else if (const auto p = prompt.find("\nInput:"); p != std::string_view::npos) {
    start = p + 1;
  }
  if (start == std::string_view::npos) return prompt;
  std::string_view rest = prompt.substr(start + 6);
  if (const auto end = rest.rfind("\nOutput:"); end != std::string_view::npos) {
    rest = rest.substr(0, end);
  }
  return rest;
}

}  // namespace

std::string content_hash(const audio::AudioClip& clip) {
  const auto digest = sha256(audio::encode_wav(clip));
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned char b : digest) {
    hex += kHex[b >> 4];
    hex += kHex[b & 15];
  }
  return hex;
}

MockAsr::MockAsr(BackendConfig cfg, std::map<std::string, std::string> fixtures)
    : cfg_(std::move(cfg)), fixtures_(std::move(fixtures)) {
  for (auto& [k, v] : load_fixtures(cfg_.fixtures_path)) fixtures_.emplace(k, v);
}

Transcript MockAsr::transcribe(const audio::AudioClip& clip, const RequestContext& ctx) {
  const auto t0 = Clock::now();
  audio::validate(clip);
  Transcript out;
  out.backend_id = id();
  if (ctx.sidecar_transcript) {
    out.text = *ctx.sidecar_transcript;
  } else {
    auto bytes = audio::encode_wav(clip);
    const std::string key = content_hash(clip);
    if (const auto it = fixtures_.find(key); it != fixtures_.end()) {
      out.text = it->second;
    } else if (cfg_.strict_fixtures) {
      throw Error(Errc::MockFixtureMissing, "no transcript fixture for clip " + key);
    } else {
      for (int i = 0; i < 8; ++i) bytes.push_back(static_cast<std::uint8_t>(cfg_.seed >> (8 * i)));
      const auto d = sha256(bytes);
      const int n_words = 3 + d[0] % 4;
      for (int i = 0; i < n_words; ++i) {
        if (i > 0) out.text += ' ';
        const std::string_view w = kVocab[d[static_cast<std::size_t>(1 + i)] % kVocab.size()];
        // Odd digests open with a stuttered onset.
        if (i == 0 && (d[7] & 1) && std::isalpha(static_cast<unsigned char>(w[0]))) {
          out.text += std::string(1, w[0]) + "-" + std::string(1, w[0]) + "-";
        }
        out.text += w;
      }
    }
  }
  out.silence = out.text.empty();
  artificial_delay(cfg_.mock_latency_s);
  out.latency_s = seconds_since(t0);
  return out;
}

std::string MockLlm::complete(const std::string& prompt, const CompletionParams&) {
  if (prompt.empty()) throw Error(Errc::InvalidArgument, "empty prompt");
  const std::string_view input = extract_input(prompt);
  std::string result;
  if (!refine::split_words(input).empty()) result = refine::rule_refine(input);
  artificial_delay(cfg_.mock_latency_s);
  if (result.empty()) throw Error(Errc::EmptyCompletion, "mock refiner produced no text");
  return result;
}

double MockTts::duration_for(std::string_view text) {
  const double raw = kMockTtsSecondsPerChar * static_cast<double>(count_codepoints(text));
  return std::clamp(raw, kMockTtsMinSeconds, kMockTtsMaxSeconds);
}

audio::AudioClip MockTts::synthesize(const std::string& text, const StyleSpec&) {
  const auto words = refine::split_words(text);
  if (words.empty()) throw Error(Errc::EmptyInput, "nothing to synthesize");

  const auto n = static_cast<Eigen::Index>(std::llround(duration_for(text) * kMockTtsRate));
  audio::AudioClip clip;
  clip.sample_rate = kMockTtsRate;
  clip.samples = Eigen::VectorXd::Zero(n);

  double total_weight = 0.0;
  for (const auto& w : words) total_weight += static_cast<double>(w.size() + 1);

  const Eigen::Index fade = kMockTtsRate / 100;  // 10 ms
  double cum = 0.0;
  Eigen::Index begin = 0;
  for (const auto& w : words) {
    cum += static_cast<double>(w.size() + 1);
    const auto end = static_cast<Eigen::Index>(std::llround(n * cum / total_weight));
    // The last 15% of each slot is a pause between words.
    const Eigen::Index voiced = (end - begin) * 85 / 100;
    const std::uint64_t h = TrigramEmbedder::fnv1a(lower_ascii(w)) ^ (cfg_.seed * 0x9e3779b97f4a7c15ULL);
    const double f0 = 300.0 + static_cast<double>(h % 1200);
    const Eigen::Index ramp = std::min(fade, voiced / 4);
    for (Eigen::Index i = 0; i < voiced; ++i) {
      double env = 1.0;
      if (ramp > 0) {
        env = std::min({1.0, static_cast<double>(i) / ramp, static_cast<double>(voiced - 1 - i) / ramp});
      }
      const double t = static_cast<double>(i) / kMockTtsRate;
      clip.samples[begin + i] = env * (0.5 * std::sin(2.0 * std::numbers::pi * f0 * t) +
                                       0.2 * std::sin(4.0 * std::numbers::pi * f0 * t));
    }
    begin = end;
  }
  artificial_delay(cfg_.mock_latency_s);
  return clip;
}

std::uint64_t TrigramEmbedder::fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

Embedding TrigramEmbedder::embed(std::string_view text) {
  Embedding e;
  e.values = Eigen::VectorXd::Zero(kTrigramDim);
  if (text.empty()) {
    e.empty = true;
    return e;
  }
  const std::string s = lower_ascii(text);
  if (s.size() < 3) {
    e.values[static_cast<Eigen::Index>(fnv1a(s) % kTrigramDim)] = 1.0;
  } else {
    for (std::size_t i = 0; i + 3 <= s.size(); ++i) {
      e.values[static_cast<Eigen::Index>(fnv1a(std::string_view(s).substr(i, 3)) % kTrigramDim)] += 1.0;
    }
  }
  e.values.normalize();
  return e;
}

}  // namespace speechagent::backends
