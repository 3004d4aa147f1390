#pragma once

#include <map>

#include "speechagent/backends/backend.hpp"

namespace speechagent::backends {

// Hex SHA-256 of the clip's PCM16 WAV encoding; the mock ASR fixture key.
std::string content_hash(const audio::AudioClip& clip);

// Transcript source, in order: request sidecar, fixture table, then (unless
// strict) a token string derived from the content hash and seed.
class MockAsr final : public AsrBackend {
 public:
  explicit MockAsr(BackendConfig cfg, std::map<std::string, std::string> fixtures = {});
  Transcript transcribe(const audio::AudioClip& clip, const RequestContext& ctx = {}) override;
  std::string id() const override { return "mock-asr"; }

 private:
  BackendConfig cfg_;
  std::map<std::string, std::string> fixtures_;
};

// Rule-refines the text in the prompt's Input slot.
class MockLlm final : public LlmBackend {
 public:
  explicit MockLlm(BackendConfig cfg) : cfg_(std::move(cfg)) {}
  std::string complete(const std::string& prompt, const CompletionParams& params = {}) override;
  std::string id() const override { return "mock-llm"; }

 private:
  BackendConfig cfg_;
};

inline constexpr int kMockTtsRate = 16000;
inline constexpr double kMockTtsSecondsPerChar = 0.08;
inline constexpr double kMockTtsMinSeconds = 0.5;
inline constexpr double kMockTtsMaxSeconds = 30.0;

// Word-keyed tone bursts: each word gets a sine (plus second harmonic) whose
// pitch comes from a hash of the word, over a share of the clip proportional
// to its length. The style is ignored.
class MockTts final : public TtsBackend {
 public:
  explicit MockTts(BackendConfig cfg) : cfg_(std::move(cfg)) {}
  audio::AudioClip synthesize(const std::string& text, const StyleSpec& style = {}) override;
  std::string id() const override { return "mock-tts"; }

  // Duration law alone: clamp(0.08 s per character, 0.5 s, 30 s).
  static double duration_for(std::string_view text);

 private:
  BackendConfig cfg_;
};

inline constexpr int kTrigramDim = 2048;

// Hashed character-trigram counts (FNV-1a 64, mod 2048) of the lowercased
// text, L2-normalised. Texts shorter than three bytes count as one gram.
class TrigramEmbedder final : public Embedder {
 public:
  Embedding embed(std::string_view text) override;
  std::string id() const override { return "trigram-2048"; }

  static std::uint64_t fnv1a(std::string_view bytes);
};

}  // namespace speechagent::backends
