#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "speechagent/audio/audio_clip.hpp"

namespace speechagent::backends {

struct Transcript {
  std::string text;
  std::string backend_id;
  double latency_s = 0.0;
  bool silence = false;  // set when the backend reports no speech; text is then empty
};

struct StyleSpec {
  std::string description;  // e.g. "calm female voice"; may be empty
  std::optional<std::string> voice_id;
};

struct CompletionParams {
  double temperature = 0.0;
  int max_tokens = 256;
};

struct Embedding {
  Eigen::VectorXd values;
  bool empty = false;  // zero vector for empty text, not unit length
};

// Per-request extras. `sidecar_transcript` is honoured by the mock ASR only.
struct RequestContext {
  std::optional<std::string> sidecar_transcript;
};

enum class BackendKind { Mock, Http };

struct BackendConfig {
  BackendKind kind = BackendKind::Mock;
  std::string base_url;     // http: scheme://host[:port][/prefix]
  std::string api_key_env;  // name of the variable holding the bearer token
  std::string model_name;
  double timeout_s = 30.0;
  int max_retries = 2;

  // Mock-only knobs.
  double mock_latency_s = 0.0;  // artificial sleep inside each call
  std::uint64_t seed = 0;
  std::string fixtures_path;    // ASR: JSON object content-hash -> transcript
  bool strict_fixtures = false; // ASR: MockFixtureMissing instead of hash tokens
  std::string voice = "default";

  // ConfigInvalid on a bad combination.
  void validate() const;
};

std::string_view to_string(BackendKind kind);
BackendKind parse_backend_kind(std::string_view name);

class AsrBackend {
 public:
  virtual ~AsrBackend() = default;
  virtual Transcript transcribe(const audio::AudioClip& clip, const RequestContext& ctx = {}) = 0;
  virtual std::string id() const = 0;
  // "ok" or "unreachable"; cheap enough for a health endpoint.
  virtual std::string health() const { return "ok"; }
};

class LlmBackend {
 public:
  virtual ~LlmBackend() = default;
  virtual std::string complete(const std::string& prompt, const CompletionParams& params = {}) = 0;
  virtual std::string id() const = 0;
  virtual std::string health() const { return "ok"; }
};

class TtsBackend {
 public:
  virtual ~TtsBackend() = default;
  virtual audio::AudioClip synthesize(const std::string& text, const StyleSpec& style = {}) = 0;
  virtual std::string id() const = 0;
  virtual std::string health() const { return "ok"; }
};

class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual Embedding embed(std::string_view text) = 0;
  virtual std::string id() const = 0;
  virtual std::string health() const { return "ok"; }
};

// Strips a surrounding code fence and a leading "Output:" label, then
// surrounding whitespace.
std::string clean_completion(std::string_view raw);

std::shared_ptr<AsrBackend> make_asr(const BackendConfig& cfg);
std::shared_ptr<LlmBackend> make_llm(const BackendConfig& cfg);
std::shared_ptr<TtsBackend> make_tts(const BackendConfig& cfg);
std::shared_ptr<Embedder> make_embedder(const BackendConfig& cfg);

}  // namespace speechagent::backends
