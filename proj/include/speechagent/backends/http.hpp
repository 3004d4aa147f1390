#pragma once

#include "speechagent/backends/backend.hpp"

namespace speechagent::backends {

// OpenAI-style REST clients. Each call opens its own connection, so one
// instance may be shared across threads. Connect and timeout failures are
// retried up to max_retries times; any HTTP status outside 2xx raises
// BackendRejected immediately with the response body attached.

class HttpAsr final : public AsrBackend {
 public:
  explicit HttpAsr(BackendConfig cfg);
  Transcript transcribe(const audio::AudioClip& clip, const RequestContext& ctx = {}) override;
  std::string id() const override;
  std::string health() const override;

 private:
  BackendConfig cfg_;
};

class HttpLlm final : public LlmBackend {
 public:
  explicit HttpLlm(BackendConfig cfg);
  std::string complete(const std::string& prompt, const CompletionParams& params = {}) override;
  std::string id() const override;
  std::string health() const override;

 private:
  BackendConfig cfg_;
};

class HttpTts final : public TtsBackend {
 public:
  explicit HttpTts(BackendConfig cfg);
  audio::AudioClip synthesize(const std::string& text, const StyleSpec& style = {}) override;
  std::string id() const override;
  std::string health() const override;

 private:
  BackendConfig cfg_;
};

class HttpEmbedder final : public Embedder {
 public:
  explicit HttpEmbedder(BackendConfig cfg);
  Embedding embed(std::string_view text) override;
  std::string id() const override;
  std::string health() const override;

 private:
  BackendConfig cfg_;
};

}  // namespace speechagent::backends
