#include "speechagent/backends/backend.hpp"

#include <cctype>

#include "speechagent/backends/http.hpp"
#include "speechagent/backends/mock.hpp"
#include "speechagent/error.hpp"

namespace speechagent::backends {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

void BackendConfig::validate() const {
  if (kind == BackendKind::Http && base_url.empty()) {
    throw Error(Errc::ConfigInvalid, "http backend requires base_url");
  }
  if (!(timeout_s > 0.0)) throw Error(Errc::ConfigInvalid, "timeout_s must be positive");
  if (max_retries < 0) throw Error(Errc::ConfigInvalid, "max_retries must be non-negative");
  if (!(mock_latency_s >= 0.0)) throw Error(Errc::ConfigInvalid, "mock_latency_s must be >= 0");
}

std::string_view to_string(BackendKind kind) {
  return kind == BackendKind::Mock ? "mock" : "http";
}

BackendKind parse_backend_kind(std::string_view name) {
  if (name == "mock") return BackendKind::Mock;
  if (name == "http") return BackendKind::Http;
  throw Error(Errc::ConfigInvalid, "unknown backend kind '" + std::string(name) + "'");
}

std::string clean_completion(std::string_view raw) {
  std::string_view s = trim(raw);
  if (s.starts_with("```")) {
    const auto eol = s.find('\n');
    s = eol == std::string_view::npos ? std::string_view{} : s.substr(eol + 1);
    s = trim(s);
    if (s.ends_with("```")) s.remove_suffix(3);
    s = trim(s);
  }
  constexpr std::string_view kLabel = "Output:";
  if (s.size() >= kLabel.size()) {
    bool match = true;
    for (std::size_t i = 0; i < kLabel.size(); ++i) {
      if (std::tolower(static_cast<unsigned char>(s[i])) !=
          std::tolower(static_cast<unsigned char>(kLabel[i]))) {
        match = false;
        break;
      }
    }
    if (match) s = trim(s.substr(kLabel.size()));
  }
  return std::string(s);
}

std::shared_ptr<AsrBackend> make_asr(const BackendConfig& cfg) {
  cfg.validate();
  if (cfg.kind == BackendKind::Http) return std::make_shared<HttpAsr>(cfg);
  return std::make_shared<MockAsr>(cfg);
}

std::shared_ptr<LlmBackend> make_llm(const BackendConfig& cfg) {
  cfg.validate();
  if (cfg.kind == BackendKind::Http) return std::make_shared<HttpLlm>(cfg);
  return std::make_shared<MockLlm>(cfg);
}

std::shared_ptr<TtsBackend> make_tts(const BackendConfig& cfg) {
  cfg.validate();
  if (cfg.kind == BackendKind::Http) return std::make_shared<HttpTts>(cfg);
  return std::make_shared<MockTts>(cfg);
}

std::shared_ptr<Embedder> make_embedder(const BackendConfig& cfg) {
  cfg.validate();
  if (cfg.kind == BackendKind::Http) return std::make_shared<HttpEmbedder>(cfg);
  return std::make_shared<TrigramEmbedder>();
}

}  // namespace speechagent::backends
