#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include <json.hpp>

#include "speechagent/audio/mel.hpp"
#include "speechagent/backends/backend.hpp"
#include "speechagent/pipeline/pipeline.hpp"

namespace speechagent::pipeline {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  int threads = 8;
  std::string model_path;    // empty: every request must force a class
  std::string session_dir = "sessions";
  std::string prompt_dir;    // empty: compiled-in templates
  std::string api_token_env; // variable holding the static bearer token; empty disables auth
  bool allow_sidecar = true; // accept `sidecar_transcript` form fields (mock ASR only)
  std::size_t max_upload_bytes = 32u << 20;
  audio::DspConfig dsp;
  backends::BackendConfig asr, llm, tts, embedder;
  backends::CompletionParams completion;
};

// JSON file layout mirrors the struct; missing keys keep their defaults.
// ConfigInvalid on unknown backend kinds or malformed values.
ServiceConfig config_from_json(const nlohmann::json& j);
ServiceConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ServiceConfig& cfg);

// SPEECHAGENT_HOST, _PORT, _MODEL_PATH, _SESSION_DIR, _PROMPT_DIR,
// _API_TOKEN_ENV and, per role (ASR, LLM, TTS, EMBEDDER), _<ROLE>_KIND,
// _<ROLE>_BASE_URL, _<ROLE>_MODEL, _<ROLE>_API_KEY_ENV override file values.
void apply_env_overrides(ServiceConfig& cfg);

nlohmann::json to_json(const audio::DspConfig& dsp);
audio::DspConfig dsp_from_json(const nlohmann::json& j, audio::DspConfig base = {});
nlohmann::json to_json(const backends::BackendConfig& b);
backends::BackendConfig backend_from_json(const nlohmann::json& j, backends::BackendConfig base = {});

// Backends, model and store per the configuration.
std::shared_ptr<Pipeline> build_pipeline(const ServiceConfig& cfg);

}  // namespace speechagent::pipeline
