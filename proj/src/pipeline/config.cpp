#include "speechagent/pipeline/config.hpp"

#include <cstdlib>
#include <fstream>

#include "speechagent/error.hpp"

namespace speechagent::pipeline {

namespace {

using json = nlohmann::json;

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key) && !j[key].is_null()) out = j[key].get<T>();
}

std::optional<std::string> env(const std::string& name) {
  if (const char* v = std::getenv(name.c_str()); v && *v) return std::string(v);
  return std::nullopt;
}

void override_backend(const std::string& role, backends::BackendConfig& b) {
  const std::string p = "SPEECHAGENT_" + role + "_";
  if (auto v = env(p + "KIND")) b.kind = backends::parse_backend_kind(*v);
  if (auto v = env(p + "BASE_URL")) b.base_url = *v;
  if (auto v = env(p + "MODEL")) b.model_name = *v;
  if (auto v = env(p + "API_KEY_ENV")) b.api_key_env = *v;
}

}  // namespace

json to_json(const audio::DspConfig& d) {
  return {{"target_rate", d.target_rate}, {"win_size", d.win_size}, {"hop_size", d.hop_size},
          {"n_mels", d.n_mels},           {"fmin", d.fmin},         {"fmax", d.fmax},
          {"log_floor", d.log_floor}};
}

audio::DspConfig dsp_from_json(const json& j, audio::DspConfig d) {
  read(j, "target_rate", d.target_rate);
  read(j, "win_size", d.win_size);
  read(j, "hop_size", d.hop_size);
  read(j, "n_mels", d.n_mels);
  read(j, "fmin", d.fmin);
  read(j, "fmax", d.fmax);
  read(j, "log_floor", d.log_floor);
  return d;
}

json to_json(const backends::BackendConfig& b) {
  return {{"kind", std::string(backends::to_string(b.kind))},
          {"base_url", b.base_url},
          {"api_key_env", b.api_key_env},
          {"model_name", b.model_name},
          {"timeout_s", b.timeout_s},
          {"max_retries", b.max_retries},
          {"mock_latency_s", b.mock_latency_s},
          {"seed", b.seed},
          {"fixtures_path", b.fixtures_path},
          {"strict_fixtures", b.strict_fixtures},
          {"voice", b.voice}};
}

backends::BackendConfig backend_from_json(const json& j, backends::BackendConfig b) {
  if (j.contains("kind")) b.kind = backends::parse_backend_kind(j["kind"].get<std::string>());
  read(j, "base_url", b.base_url);
  read(j, "api_key_env", b.api_key_env);
  read(j, "model_name", b.model_name);
  read(j, "timeout_s", b.timeout_s);
  read(j, "max_retries", b.max_retries);
  read(j, "mock_latency_s", b.mock_latency_s);
  read(j, "seed", b.seed);
  read(j, "fixtures_path", b.fixtures_path);
  read(j, "strict_fixtures", b.strict_fixtures);
  read(j, "voice", b.voice);
  return b;
}

ServiceConfig config_from_json(const json& j) {
  ServiceConfig c;
  try {
    if (j.contains("listen")) {
      read(j["listen"], "host", c.host);
      read(j["listen"], "port", c.port);
    }
    read(j, "threads", c.threads);
    read(j, "model_path", c.model_path);
    read(j, "session_dir", c.session_dir);
    read(j, "prompt_dir", c.prompt_dir);
    read(j, "api_token_env", c.api_token_env);
    read(j, "allow_sidecar", c.allow_sidecar);
    read(j, "max_upload_bytes", c.max_upload_bytes);
    if (j.contains("dsp")) c.dsp = dsp_from_json(j["dsp"]);
    if (j.contains("backends")) {
      const auto& b = j["backends"];
      if (b.contains("asr")) c.asr = backend_from_json(b["asr"]);
      if (b.contains("llm")) c.llm = backend_from_json(b["llm"]);
      if (b.contains("tts")) c.tts = backend_from_json(b["tts"]);
      if (b.contains("embedder")) c.embedder = backend_from_json(b["embedder"]);
    }
    if (j.contains("completion")) {
      read(j["completion"], "temperature", c.completion.temperature);
      read(j["completion"], "max_tokens", c.completion.max_tokens);
    }
  } catch (const json::exception& e) {
    throw Error(Errc::ConfigInvalid, std::string("bad config value: ") + e.what());
  }
  if (c.port < 0 || c.port > 65535) throw Error(Errc::ConfigInvalid, "port out of range");
  if (c.threads < 1) throw Error(Errc::ConfigInvalid, "threads must be positive");
  return c;
}

ServiceConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ConfigInvalid, "cannot read config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(Errc::ConfigInvalid, "config " + path.string() + " is not JSON: " + e.what());
  }
  return config_from_json(j);
}

json to_json(const ServiceConfig& c) {
  return {{"listen", {{"host", c.host}, {"port", c.port}}},
          {"threads", c.threads},
          {"model_path", c.model_path},
          {"session_dir", c.session_dir},
          {"prompt_dir", c.prompt_dir},
          {"api_token_env", c.api_token_env},
          {"allow_sidecar", c.allow_sidecar},
          {"max_upload_bytes", c.max_upload_bytes},
          {"dsp", to_json(c.dsp)},
          {"backends",
           {{"asr", to_json(c.asr)}, {"llm", to_json(c.llm)}, {"tts", to_json(c.tts)},
            {"embedder", to_json(c.embedder)}}},
          {"completion",
           {{"temperature", c.completion.temperature}, {"max_tokens", c.completion.max_tokens}}}};
}

void apply_env_overrides(ServiceConfig& c) {
  if (auto v = env("SPEECHAGENT_HOST")) c.host = *v;
  if (auto v = env("SPEECHAGENT_PORT")) {
    try {
      c.port = std::stoi(*v);
    } catch (const std::exception&) {
      throw Error(Errc::ConfigInvalid, "SPEECHAGENT_PORT is not a number");
    }
  }
  if (auto v = env("SPEECHAGENT_MODEL_PATH")) c.model_path = *v;
  if (auto v = env("SPEECHAGENT_SESSION_DIR")) c.session_dir = *v;
  if (auto v = env("SPEECHAGENT_PROMPT_DIR")) c.prompt_dir = *v;
  if (auto v = env("SPEECHAGENT_API_TOKEN_ENV")) c.api_token_env = *v;
  override_backend("ASR", c.asr);
  override_backend("LLM", c.llm);
  override_backend("TTS", c.tts);
  override_backend("EMBEDDER", c.embedder);
}

std::shared_ptr<Pipeline> build_pipeline(const ServiceConfig& cfg) {
  PipelineDeps deps;
  deps.asr = backends::make_asr(cfg.asr);
  deps.llm = backends::make_llm(cfg.llm);
  deps.tts = backends::make_tts(cfg.tts);
  deps.dsp = cfg.dsp;
  deps.completion = cfg.completion;
  if (!cfg.prompt_dir.empty()) deps.prompts = refine::PromptTemplate::load(cfg.prompt_dir);
  if (!cfg.model_path.empty()) {
    deps.model = std::make_shared<const sir::SirModel>(sir::load_model(cfg.model_path, cfg.dsp));
  }
  auto store = cfg.session_dir.empty() ? nullptr : std::make_shared<SessionStore>(cfg.session_dir);
  return std::make_shared<Pipeline>(std::move(deps), std::move(store));
}

}  // namespace speechagent::pipeline
