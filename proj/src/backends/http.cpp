#include "speechagent/backends/http.hpp"

#include <chrono>
#include <cstdlib>
#include <functional>

#include <httplib.h>
#include <json.hpp>

#include "speechagent/audio/wav.hpp"
#include "speechagent/error.hpp"

namespace speechagent::backends {

namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

constexpr std::size_t kMaxBodyInError = 2000;

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string prefix;  // path prefix without trailing slash
};

Endpoint parse_base_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(Errc::ConfigInvalid, "base_url needs a scheme: " + url);
  }
  const auto path_start = url.find('/', scheme_end + 3);
  Endpoint ep;
  ep.origin = url.substr(0, path_start);
  ep.prefix = path_start == std::string::npos ? "" : url.substr(path_start);
  while (!ep.prefix.empty() && ep.prefix.back() == '/') ep.prefix.pop_back();
  return ep;
}

class Transport {
 public:
  explicit Transport(const BackendConfig& cfg) : cfg_(cfg), ep_(parse_base_url(cfg.base_url)) {}

  std::string post(const std::string& path, const std::function<httplib::Result(httplib::Client&, const std::string&)>& send) const {
    const std::string full = ep_.prefix + path;
    const int attempts = cfg_.max_retries + 1;
    httplib::Error last = httplib::Error::Unknown;
    for (int attempt = 0; attempt < attempts; ++attempt) {
      httplib::Client cli(ep_.origin);
      configure(cli, cfg_.timeout_s);
      auto res = send(cli, full);
      if (!res) {
        last = res.error();  // connect/read/write failure: safe to retry
        continue;
      }
      if (res->status < 200 || res->status >= 300) {
        std::string body = res->body.substr(0, kMaxBodyInError);
        throw Error(Errc::BackendRejected,
                    "HTTP " + std::to_string(res->status) + " from " + full + ": " + body);
      }
      return std::move(res->body);
    }
    throw Error(Errc::BackendUnavailable, "POST " + full + " failed after " +
                                              std::to_string(attempts) + " attempt(s): " +
                                              httplib::to_string(last));
  }

  std::string health() const {
    httplib::Client cli(ep_.origin);
    configure(cli, std::min(cfg_.timeout_s, 2.0));
    auto res = cli.Get(ep_.prefix.empty() ? "/" : ep_.prefix);
    return res ? "ok" : "unreachable";
  }

 private:
  void configure(httplib::Client& cli, double timeout_s) const {
    const auto usec = std::chrono::microseconds(static_cast<long long>(timeout_s * 1e6));
    cli.set_connection_timeout(usec);
    cli.set_read_timeout(usec);
    cli.set_write_timeout(usec);
    if (!cfg_.api_key_env.empty()) {
      if (const char* key = std::getenv(cfg_.api_key_env.c_str()); key && *key) {
        cli.set_bearer_token_auth(key);
      }
    }
  }

  const BackendConfig& cfg_;
  Endpoint ep_;
};

json parse_json(const std::string& body, const std::string& what) {
  try {
    return json::parse(body);
  } catch (const json::exception&) {
    throw Error(Errc::BackendRejected, what + ": response is not JSON");
  }
}

std::string model_or(const BackendConfig& cfg, const char* fallback) {
  return cfg.model_name.empty() ? fallback : cfg.model_name;
}

}  // namespace

HttpAsr::HttpAsr(BackendConfig cfg) : cfg_(std::move(cfg)) { parse_base_url(cfg_.base_url); }

std::string HttpAsr::id() const { return "http-asr:" + model_or(cfg_, "whisper-1"); }

std::string HttpAsr::health() const { return Transport(cfg_).health(); }

Transcript HttpAsr::transcribe(const audio::AudioClip& clip, const RequestContext&) {
  const auto t0 = Clock::now();
  audio::validate(clip);
  const auto wav = audio::encode_wav(clip);
  httplib::MultipartFormDataItems items = {
      {"file", std::string(wav.begin(), wav.end()), "audio.wav", "audio/wav"},
      {"model", model_or(cfg_, "whisper-1"), "", ""},
  };
  const std::string body = Transport(cfg_).post(
      "/audio/transcriptions",
      [&](httplib::Client& cli, const std::string& path) { return cli.Post(path, items); });
  const json j = parse_json(body, "transcription");
  if (!j.contains("text") || !j["text"].is_string()) {
    throw Error(Errc::BackendRejected, "transcription response lacks \"text\"");
  }
  Transcript out;
  out.text = j["text"].get<std::string>();
  out.silence = out.text.empty();
  out.backend_id = id();
  out.latency_s = std::chrono::duration<double>(Clock::now() - t0).count();
  return out;
}

HttpLlm::HttpLlm(BackendConfig cfg) : cfg_(std::move(cfg)) { parse_base_url(cfg_.base_url); }

std::string HttpLlm::id() const { return "http-llm:" + model_or(cfg_, "default"); }

std::string HttpLlm::health() const { return Transport(cfg_).health(); }

std::string HttpLlm::complete(const std::string& prompt, const CompletionParams& params) {
  if (prompt.empty()) throw Error(Errc::InvalidArgument, "empty prompt");
  const json req = {
      {"model", model_or(cfg_, "default")},
      {"messages", json::array({{{"role", "user"}, {"content", prompt}}})},
      {"temperature", params.temperature},
      {"max_tokens", params.max_tokens},
  };
  const std::string payload = req.dump();
  const std::string body = Transport(cfg_).post(
      "/chat/completions", [&](httplib::Client& cli, const std::string& path) {
        return cli.Post(path, payload, "application/json");
      });
  const json j = parse_json(body, "chat completion");
  std::string content;
  try {
    content = j.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception&) {
    throw Error(Errc::BackendRejected, "chat completion lacks choices[0].message.content");
  }
  std::string cleaned = clean_completion(content);
  if (cleaned.empty()) throw Error(Errc::EmptyCompletion, "model returned no text");
  return cleaned;
}

HttpTts::HttpTts(BackendConfig cfg) : cfg_(std::move(cfg)) { parse_base_url(cfg_.base_url); }

std::string HttpTts::id() const { return "http-tts:" + model_or(cfg_, "tts-1"); }

std::string HttpTts::health() const { return Transport(cfg_).health(); }

audio::AudioClip HttpTts::synthesize(const std::string& text, const StyleSpec& style) {
  if (text.empty()) throw Error(Errc::EmptyInput, "nothing to synthesize");
  json req = {
      {"model", model_or(cfg_, "tts-1")},
      {"input", text},
      {"voice", style.voice_id.value_or(cfg_.voice)},
      {"response_format", "wav"},
  };
  if (!style.description.empty()) req["instructions"] = style.description;
  const std::string payload = req.dump();
  const std::string body = Transport(cfg_).post(
      "/audio/speech", [&](httplib::Client& cli, const std::string& path) {
        return cli.Post(path, payload, "application/json");
      });
  try {
    return audio::load_wav(std::span(reinterpret_cast<const std::uint8_t*>(body.data()), body.size()));
  } catch (const Error& e) {
    throw Error(Errc::UnsupportedAudioResponse, "speech endpoint returned undecodable audio: " + e.detail());
  }
}

HttpEmbedder::HttpEmbedder(BackendConfig cfg) : cfg_(std::move(cfg)) { parse_base_url(cfg_.base_url); }

std::string HttpEmbedder::id() const { return "http-embed:" + model_or(cfg_, "default"); }

std::string HttpEmbedder::health() const { return Transport(cfg_).health(); }

Embedding HttpEmbedder::embed(std::string_view text) {
  Embedding e;
  if (text.empty()) {
    e.values = Eigen::VectorXd::Zero(1);
    e.empty = true;
    return e;
  }
  const std::string payload = json{{"model", model_or(cfg_, "default")}, {"input", std::string(text)}}.dump();
  const std::string body = Transport(cfg_).post(
      "/embeddings", [&](httplib::Client& cli, const std::string& path) {
        return cli.Post(path, payload, "application/json");
      });
  const json j = parse_json(body, "embedding");
  std::vector<double> v;
  try {
    v = j.at("data").at(0).at("embedding").get<std::vector<double>>();
  } catch (const json::exception&) {
    throw Error(Errc::BackendRejected, "embedding response lacks data[0].embedding");
  }
  e.values = Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
  const double norm = e.values.norm();
  if (norm > 0.0) {
    e.values /= norm;
  } else {
    e.empty = true;
  }
  return e;
}

}  // namespace speechagent::backends
