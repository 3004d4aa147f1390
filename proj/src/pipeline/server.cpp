#include "speechagent/pipeline/server.hpp"

#include <thread>

#include <spdlog/spdlog.h>

#include "speechagent/pipeline/latency.hpp"
#include "speechagent/util/base64.hpp"

// After Eigen: <resolv.h>, pulled in by httplib, defines a macro named _res.
#include <httplib.h>
#include <json.hpp>

namespace speechagent::pipeline {

namespace {

using json = nlohmann::json;

int http_status_for(Errc code, std::optional<Stage> stage) {
  switch (code) {
    case Errc::BackendUnavailable:
    case Errc::MissingModel:
      return 503;
    case Errc::BackendRejected:
    case Errc::EmptyCompletion:
    case Errc::RefinementFailed:
    case Errc::UnsupportedAudioResponse:
      return 502;
    case Errc::NotFound:
      return 404;
    default:
      break;
  }
  if (!stage || *stage == Stage::Ingest) return 400;
  if (code == Errc::InvalidArgument || code == Errc::EmptyInput) return 422;
  return 500;
}

void send_error(httplib::Response& res, int status, std::string_view code, std::string_view stage,
                const std::string& message, const std::string& session_id = {}) {
  json body = {{"error", code}, {"stage", stage}, {"message", message}};
  if (!session_id.empty()) body["session_id"] = session_id;
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

std::optional<std::string> field(const httplib::Request& req, const char* name) {
  if (req.has_file(name)) return req.get_file_value(name).content;
  if (req.has_param(name)) return req.get_param_value(name);
  return std::nullopt;
}

}  // namespace

struct Server::Impl {
  std::shared_ptr<const Pipeline> pipeline;
  ServerOptions options;
  httplib::Server http;
  std::thread thread;
  int port = -1;

  bool authorized(const httplib::Request& req, httplib::Response& res) const {
    if (options.api_token.empty()) return true;
    if (req.get_header_value("Authorization") == "Bearer " + options.api_token) return true;
    send_error(res, 401, "Unauthorized", "auth", "missing or invalid bearer token");
    return false;
  }

  void handle_refine(const httplib::Request& req, httplib::Response& res) const {
    if (!authorized(req, res)) return;
    SessionOptions opts;
    backends::RequestContext ctx;
    std::string audio;
    if (req.is_multipart_form_data()) {
      const auto a = field(req, "audio");
      if (!a) {
        send_error(res, 400, to_string(Errc::InvalidArgument), "ingest", "multipart field 'audio' is required");
        return;
      }
      audio = *a;
      opts.style = field(req, "style").value_or("");
      if (const auto v = field(req, "voice_id"); v && !v->empty()) opts.voice_id = *v;
      if (const auto fc = field(req, "force_class"); fc && !fc->empty()) {
        opts.force_class = sir::parse_class(*fc);
        if (!opts.force_class) {
          send_error(res, 400, to_string(Errc::InvalidArgument), "ingest", "unknown force_class '" + *fc + "'");
          return;
        }
      }
      if (const auto u = field(req, "use_class_in_prompt"); u && !u->empty()) {
        if (*u == "true" || *u == "1") {
          opts.use_class_in_prompt = true;
        } else if (*u == "false" || *u == "0") {
          opts.use_class_in_prompt = false;
        } else {
          send_error(res, 400, to_string(Errc::InvalidArgument), "ingest",
                     "use_class_in_prompt must be true or false");
          return;
        }
      }
      if (const auto sc = field(req, "sidecar_transcript")) {
        if (!options.allow_sidecar) {
          send_error(res, 400, to_string(Errc::InvalidArgument), "ingest", "sidecar transcripts are disabled");
          return;
        }
        ctx.sidecar_transcript = *sc;
      }
    } else {
      audio = req.body;  // raw WAV body
    }

    const auto bytes = std::span(reinterpret_cast<const std::uint8_t*>(audio.data()), audio.size());
    const PipelineResult result = pipeline->refine_wav(bytes, opts, ctx);
    const RefineSession& s = result.session;
    if (!s.status.complete) {
      const Errc code = s.status.error.value_or(Errc::Io);
      const std::string stage(to_string(s.status.failed_stage.value_or(Stage::Ingest)));
      send_error(res, http_status_for(code, s.status.failed_stage),
                 s.status.error ? to_string(code) : "InternalError", stage, s.status.message, s.id);
      return;
    }
    const auto& t = s.timings;
    json body = {
        {"session_id", s.id},
        {"impairment",
         {{"label", std::string(sir::to_string(s.impairment->label))},
          {"probs", {s.impairment->probs[0], s.impairment->probs[1], s.impairment->probs[2], s.impairment->probs[3]}},
          {"forced", s.impairment_forced}}},
        {"transcript", *s.transcript},
        {"refined_text", *s.refined_text},
        {"audio_wav_base64", util::base64_encode(result.output_wav)},
        {"timings",
         {{"ingest_s", t[Stage::Ingest]},
          {"sir_s", t[Stage::Sir]},
          {"asr_s", t[Stage::Asr]},
          {"refine_s", t[Stage::Refine]},
          {"tts_s", t[Stage::Tts]},
          {"respond_s", t[Stage::Respond]},
          {"total_s", t.total_s},
          {"audio_duration_s", t.audio_duration_s},
          {"rtf", t.rtf()}}},
        {"backend_ids", {{"asr", s.backend_ids.asr}, {"llm", s.backend_ids.llm}, {"tts", s.backend_ids.tts}}},
        {"output_audio_ref", "/v1/sessions/" + s.id + "/audio/output"},
    };
    res.set_content(body.dump(), "application/json");
  }

  void routes() {
    http.Post("/v1/refine", [this](const httplib::Request& req, httplib::Response& res) {
      handle_refine(req, res);
    });

    http.Get(R"(/v1/sessions/([A-Za-z0-9-]+))", [this](const httplib::Request& req, httplib::Response& res) {
      if (!authorized(req, res)) return;
      const auto& store = pipeline->store();
      const std::string id = req.matches[1];
      if (!store || !store->contains(id)) {
        send_error(res, 404, to_string(Errc::NotFound), "sessions", "unknown session " + id);
        return;
      }
      res.set_content(store->get_raw(id), "application/json");
    });

    http.Get(R"(/v1/sessions/([A-Za-z0-9-]+)/audio/(input|output))",
             [this](const httplib::Request& req, httplib::Response& res) {
               if (!authorized(req, res)) return;
               const auto& store = pipeline->store();
               const std::string id = req.matches[1];
               const auto slot = req.matches[2] == "input" ? AudioSlot::Input : AudioSlot::Output;
               try {
                 if (!store) throw Error(Errc::NotFound, "no session store");
                 const auto bytes = store->audio(id, slot);
                 res.set_content(std::string(bytes.begin(), bytes.end()), "audio/wav");
               } catch (const Error& e) {
                 send_error(res, 404, to_string(Errc::NotFound), "sessions", e.detail());
               }
             });

    http.Get("/v1/metrics", [this](const httplib::Request& req, httplib::Response& res) {
      if (!authorized(req, res)) return;
      const auto& store = pipeline->store();
      const auto sessions = store ? store->list() : std::vector<RefineSession>{};
      try {
        json body = to_json(latency_report(sessions));
        body["n_sessions"] = sessions.size();
        res.set_content(body.dump(), "application/json");
      } catch (const Error& e) {
        if (e.code() != Errc::NoCompleteSessions) throw;
        res.set_content(json{{"n_trials", 0}, {"n_sessions", sessions.size()}, {"message", e.detail()}}.dump(),
                        "application/json");
      }
    });

    http.Get("/v1/health", [this](const httplib::Request&, httplib::Response& res) {
      const auto& d = pipeline->deps();
      json backends = {
          {"asr", {{"id", d.asr->id()}, {"status", d.asr->health()}}},
          {"llm", {{"id", d.llm->id()}, {"status", d.llm->health()}}},
          {"tts", {{"id", d.tts->id()}, {"status", d.tts->health()}}},
      };
      bool ok = true;
      for (const auto& [role, b] : backends.items()) ok &= b["status"] == "ok";
      json model = d.model ? json{{"loaded", true}, {"fingerprint", d.model->cfg_fingerprint}}
                           : json{{"loaded", false}};
      res.set_content(json{{"status", ok ? "ok" : "degraded"}, {"backends", backends}, {"model", model}}.dump(),
                      "application/json");
    });

    http.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
      try {
        std::rethrow_exception(ep);
      } catch (const Error& e) {
        send_error(res, 500, to_string(e.code()), "server", e.detail());
      } catch (const std::exception& e) {
        send_error(res, 500, "InternalError", "server", e.what());
      }
    });

    // Method, path and status only: bodies carry audio and headers may carry tokens.
    http.set_logger([](const httplib::Request& req, const httplib::Response& res) {
      spdlog::info("{} {} -> {}", req.method, req.path, res.status);
    });
  }
};

Server::Server(std::shared_ptr<const Pipeline> pipeline, ServerOptions options)
    : impl_(std::make_unique<Impl>()) {
  impl_->pipeline = std::move(pipeline);
  impl_->options = std::move(options);
  const int threads = std::max(1, impl_->options.threads);
  impl_->http.new_task_queue = [threads] { return new httplib::ThreadPool(static_cast<std::size_t>(threads)); };
  impl_->http.set_payload_max_length(impl_->options.max_upload_bytes);
  // httplib's default adds SO_REUSEPORT, which lets a second server share a busy port.
  impl_->http.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
  });
  impl_->routes();
}

Server::~Server() { stop(); }

int Server::bind() {
  if (impl_->port >= 0) return impl_->port;
  const auto& o = impl_->options;
  if (o.port == 0) {
    impl_->port = impl_->http.bind_to_any_port(o.host);
  } else {
    impl_->port = impl_->http.bind_to_port(o.host, o.port) ? o.port : -1;
  }
  if (impl_->port < 0) {
    throw Error(Errc::BindFailure, "cannot listen on " + o.host + ":" + std::to_string(o.port));
  }
  return impl_->port;
}

void Server::listen() {
  bind();
  spdlog::info("listening on {}:{}", impl_->options.host, impl_->port);
  impl_->http.listen_after_bind();
}

int Server::start() {
  const int p = bind();
  impl_->thread = std::thread([this] { impl_->http.listen_after_bind(); });
  impl_->http.wait_until_ready();
  return p;
}

void Server::stop() {
  if (!impl_) return;
  impl_->http.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

int Server::port() const { return impl_->port; }

}  // namespace speechagent::pipeline
