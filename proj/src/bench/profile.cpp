#include "speechagent/bench/profile.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "speechagent/audio/wav.hpp"

// After Eigen: <resolv.h>, pulled in by httplib, defines a macro named _res.
#include <httplib.h>
#include <json.hpp>

namespace speechagent::bench {

namespace {

using pipeline::RefineSession;
using pipeline::Stage;

std::string read_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RefineSession from_response(const nlohmann::json& j) {
  RefineSession s;
  s.id = j.value("session_id", "");
  const auto& t = j.at("timings");
  for (auto st : pipeline::kAllStages) {
    const auto key = std::string(pipeline::to_string(st)) + "_s";
    s.timings[st] = t.value(key, 0.0);
  }
  s.timings.total_s = t.at("total_s").get<double>();
  s.timings.audio_duration_s = t.value("audio_duration_s", 0.0);
  if (s.timings.audio_duration_s <= 0.0) {
    const double rtf = t.at("rtf").get<double>();
    s.timings.audio_duration_s = rtf > 0.0 ? s.timings.total_s / rtf : 0.0;
  }
  if (j.contains("backend_ids")) {
    const auto& b = j["backend_ids"];
    s.backend_ids = {b.value("asr", ""), b.value("llm", ""), b.value("tts", "")};
  }
  s.status.complete = true;
  return s;
}

class Remote {
 public:
  explicit Remote(const ProfileConfig& cfg) : client_(cfg.url) {
    const auto secs = static_cast<time_t>(cfg.timeout_s);
    const auto usecs = static_cast<time_t>((cfg.timeout_s - static_cast<double>(secs)) * 1e6);
    client_.set_connection_timeout(secs, usecs);
    client_.set_read_timeout(secs, usecs);
    client_.set_write_timeout(secs, usecs);
    if (!cfg.api_token.empty()) client_.set_bearer_token_auth(cfg.api_token);
    if (!client_.is_valid()) throw Error(Errc::ConfigInvalid, "cannot use server URL " + cfg.url);
    url_ = cfg.url;
  }

  RefineSession post(const std::string& wav, const pipeline::SessionOptions& o,
                     const std::optional<std::string>& sidecar) {
    httplib::MultipartFormDataItems items{{"audio", wav, "audio.wav", "audio/wav"},
                                          {"style", o.style, "", ""},
                                          {"use_class_in_prompt", o.use_class_in_prompt ? "true" : "false", "", ""}};
    if (o.force_class) items.push_back({"force_class", std::string(sir::to_string(*o.force_class)), "", ""});
    if (sidecar) items.push_back({"sidecar_transcript", *sidecar, "", ""});
    const auto res = client_.Post("/v1/refine", items);
    if (!res) {
      throw Error(Errc::ServerUnreachable, url_ + " did not answer: " + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
      RefineSession failed;
      failed.status.message = "HTTP " + std::to_string(res->status);
      return failed;
    }
    return from_response(nlohmann::json::parse(res->body));
  }

 private:
  httplib::Client client_;
  std::string url_;
};

}  // namespace

ProfileResult profile_latency(const std::vector<ManifestEntry>& entries, const ProfileConfig& cfg,
                              const pipeline::Pipeline* in_process) {
  if (cfg.n_trials < 1) throw Error(Errc::InvalidArgument, "n_trials must be at least 1");
  if (cfg.url.empty() && !in_process) throw Error(Errc::ConfigInvalid, "no server URL and no local pipeline");
  std::optional<Remote> remote;
  if (!cfg.url.empty()) remote.emplace(cfg);

  ProfileResult result;
  for (const auto& e : entries) {
    if (!e.audio_path) throw Error(Errc::ManifestInvalid, "entry " + e.sample_id + " has no audio_path");
    const std::string wav = read_bytes(*e.audio_path);
    std::optional<std::string> sidecar;
    if (cfg.sidecar_from_manifest && e.impaired_text) sidecar = *e.impaired_text;
    for (int t = 0; t < cfg.n_trials; ++t) {
      RefineSession s;
      if (remote) {
        s = remote->post(wav, cfg.options, sidecar);
      } else {
        backends::RequestContext ctx;
        ctx.sidecar_transcript = sidecar;
        const auto bytes = std::span(reinterpret_cast<const std::uint8_t*>(wav.data()), wav.size());
        s = in_process->refine_wav(bytes, cfg.options, ctx).session;
      }
      if (!s.status.complete) ++result.failures;
      result.sessions.push_back(std::move(s));
    }
  }
  result.overall = pipeline::latency_report(result.sessions);
  std::map<std::string, std::vector<RefineSession>> groups;
  for (const auto& s : result.sessions) {
    if (s.status.complete) groups[s.backend_ids.llm].push_back(s);
  }
  for (const auto& [llm, sessions] : groups) result.by_llm[llm] = pipeline::latency_report(sessions);
  return result;
}

void write_profile_csv(const ProfileResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  char buf[256];
  {
    std::ofstream f(dir / "stage_shares.csv", std::ios::trunc);
    f << "stage,mean_s,max_s,fraction\n";
    for (auto st : pipeline::kAllStages) {
      std::snprintf(buf, sizeof buf, "%s,%.6f,%.6f,%.6f\n", std::string(pipeline::to_string(st)).c_str(),
                    result.overall.mean(st), result.overall.max_s[static_cast<std::size_t>(st)],
                    result.overall.share(st));
      f << buf;
    }
    std::snprintf(buf, sizeof buf, "total,%.6f,%.6f,1.000000\n", result.overall.mean_total_s,
                  result.overall.max_total_s);
    f << buf;
    if (!f) throw Error(Errc::Io, "cannot write stage_shares.csv");
  }
  std::ofstream f(dir / "llm_comparison.csv", std::ios::trunc);
  f << "llm,n,mean_refine_s,mean_total_s,mean_rtf\n";
  for (const auto& [llm, r] : result.by_llm) {
    std::snprintf(buf, sizeof buf, ",%zu,%.6f,%.6f,%.6f\n", r.n_trials, r.mean(Stage::Refine), r.mean_total_s,
                  r.mean_rtf);
    f << llm << buf;
  }
  if (!f) throw Error(Errc::Io, "cannot write llm_comparison.csv");
}

}  // namespace speechagent::bench
