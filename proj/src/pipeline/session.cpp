#include "speechagent/pipeline/session.hpp"

namespace speechagent::pipeline {

namespace {

using json = nlohmann::json;

constexpr std::array<std::string_view, kAllStages.size()> kStageNames = {
    "ingest", "sir", "asr", "refine", "tts", "respond"};

json vec4(const Eigen::Vector4d& v) { return json::array({v[0], v[1], v[2], v[3]}); }

Eigen::Vector4d vec4_from(const json& j) {
  Eigen::Vector4d v;
  for (int i = 0; i < 4; ++i) v[i] = j.at(static_cast<std::size_t>(i)).get<double>();
  return v;
}

template <typename T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

std::optional<std::string> opt_string(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<std::string>();
}

std::optional<sir::ImpairmentClass> opt_class(const json& j, const char* key) {
  if (const auto s = opt_string(j, key)) return sir::parse_class(*s);
  return std::nullopt;
}

std::optional<Errc> parse_errc(std::string_view name) {
  for (int i = 0; i <= static_cast<int>(Errc::Io); ++i) {
    if (to_string(static_cast<Errc>(i)) == name) return static_cast<Errc>(i);
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(Stage s) { return kStageNames[static_cast<std::size_t>(s)]; }

std::optional<Stage> parse_stage(std::string_view name) {
  for (std::size_t i = 0; i < kStageNames.size(); ++i) {
    if (kStageNames[i] == name) return kAllStages[i];
  }
  return std::nullopt;
}

json to_json(const RefineSession& s) {
  json j;
  j["id"] = s.id;
  j["created_at"] = s.created_at;

  json status = {{"state", s.status.complete ? "complete" : "failed"}};
  if (s.status.failed_stage) status["stage"] = std::string(to_string(*s.status.failed_stage));
  if (s.status.error) status["error"] = std::string(to_string(*s.status.error));
  if (!s.status.message.empty()) status["message"] = s.status.message;
  j["status"] = status;

  j["options"] = {
      {"style", s.options.style},
      {"voice_id", opt(s.options.voice_id)},
      {"force_class",
       s.options.force_class ? json(std::string(sir::to_string(*s.options.force_class))) : json(nullptr)},
      {"use_class_in_prompt", s.options.use_class_in_prompt},
  };

  if (s.impairment) {
    j["impairment"] = {{"label", std::string(sir::to_string(s.impairment->label))},
                       {"probs", vec4(s.impairment->probs)},
                       {"logits", vec4(s.impairment->logits)},
                       {"forced", s.impairment_forced}};
  } else {
    j["impairment"] = nullptr;
  }
  j["transcript"] = opt(s.transcript);
  j["refined_text"] = opt(s.refined_text);
  j["prompt_class"] =
      s.prompt_class ? json(std::string(sir::to_string(*s.prompt_class))) : json(nullptr);

  const std::string base = "/v1/sessions/" + s.id + "/audio/";
  j["input_audio_ref"] = s.has_input_audio ? json(base + "input") : json(nullptr);
  j["output_audio_ref"] = s.has_output_audio ? json(base + "output") : json(nullptr);

  json t = json::object();
  for (auto stage : kAllStages) t[std::string(to_string(stage)) + "_s"] = s.timings[stage];
  t["total_s"] = s.timings.total_s;
  t["audio_duration_s"] = s.timings.audio_duration_s;
  t["rtf"] = s.timings.rtf();
  j["timings"] = t;

  j["backend_ids"] = {{"asr", s.backend_ids.asr}, {"llm", s.backend_ids.llm}, {"tts", s.backend_ids.tts}};
  return j;
}

RefineSession session_from_json(const json& j) {
  RefineSession s;
  s.id = j.at("id").get<std::string>();
  s.created_at = j.at("created_at").get<std::string>();

  const auto& st = j.at("status");
  s.status.complete = st.at("state") == "complete";
  if (const auto v = opt_string(st, "stage")) s.status.failed_stage = parse_stage(*v);
  if (const auto v = opt_string(st, "error")) s.status.error = parse_errc(*v);
  s.status.message = opt_string(st, "message").value_or("");

  const auto& o = j.at("options");
  s.options.style = o.at("style").get<std::string>();
  s.options.voice_id = opt_string(o, "voice_id");
  s.options.force_class = opt_class(o, "force_class");
  s.options.use_class_in_prompt = o.at("use_class_in_prompt").get<bool>();

  if (const auto& imp = j.at("impairment"); !imp.is_null()) {
    sir::ClassPosterior p;
    p.label = sir::parse_class(imp.at("label").get<std::string>()).value();
    p.probs = vec4_from(imp.at("probs"));
    p.logits = vec4_from(imp.at("logits"));
    s.impairment = p;
    s.impairment_forced = imp.at("forced").get<bool>();
  }
  s.transcript = opt_string(j, "transcript");
  s.refined_text = opt_string(j, "refined_text");
  s.prompt_class = opt_class(j, "prompt_class");
  s.has_input_audio = !j.at("input_audio_ref").is_null();
  s.has_output_audio = !j.at("output_audio_ref").is_null();

  const auto& t = j.at("timings");
  for (auto stage : kAllStages) s.timings[stage] = t.at(std::string(to_string(stage)) + "_s").get<double>();
  s.timings.total_s = t.at("total_s").get<double>();
  s.timings.audio_duration_s = t.at("audio_duration_s").get<double>();

  const auto& b = j.at("backend_ids");
  s.backend_ids = {b.at("asr").get<std::string>(), b.at("llm").get<std::string>(),
                   b.at("tts").get<std::string>()};
  return s;
}

}  // namespace speechagent::pipeline
