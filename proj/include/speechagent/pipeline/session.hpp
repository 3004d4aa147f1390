#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "speechagent/error.hpp"
#include "speechagent/sir/model.hpp"

namespace speechagent::pipeline {

enum class Stage { Ingest, Sir, Asr, Refine, Tts, Respond };

inline constexpr std::array<Stage, 6> kAllStages = {Stage::Ingest, Stage::Sir,  Stage::Asr,
                                                    Stage::Refine, Stage::Tts, Stage::Respond};

std::string_view to_string(Stage s);
std::optional<Stage> parse_stage(std::string_view name);

struct StageTimings {
  std::array<double, kAllStages.size()> durations_s{};  // indexed by Stage
  double total_s = 0.0;
  double audio_duration_s = 0.0;

  double& operator[](Stage s) { return durations_s[static_cast<std::size_t>(s)]; }
  double operator[](Stage s) const { return durations_s[static_cast<std::size_t>(s)]; }
  double rtf() const { return audio_duration_s > 0.0 ? total_s / audio_duration_s : 0.0; }
};

struct SessionStatus {
  bool complete = false;
  std::optional<Stage> failed_stage;
  std::optional<Errc> error;
  std::string message;
};

struct SessionOptions {
  std::string style;
  std::optional<std::string> voice_id;
  std::optional<sir::ImpairmentClass> force_class;
  bool use_class_in_prompt = true;
};

struct BackendIds {
  std::string asr, llm, tts;
};

struct RefineSession {
  std::string id;
  std::string created_at;
  SessionOptions options;
  std::optional<sir::ClassPosterior> impairment;
  bool impairment_forced = false;
  std::optional<std::string> transcript;
  std::optional<std::string> refined_text;
  std::optional<sir::ImpairmentClass> prompt_class;  // class named in the prompt, if any
  bool has_input_audio = false;
  bool has_output_audio = false;
  StageTimings timings;
  BackendIds backend_ids;
  SessionStatus status;
};

// Audio refs are "/v1/sessions/{id}/audio/{input|output}".
nlohmann::json to_json(const RefineSession& s);
RefineSession session_from_json(const nlohmann::json& j);

}  // namespace speechagent::pipeline
