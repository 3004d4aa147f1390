#pragma once

#include <array>
#include <span>

#include <json.hpp>

#include "speechagent/pipeline/session.hpp"

namespace speechagent::pipeline {

struct LatencyReport {
  std::size_t n_trials = 0;  // complete sessions used
  std::array<double, kAllStages.size()> mean_s{};
  std::array<double, kAllStages.size()> max_s{};
  std::array<double, kAllStages.size()> fraction{};  // mean stage / mean total
  double mean_total_s = 0.0;
  double max_total_s = 0.0;
  double mean_rtf = 0.0;  // per-session RTF, then averaged
  double mean_audio_duration_s = 0.0;

  double mean(Stage s) const { return mean_s[static_cast<std::size_t>(s)]; }
  double share(Stage s) const { return fraction[static_cast<std::size_t>(s)]; }
};

// Failed sessions are ignored. NoCompleteSessions when none are complete.
LatencyReport latency_report(std::span<const RefineSession> sessions);

nlohmann::json to_json(const LatencyReport& r);

}  // namespace speechagent::pipeline
