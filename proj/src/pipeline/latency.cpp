#include "speechagent/pipeline/latency.hpp"

#include <algorithm>

namespace speechagent::pipeline {

LatencyReport latency_report(std::span<const RefineSession> sessions) {
  LatencyReport r;
  double rtf_sum = 0.0, audio_sum = 0.0, total_sum = 0.0;
  std::array<double, kAllStages.size()> sums{};
  for (const auto& s : sessions) {
    if (!s.status.complete) continue;
    ++r.n_trials;
    for (std::size_t k = 0; k < kAllStages.size(); ++k) {
      sums[k] += s.timings.durations_s[k];
      r.max_s[k] = std::max(r.max_s[k], s.timings.durations_s[k]);
    }
    total_sum += s.timings.total_s;
    r.max_total_s = std::max(r.max_total_s, s.timings.total_s);
    audio_sum += s.timings.audio_duration_s;
    rtf_sum += s.timings.rtf();
  }
  if (r.n_trials == 0) throw Error(Errc::NoCompleteSessions, "no complete sessions to report on");
  const auto n = static_cast<double>(r.n_trials);
  for (std::size_t k = 0; k < kAllStages.size(); ++k) r.mean_s[k] = sums[k] / n;
  r.mean_total_s = total_sum / n;
  r.mean_audio_duration_s = audio_sum / n;
  r.mean_rtf = rtf_sum / n;
  for (std::size_t k = 0; k < kAllStages.size(); ++k) {
    r.fraction[k] = r.mean_total_s > 0.0 ? r.mean_s[k] / r.mean_total_s : 0.0;
  }
  return r;
}

nlohmann::json to_json(const LatencyReport& r) {
  nlohmann::json stages = nlohmann::json::object();
  for (auto s : kAllStages) {
    const auto k = static_cast<std::size_t>(s);
    stages[std::string(to_string(s))] = {
        {"mean_s", r.mean_s[k]}, {"max_s", r.max_s[k]}, {"fraction", r.fraction[k]}};
  }
  return {{"n_trials", r.n_trials},
          {"stages", stages},
          {"mean_total_s", r.mean_total_s},
          {"max_total_s", r.max_total_s},
          {"mean_rtf", r.mean_rtf},
          {"mean_audio_duration_s", r.mean_audio_duration_s}};
}

}  // namespace speechagent::pipeline
