#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "speechagent/bench/manifest.hpp"
#include "speechagent/pipeline/latency.hpp"
#include "speechagent/pipeline/pipeline.hpp"

namespace speechagent::bench {

struct ProfileConfig {
  int n_trials = 20;   // requests per entry
  std::string url;     // remote server base URL; empty runs in process
  std::string api_token;
  double timeout_s = 120.0;
  pipeline::SessionOptions options;
  bool sidecar_from_manifest = false;
};

struct ProfileResult {
  pipeline::LatencyReport overall;
  std::map<std::string, pipeline::LatencyReport> by_llm;  // keyed by LLM backend id
  std::vector<pipeline::RefineSession> sessions;          // timings and status only when remote
  std::size_t failures = 0;
};

// Requests run one at a time so stage timings are not skewed by contention.
// ServerUnreachable when the remote server does not answer; NoCompleteSessions
// when every request failed.
ProfileResult profile_latency(const std::vector<ManifestEntry>& entries, const ProfileConfig& cfg,
                              const pipeline::Pipeline* in_process = nullptr);

// stage_shares.csv: stage,mean_s,max_s,fraction
// llm_comparison.csv: llm,n,mean_refine_s,mean_total_s,mean_rtf
void write_profile_csv(const ProfileResult& result, const std::filesystem::path& dir);

}  // namespace speechagent::bench
