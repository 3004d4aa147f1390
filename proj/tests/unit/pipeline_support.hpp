#pragma once

#include <atomic>
#include <filesystem>
#include <memory>
#include <string>

#include <unistd.h>

#include "speechagent/backends/mock.hpp"
#include "speechagent/pipeline/pipeline.hpp"
#include "speechagent/sir/train.hpp"

namespace testsupport {

// Fresh, empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag) {
  static std::atomic<int> counter{0};
  auto dir = std::filesystem::temp_directory_path() /
             ("speechagent_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// Untrained but well-formed classifier for the default front end.
inline std::shared_ptr<const speechagent::sir::SirModel> tiny_model(std::uint64_t seed = 1) {
  auto model = std::make_shared<speechagent::sir::SirModel>();
  model->dsp = {};
  model->params = speechagent::sir::init_params(model->dsp.n_mels, 8, 0.05, seed);
  model->cfg_fingerprint = speechagent::audio::fingerprint(model->dsp);
  return model;
}

struct MockSleeps {
  double asr = 0.0, llm = 0.0, tts = 0.0;
};

inline speechagent::pipeline::PipelineDeps mock_deps(MockSleeps sleeps = {}, std::uint64_t seed = 7) {
  using namespace speechagent::backends;
  BackendConfig asr, llm, tts;
  asr.seed = llm.seed = tts.seed = seed;
  asr.mock_latency_s = sleeps.asr;
  llm.mock_latency_s = sleeps.llm;
  tts.mock_latency_s = sleeps.tts;
  speechagent::pipeline::PipelineDeps deps;
  deps.asr = std::make_shared<MockAsr>(asr);
  deps.llm = std::make_shared<MockLlm>(llm);
  deps.tts = std::make_shared<MockTts>(tts);
  deps.model = tiny_model();
  return deps;
}

}  // namespace testsupport
