#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "speechagent/audio/audio_clip.hpp"
#include "speechagent/audio/mel.hpp"
#include "speechagent/backends/backend.hpp"
#include "speechagent/pipeline/session.hpp"
#include "speechagent/pipeline/session_store.hpp"
#include "speechagent/refine/prompt.hpp"
#include "speechagent/sir/model.hpp"

namespace speechagent::pipeline {

inline constexpr double kMinInputSeconds = 0.2;
inline constexpr double kMaxInputSeconds = 60.0;

struct PipelineDeps {
  std::shared_ptr<backends::AsrBackend> asr;
  std::shared_ptr<backends::LlmBackend> llm;
  std::shared_ptr<backends::TtsBackend> tts;
  std::shared_ptr<const sir::SirModel> model;  // may be null if every request forces a class
  audio::DspConfig dsp;
  refine::PromptTemplate prompts = refine::PromptTemplate::builtin();
  backends::CompletionParams completion;
};

struct PipelineResult {
  RefineSession session;
  std::vector<std::uint8_t> output_wav;  // empty unless the session completed
};

// Sequential ingest -> sir -> asr -> refine -> tts -> respond. Each stage is
// wall-clock timed; total_s spans all stages and is taken before the session
// is persisted. A failing stage ends the run with status failed(stage); the
// session, including everything computed before the failure, is still
// stored. Shared state (model, templates, backends) is read-only, so
// concurrent calls are safe.
class Pipeline {
 public:
  // ConfigInvalid for a missing backend; FingerprintMismatch when the model
  // was trained with another front end.
  explicit Pipeline(PipelineDeps deps, std::shared_ptr<SessionStore> store = nullptr);

  PipelineResult refine_speech(const audio::AudioClip& clip, const SessionOptions& options,
                               const backends::RequestContext& ctx = {}) const;
  // Decoding the upload is part of the ingest stage.
  PipelineResult refine_wav(std::span<const std::uint8_t> wav, const SessionOptions& options,
                            const backends::RequestContext& ctx = {}) const;

  const PipelineDeps& deps() const { return deps_; }
  const std::shared_ptr<SessionStore>& store() const { return store_; }

 private:
  PipelineResult run(const audio::AudioClip* clip, std::span<const std::uint8_t> wav,
                     const SessionOptions& options, const backends::RequestContext& ctx) const;

  PipelineDeps deps_;
  std::shared_ptr<SessionStore> store_;
};

}  // namespace speechagent::pipeline
