#include "speechagent/pipeline/pipeline.hpp"

#include <chrono>

#include "speechagent/audio/resample.hpp"
#include "speechagent/audio/wav.hpp"
#include "speechagent/refine/refine.hpp"
#include "speechagent/refine/rule_refiner.hpp"
#include "speechagent/util/base64.hpp"

namespace speechagent::pipeline {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

Pipeline::Pipeline(PipelineDeps deps, std::shared_ptr<SessionStore> store)
    : deps_(std::move(deps)), store_(std::move(store)) {
  if (!deps_.asr || !deps_.llm || !deps_.tts) {
    throw Error(Errc::ConfigInvalid, "pipeline needs ASR, LLM and TTS backends");
  }
  audio::validate(deps_.dsp);
  deps_.prompts.validate();
  if (deps_.model && deps_.model->cfg_fingerprint != audio::fingerprint(deps_.dsp)) {
    throw Error(Errc::FingerprintMismatch, "model was trained with a different front end");
  }
}

PipelineResult Pipeline::refine_speech(const audio::AudioClip& clip, const SessionOptions& options,
                                       const backends::RequestContext& ctx) const {
  return run(&clip, {}, options, ctx);
}

PipelineResult Pipeline::refine_wav(std::span<const std::uint8_t> wav, const SessionOptions& options,
                                    const backends::RequestContext& ctx) const {
  return run(nullptr, wav, options, ctx);
}

PipelineResult Pipeline::run(const audio::AudioClip* given, std::span<const std::uint8_t> wav,
                             const SessionOptions& options,
                             const backends::RequestContext& ctx) const {
  PipelineResult result;
  RefineSession& s = result.session;
  s.id = util::new_uuid();
  s.created_at = util::utc_timestamp();
  s.options = options;
  s.backend_ids = {deps_.asr->id(), deps_.llm->id(), deps_.tts->id()};

  std::vector<std::uint8_t> input_wav;
  Stage stage = Stage::Ingest;
  const auto t_start = Clock::now();
  auto t = t_start;
  auto finish_stage = [&](Stage next) {
    s.timings[stage] = since(t);
    stage = next;
    t = Clock::now();
  };

  try {
    audio::AudioClip decoded;
    if (!given) decoded = audio::load_wav(wav);
    const audio::AudioClip& clip = given ? *given : decoded;
    audio::validate(clip);
    if (clip.empty()) throw Error(Errc::EmptyAudio, "upload has no samples");
    const double duration = clip.duration_s();
    s.timings.audio_duration_s = duration;
    if (duration < kMinInputSeconds) {
      throw Error(Errc::AudioTooShort, "clip lasts " + std::to_string(duration) + " s; minimum is 0.2 s");
    }
    if (duration > kMaxInputSeconds) {
      throw Error(Errc::AudioTooLong, "clip lasts " + std::to_string(duration) + " s; maximum is 60 s");
    }
    input_wav = given ? audio::encode_wav(clip) : std::vector<std::uint8_t>(wav.begin(), wav.end());
    s.has_input_audio = true;
    const audio::AudioClip clip16 = audio::resample(clip, deps_.dsp.target_rate);
    const audio::MelSpectrogram mel = audio::log_mel(clip16, deps_.dsp);
    finish_stage(Stage::Sir);

    if (options.force_class) {
      sir::ClassPosterior forced;
      forced.probs.setZero();
      forced.logits.setZero();
      forced.probs[sir::index_of(*options.force_class)] = 1.0;
      forced.label = *options.force_class;
      s.impairment = forced;
      s.impairment_forced = true;
    } else {
      if (!deps_.model) throw Error(Errc::MissingModel, "no classifier loaded and no class forced");
      s.impairment = sir::predict_mel(mel, *deps_.model);
    }
    finish_stage(Stage::Asr);

    const auto transcript = deps_.asr->transcribe(clip16, ctx);
    if (refine::split_words(transcript.text).empty()) {
      throw Error(Errc::EmptyInput, "recognizer returned no speech");
    }
    s.transcript = transcript.text;
    finish_stage(Stage::Refine);

    std::optional<sir::ImpairmentClass> prompt_cls;
    if (options.use_class_in_prompt) prompt_cls = s.impairment->label;
    const auto refined = refine::refine_text(*s.transcript, prompt_cls, *deps_.llm,
                                             deps_.completion, deps_.prompts);
    s.refined_text = refined.refined_text;
    s.prompt_class = refined.class_used;
    finish_stage(Stage::Tts);

    const auto speech = deps_.tts->synthesize(*s.refined_text, {options.style, options.voice_id});
    finish_stage(Stage::Respond);

    result.output_wav = audio::encode_wav(speech);
    s.has_output_audio = true;
    s.timings[stage] = since(t);
    s.status.complete = true;
  } catch (const Error& e) {
    s.timings[stage] = since(t);
    s.status.failed_stage = stage;
    s.status.error = e.code();
    s.status.message = e.detail();
  } catch (const std::exception& e) {
    s.timings[stage] = since(t);
    s.status.failed_stage = stage;
    s.status.message = e.what();
  }
  s.timings.total_s = since(t_start);

  if (store_) {
    store_->put(s, s.has_input_audio ? &input_wav : nullptr,
                s.has_output_audio ? &result.output_wav : nullptr);
  }
  return result;
}

}  // namespace speechagent::pipeline
