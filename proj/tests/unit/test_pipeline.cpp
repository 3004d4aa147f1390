#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "speechagent/audio/wav.hpp"
#include "speechagent/pipeline/latency.hpp"
#include "speechagent/refine/prompt.hpp"
#include "speechagent/refine/rule_refiner.hpp"
#include "pipeline_support.hpp"
#include "test_support.hpp"

using namespace speechagent;
using namespace speechagent::pipeline;

namespace {

// Records prompts and otherwise behaves like the mock.
class RecordingLlm final : public backends::LlmBackend {
 public:
  std::string complete(const std::string& prompt, const backends::CompletionParams& p) override {
    prompts.push_back(prompt);
    return inner.complete(prompt, p);
  }
  std::string id() const override { return "recording-llm"; }
  std::vector<std::string> prompts;
  backends::MockLlm inner{backends::BackendConfig{}};
};

class BrokenAsr final : public backends::AsrBackend {
 public:
  backends::Transcript transcribe(const audio::AudioClip&, const backends::RequestContext&) override {
    throw Error(Errc::BackendUnavailable, "asr is down");
  }
  std::string id() const override { return "broken-asr"; }
};

class BrokenLlm final : public backends::LlmBackend {
 public:
  std::string complete(const std::string&, const backends::CompletionParams&) override {
    throw Error(Errc::BackendRejected, "HTTP 500");
  }
  std::string id() const override { return "broken-llm"; }
};

class BrokenTts final : public backends::TtsBackend {
 public:
  audio::AudioClip synthesize(const std::string&, const backends::StyleSpec&) override {
    throw std::runtime_error("synthesis crashed");
  }
  std::string id() const override { return "broken-tts"; }
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("mock stack composes the three mock oracles") {
  Pipeline pipe(testsupport::mock_deps());
  const auto clip = testsupport::sine(220.0, 1.5, 16000);
  backends::RequestContext ctx;
  ctx.sidecar_transcript = "b-b-book a um table";
  const auto r = pipe.refine_speech(clip, {}, ctx);
  const auto& s = r.session;
  REQUIRE(s.status.complete);
  CHECK(*s.transcript == "b-b-book a um table");
  CHECK(*s.refined_text == refine::rule_refine(*s.transcript));
  backends::MockTts tts{backends::BackendConfig{.seed = 7}};
  CHECK(r.output_wav == audio::encode_wav(tts.synthesize(*s.refined_text)));
  CHECK(s.impairment.has_value());
  CHECK(s.has_input_audio);
  CHECK(s.has_output_audio);
}

TEST_CASE("identical requests are deterministic apart from timings and ids") {
  Pipeline pipe(testsupport::mock_deps());
  const auto wav = audio::encode_wav(testsupport::noise(24000, 16000, 3));
  const auto a = pipe.refine_wav(wav, {});
  const auto b = pipe.refine_wav(wav, {});
  REQUIRE(a.session.status.complete);
  CHECK(a.session.id != b.session.id);
  CHECK(*a.session.transcript == *b.session.transcript);
  CHECK(*a.session.refined_text == *b.session.refined_text);
  CHECK(a.output_wav == b.output_wav);
  CHECK(a.session.impairment->probs == b.session.impairment->probs);
}

TEST_CASE("timing invariants and RTF arithmetic") {
  Pipeline pipe(testsupport::mock_deps({0.01, 0.02, 0.0}));
  for (int i = 0; i < 5; ++i) {
    const auto clip = testsupport::noise(8000 + 4000 * i, 16000, static_cast<std::uint64_t>(i));
    const auto s = pipe.refine_speech(clip, {}).session;
    REQUIRE(s.status.complete);
    const auto& t = s.timings;
    double sum = 0.0, peak = 0.0;
    for (auto st : kAllStages) {
      CHECK(t[st] >= 0.0);
      sum += t[st];
      peak = std::max(peak, t[st]);
    }
    CHECK(t.total_s >= peak);
    CHECK(sum <= t.total_s * 1.05);
    CHECK(t.audio_duration_s == doctest::Approx(clip.duration_s()).epsilon(1e-12));
    CHECK(std::abs(t.rtf() - t.total_s / t.audio_duration_s) <= 1e-9);
    CHECK(t[Stage::Refine] >= 0.02);
  }
}

TEST_CASE("a failing stage is attributed and earlier results are kept") {
  const auto clip = testsupport::noise(16000, 16000, 5);

  SUBCASE("asr") {
    auto deps = testsupport::mock_deps();
    deps.asr = std::make_shared<BrokenAsr>();
    const auto s = Pipeline(deps).refine_speech(clip, {}).session;
    CHECK_FALSE(s.status.complete);
    CHECK(s.status.failed_stage == Stage::Asr);
    CHECK(s.status.error == Errc::BackendUnavailable);
    CHECK(s.impairment.has_value());
    CHECK_FALSE(s.transcript.has_value());
  }
  SUBCASE("refine") {
    auto deps = testsupport::mock_deps();
    deps.llm = std::make_shared<BrokenLlm>();
    const auto s = Pipeline(deps).refine_speech(clip, {}).session;
    CHECK(s.status.failed_stage == Stage::Refine);
    CHECK(s.transcript.has_value());
    CHECK_FALSE(s.refined_text.has_value());
  }
  SUBCASE("tts, non-library exception") {
    auto deps = testsupport::mock_deps();
    deps.tts = std::make_shared<BrokenTts>();
    const auto r = Pipeline(deps).refine_speech(clip, {});
    CHECK(r.session.status.failed_stage == Stage::Tts);
    CHECK_FALSE(r.session.status.error.has_value());
    CHECK(r.session.refined_text.has_value());
    CHECK(r.output_wav.empty());
  }
  SUBCASE("sir without a model") {
    auto deps = testsupport::mock_deps();
    deps.model = nullptr;
    const auto s = Pipeline(deps).refine_speech(clip, {}).session;
    CHECK(s.status.failed_stage == Stage::Sir);
    CHECK(s.status.error == Errc::MissingModel);
  }
}

TEST_CASE("ingest rejects bad uploads and out-of-range durations") {
  Pipeline pipe(testsupport::mock_deps());
  const std::vector<std::uint8_t> junk = {'R', 'I', 'F'};
  auto s = pipe.refine_wav(junk, {}).session;
  CHECK(s.status.failed_stage == Stage::Ingest);
  CHECK(s.status.error == Errc::MalformedContainer);
  CHECK_FALSE(s.has_input_audio);

  s = pipe.refine_speech(testsupport::sine(300.0, 0.1, 16000), {}).session;
  CHECK(s.status.error == Errc::AudioTooShort);
  s = pipe.refine_speech(testsupport::sine(300.0, 61.0, 8000), {}).session;
  CHECK(s.status.error == Errc::AudioTooLong);
}

TEST_CASE("other input rates are resampled before analysis") {
  Pipeline pipe(testsupport::mock_deps());
  const auto s = pipe.refine_speech(testsupport::sine(440.0, 1.0, 44100), {}).session;
  CHECK(s.status.complete);
  CHECK(s.timings.audio_duration_s == doctest::Approx(1.0));
}

TEST_CASE("class routing into the prompt") {
  auto deps = testsupport::mock_deps();
  auto llm = std::make_shared<RecordingLlm>();
  deps.llm = llm;
  Pipeline pipe(deps);
  const auto clip = testsupport::noise(16000, 16000, 9);

  SessionOptions opts;
  opts.force_class = sir::ImpairmentClass::Healthy;
  auto s = pipe.refine_speech(clip, opts).session;
  REQUIRE(s.status.complete);
  CHECK(s.impairment_forced);
  CHECK(s.impairment->probs[3] == 1.0);
  CHECK(llm->prompts.back().find("Condition:") == std::string::npos);
  CHECK_FALSE(s.prompt_class.has_value());

  opts.force_class = sir::ImpairmentClass::Stutter;
  s = pipe.refine_speech(clip, opts).session;
  CHECK(llm->prompts.back().find("Condition:") != std::string::npos);
  CHECK(s.prompt_class == sir::ImpairmentClass::Stutter);

  opts.use_class_in_prompt = false;
  s = pipe.refine_speech(clip, opts).session;
  CHECK(llm->prompts.back().find("Condition:") == std::string::npos);
  CHECK(s.impairment->label == sir::ImpairmentClass::Stutter);
}

TEST_CASE("constructor validation") {
  auto deps = testsupport::mock_deps();
  deps.tts = nullptr;
  CHECK_THROWS_AS(Pipeline{deps}, Error);
  deps = testsupport::mock_deps();
  deps.dsp.n_mels = 40;
  try {
    Pipeline p(deps);
    FAIL("expected FingerprintMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::FingerprintMismatch);
  }
}

TEST_CASE("sessions are persisted, including failures, and never change") {
  const auto dir = testsupport::scratch_dir("store");
  auto store = std::make_shared<SessionStore>(dir);
  Pipeline pipe(testsupport::mock_deps(), store);
  const auto clip = testsupport::noise(16000, 16000, 11);
  const auto ok = pipe.refine_speech(clip, {});
  const auto bad = pipe.refine_wav(std::vector<std::uint8_t>{1, 2, 3}, {});

  const std::string raw = store->get_raw(ok.session.id);
  CHECK(raw == store->get_raw(ok.session.id));
  CHECK(raw == slurp(dir / (ok.session.id + ".json")));
  CHECK(store->audio(ok.session.id, AudioSlot::Output) == ok.output_wav);
  CHECK(store->audio(ok.session.id, AudioSlot::Input) == audio::encode_wav(clip));

  const auto back = store->get(ok.session.id);
  CHECK(back.status.complete);
  CHECK(*back.refined_text == *ok.session.refined_text);
  CHECK(back.timings.total_s == ok.session.timings.total_s);
  CHECK(back.impairment->probs.isApprox(ok.session.impairment->probs, 1e-15));

  const auto failed = store->get(bad.session.id);
  CHECK(failed.status.failed_stage == Stage::Ingest);
  CHECK_THROWS_AS(store->audio(bad.session.id, AudioSlot::Input), Error);

  CHECK_THROWS_AS(store->put(ok.session, nullptr, nullptr), Error);
  CHECK(store->get_raw(ok.session.id) == raw);
  CHECK(store->list().size() == 2);
  CHECK_THROWS_AS(store->get_raw("../etc/passwd"), Error);
  CHECK_FALSE(store->contains("missing"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("session JSON round trip") {
  Pipeline pipe(testsupport::mock_deps());
  SessionOptions opts;
  opts.style = "calm";
  opts.voice_id = "v1";
  const auto s = pipe.refine_speech(testsupport::noise(16000, 16000, 2), opts).session;
  const auto j = to_json(s);
  CHECK(j["output_audio_ref"] == "/v1/sessions/" + s.id + "/audio/output");
  const auto back = session_from_json(j);
  CHECK(to_json(back) == j);
}

TEST_CASE("latency report examples") {
  RefineSession s;
  s.status.complete = true;
  s.timings[Stage::Asr] = 0.35;
  s.timings[Stage::Refine] = 0.43;
  s.timings[Stage::Tts] = 0.13;
  s.timings.total_s = 0.91;
  s.timings.audio_duration_s = 11.49;
  const std::vector<RefineSession> one{s};
  const auto r = latency_report(one);
  CHECK(r.n_trials == 1);
  CHECK(r.mean_rtf == doctest::Approx(0.0792).epsilon(1e-3));
  CHECK(100.0 * r.share(Stage::Asr) == doctest::Approx(38.5).epsilon(1e-3));
  CHECK(100.0 * r.share(Stage::Refine) == doctest::Approx(47.3).epsilon(1e-3));
  CHECK(r.mean(Stage::Asr) == 0.35);
  CHECK(r.max_total_s == 0.91);

  RefineSession zero;
  zero.status.complete = true;
  zero.timings.total_s = 1e-12;
  zero.timings.audio_duration_s = 1.0;
  const std::vector<RefineSession> z{zero};
  const auto rz = latency_report(z);
  for (auto st : kAllStages) CHECK(rz.share(st) == 0.0);

  RefineSession failed;
  const std::vector<RefineSession> none{failed};
  try {
    latency_report(none);
    FAIL("expected NoCompleteSessions");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NoCompleteSessions);
  }
}

TEST_CASE("latency report fractions sum to at most one and RTF is averaged per session") {
  std::vector<RefineSession> sessions;
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 0.3);
  double rtf_sum = 0.0;
  for (int i = 0; i < 50; ++i) {
    RefineSession s;
    s.status.complete = true;
    double sum = 0.0;
    for (auto st : kAllStages) sum += (s.timings[st] = u(rng));
    s.timings.total_s = sum * 1.01;
    s.timings.audio_duration_s = 1.0 + 10.0 * u(rng);
    rtf_sum += s.timings.rtf();
    sessions.push_back(s);
  }
  const auto r = latency_report(sessions);
  double total = 0.0;
  for (auto st : kAllStages) total += r.share(st);
  CHECK(total <= 1.05);
  CHECK(r.mean_rtf == doctest::Approx(rtf_sum / 50.0).epsilon(1e-12));
}
