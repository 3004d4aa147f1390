// Runs every primary acceptance criterion and prints one PASS/FAIL line each.
// Exit status is the number of failures.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "metric_oracles.hpp"
#include "pipeline_support.hpp"
#include "sir_oracles.hpp"
#include "speechagent/audio/mel.hpp"
#include "speechagent/audio/wav.hpp"
#include "speechagent/bench/corpus.hpp"
#include "speechagent/bench/fixtures.hpp"
#include "speechagent/bench/profile.hpp"
#include "speechagent/bench/speech_eval.hpp"
#include "speechagent/bench/text_eval.hpp"
#include "speechagent/bench/train_cmd.hpp"
#include "speechagent/metrics/text.hpp"
#include "speechagent/pipeline/latency.hpp"
#include "speechagent/pipeline/server.hpp"
#include "speechagent/refine/corrupt.hpp"
#include "speechagent/refine/prompt.hpp"
#include "speechagent/refine/rule_refiner.hpp"
#include "speechagent/sir/evaluate.hpp"
#include "speechagent/util/base64.hpp"
#include "test_support.hpp"

// After Eigen: <resolv.h>, pulled in by httplib, defines a macro named _res.
#include <httplib.h>
#include <json.hpp>

using namespace speechagent;
using nlohmann::json;
using Clock = std::chrono::steady_clock;
using sir::ImpairmentClass;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

int failures = 0;

void criterion(int n, const char* name, double budget_s, const std::function<Verdict()>& fn) {
  const auto t0 = Clock::now();
  Verdict v;
  try {
    v = fn();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double took = seconds_since(t0);
  if (took > budget_s) {
    v.pass = false;
    v.detail += fmt(" [over budget: %.2f s > %.0f s]", took, budget_s);
  }
  if (!v.pass) ++failures;
  std::printf("%s [%d] %s: %s (%.2f s)\n", v.pass ? "PASS" : "FAIL", n, name, v.detail.c_str(), took);
  std::fflush(stdout);
}

audio::AudioClip voiced_clip(double seconds, std::uint64_t seed) {
  auto clip = testsupport::noise(static_cast<Eigen::Index>(seconds * 16000), 16000, seed, 0.05);
  clip.samples += testsupport::sine(180.0, seconds, 16000, 0.3).samples.head(clip.samples.size());
  return clip;
}

// Shared by the classifier and recovery criteria.
struct TrainedFixture {
  std::vector<bench::FixtureItem> items;
  bench::TrainCmdResult result;
  std::shared_ptr<const sir::SirModel> model;
};

const TrainedFixture& trained_fixture() {
  static const TrainedFixture f = [] {
    TrainedFixture t;
    bench::FixtureSpec spec;  // 4 classes x 80 clips
    t.items = bench::make_fixture(spec);
    sir::LabeledDataset data;
    for (const auto& it : t.items) {
      data.items.push_back({audio::log_mel(it.clip, data.dsp), it.entry.class_label, it.entry.sample_id});
    }
    bench::TrainCmdConfig cfg;
    cfg.hyper.epochs = 60;
    t.result = bench::train_sir_cmd(data, cfg);
    t.model = std::make_shared<sir::SirModel>(t.result.train.model);
    return t;
  }();
  return f;
}

// ||a - n|| / max(||a||, ||n||) for one parameter block against central differences.
template <typename M>
double fd_relative_error(M& param, const M& grad, sir::SirParams& p, sir::PoolMode mode,
                         const std::vector<Eigen::MatrixXd>& xs, const std::vector<ImpairmentClass>& ys) {
  const double eps = 1e-5;
  M numeric = grad;
  for (Eigen::Index i = 0; i < param.size(); ++i) {
    const double saved = param.data()[i];
    param.data()[i] = saved + eps;
    const double up = oracle::sir_loss(p, mode, xs, ys);
    param.data()[i] = saved - eps;
    const double down = oracle::sir_loss(p, mode, xs, ys);
    param.data()[i] = saved;
    numeric.data()[i] = (up - down) / (2.0 * eps);
  }
  const double scale = std::max(grad.norm(), numeric.norm());
  return scale > 0.0 ? (grad - numeric).norm() / scale : 0.0;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main() {
  const auto scratch = testsupport::scratch_dir("acceptance");

  criterion(1, "frame rate", 1.0, [] {
    const audio::DspConfig dsp;  // 16 kHz, window 1024, hop 256, centered
    const auto clip = testsupport::sine(440.0, 1.0, 16000);
    audio::log_mel(clip, dsp);  // transform planning happens once per process
    std::vector<double> ms;
    Eigen::Index frames = 0;
    for (int i = 0; i < 21; ++i) {
      const auto t0 = Clock::now();
      frames = audio::log_mel(clip, dsp).values.cols();
      ms.push_back(1e3 * seconds_since(t0));
    }
    std::nth_element(ms.begin(), ms.begin() + 10, ms.end());
    return Verdict{frames == 63 && ms[10] < 1.0,
                   fmt("%ld frames for 1 s at 16 kHz, median %.3f ms over 21 runs", static_cast<long>(frames), ms[10])};
  });

  criterion(2, "RTF arithmetic with the staged mock profile", 30.0, [&] {
    auto deps = testsupport::mock_deps({0.35, 0.43, 0.13});
    deps.model = std::make_shared<sir::SirModel>([] {
      sir::SirModel m;
      m.params = sir::init_params(m.dsp.n_mels, 64, 0.05, 3);
      m.cfg_fingerprint = audio::fingerprint(m.dsp);
      return m;
    }());
    pipeline::Pipeline pipe(deps);
    const auto dir = scratch / "rtf";
    std::filesystem::create_directories(dir);
    bench::ManifestEntry e;
    e.sample_id = "clip-11s";
    e.class_label = ImpairmentClass::Stutter;
    e.audio_path = dir / "clip.wav";
    e.impaired_text = "p-p-play some j-jazz jazz music in the kitchen";
    const auto clip = voiced_clip(11.49, 5);
    audio::save_wav_file(*e.audio_path, clip);

    bench::ProfileConfig cfg;
    cfg.sidecar_from_manifest = true;
    cfg.n_trials = 1;
    bench::profile_latency({e}, cfg, &pipe);  // warm-up, not reported
    cfg.n_trials = 5;
    const auto r = bench::profile_latency({e}, cfg, &pipe).overall;
    const double asr = 100.0 * r.share(pipeline::Stage::Asr);
    const double ref = 100.0 * r.share(pipeline::Stage::Refine);
    const bool ok = r.n_trials == 5 && r.mean_rtf >= 0.075 && r.mean_rtf <= 0.085 && std::abs(asr - 38.5) <= 1.0 &&
                    std::abs(ref - 47.3) <= 1.0;
    return Verdict{ok, fmt("audio %.2f s, mean total %.4f s, RTF %.4f, asr %.2f%%, refine %.2f%%",
                           r.mean_audio_duration_s, r.mean_total_s, r.mean_rtf, asr, ref)};
  });

  criterion(3, "real-time property over REST with pure mocks", 60.0, [] {
    auto pipe = std::make_shared<pipeline::Pipeline>(testsupport::mock_deps());
    pipeline::ServerOptions so;
    so.port = 0;
    pipeline::Server server(pipe, so);
    const int port = server.start();
    httplib::Client client("127.0.0.1", port);
    client.set_read_timeout(60, 0);
    const auto wav = audio::encode_wav(voiced_clip(11.5, 6));
    const auto t0 = Clock::now();
    const auto res = client.Post(
        "/v1/refine", httplib::MultipartFormDataItems{{"audio", std::string(wav.begin(), wav.end()), "a.wav", "audio/wav"}});
    const double wall = seconds_since(t0);
    server.stop();
    if (!res || res->status != 200) return Verdict{false, "request failed"};
    const double rtf = json::parse(res->body)["timings"]["rtf"];
    return Verdict{rtf < 1.0 && wall / 11.5 < 1.0,
                   fmt("server RTF %.4f, client round trip %.3f s (%.4f of audio length)", rtf, wall, wall / 11.5)};
  });

  criterion(4, "classifier property suite", 300.0, [] {
    std::string detail;
    bool ok = true;

    // (a) analytic gradient against central differences on three fixture clips.
    {
      bench::FixtureSpec spec;
      const std::vector<ImpairmentClass> ys = {ImpairmentClass::Stutter, ImpairmentClass::Aphasia,
                                               ImpairmentClass::Dysarthria};
      std::vector<Eigen::MatrixXd> xs;
      const audio::DspConfig dsp;
      for (std::size_t i = 0; i < ys.size(); ++i) {
        auto x = audio::log_mel(bench::synth_impaired_clip(ys[i], 40 + i, spec), dsp).values;
        const Eigen::VectorXd mu = x.rowwise().mean();
        x.colwise() -= mu;
        x /= std::sqrt(x.squaredNorm() / static_cast<double>(x.size()));
        xs.push_back(x.leftCols(24));
      }
      double worst = 0.0;
      for (auto mode : {sir::PoolMode::Mean, sir::PoolMode::Attention}) {
        auto p = sir::init_params(dsp.n_mels, 4, 0.3, 17);
        const auto g = sir::loss_and_gradient(p, mode, xs, ys).grad;
        worst = std::max(worst, fd_relative_error(p.enc_weight, g.enc_weight, p, mode, xs, ys));
        worst = std::max(worst, fd_relative_error(p.enc_bias, g.enc_bias, p, mode, xs, ys));
        worst = std::max(worst, fd_relative_error(p.out_weight, g.out_weight, p, mode, xs, ys));
        worst = std::max(worst, fd_relative_error(p.out_bias, g.out_bias, p, mode, xs, ys));
        if (mode == sir::PoolMode::Attention) {
          worst = std::max(worst, fd_relative_error(p.attn_query, g.attn_query, p, mode, xs, ys));
        }
      }
      ok &= worst <= 1e-4;
      detail += fmt("(a) worst block FD rel. error %.2e", worst);
    }

    // (b) held-out accuracy and AUC on the 320-clip fixture.
    {
      const auto& f = trained_fixture();
      const auto& ev = f.result.eval;
      const double auc = ev.overall_auc.value_or(0.0);
      ok &= f.items.size() == 320 && ev.overall_accuracy >= 0.95 && ev.micro_accuracy >= 0.95 && auc >= 0.99;
      detail += fmt("; (b) %zu clips, held-out n=%zu, accuracy %.3f, AUC %.4f", f.items.size(), ev.n,
                    ev.overall_accuracy, auc);
    }

    // (c) softmax simplex invariants.
    {
      std::mt19937_64 rng(11);
      const double scales[] = {1.0, 10.0, 100.0, 1e3, 1e4};
      std::size_t bad = 0;
      for (int i = 0; i < 100000; ++i) {
        const double s = scales[i % 5];
        std::uniform_real_distribution<double> u(-s, s);
        Eigen::Vector4d z;
        for (int c = 0; c < 4; ++c) z[c] = u(rng);
        if (i % 97 == 0) z[i % 4] = (i % 2 ? 1e4 : -1e4);
        const auto post = sir::posterior_from_logits(z);
        Eigen::Index zmax = 0;
        z.maxCoeff(&zmax);
        const bool valid = post.probs.allFinite() && (post.probs.array() >= 0.0).all() &&
                           (post.probs.array() <= 1.0).all() && std::abs(post.probs.sum() - 1.0) <= 1e-12 &&
                           sir::index_of(post.label) == zmax;
        bad += !valid;
      }
      ok &= bad == 0;
      detail += fmt("; (c) 100000 logit vectors up to 1e4, %zu violations", bad);
    }
    return Verdict{ok, detail};
  });

  criterion(5, "metric oracles", 60.0, [] {
    std::mt19937_64 rng(5);
    const std::vector<std::string> vocab = {"the", "a", "play", "song", "jazz", "book", "table", "rain", "now", "for"};
    std::uniform_int_distribution<std::size_t> word(0, vocab.size() - 1);
    std::uniform_int_distribution<int> len(1, 14);
    double worst = 0.0;
    int nonzero = 0;
    for (int i = 0; i < 50; ++i) {
      std::vector<std::string> ref, cand;
      for (int k = len(rng); k > 0; --k) ref.push_back(vocab[word(rng)]);
      if (i % 2 == 0) {
        cand = ref;  // an edit of the reference
        std::uniform_int_distribution<std::size_t> pos(0, cand.size() - 1);
        cand[pos(rng)] = vocab[word(rng)];
        if (i % 4 == 0) cand.push_back(vocab[word(rng)]);
      } else {
        for (int k = len(rng); k > 0; --k) cand.push_back(vocab[word(rng)]);
      }
      const double got = metrics::bleu(cand, ref);
      const double want = oracle::bleu(cand, ref);
      worst = std::max(worst, std::abs(got - want));
      nonzero += want > 0.0;
    }
    bool auc_ok = true;
    for (int t = 0; t < 20; ++t) {
      std::vector<double> scores(6);
      std::vector<bool> pos(6);
      std::uniform_int_distribution<int> level(0, 3);
      do {
        for (int k = 0; k < 6; ++k) {
          scores[static_cast<std::size_t>(k)] = level(rng) * 0.25;
          pos[static_cast<std::size_t>(k)] = level(rng) >= 2;
        }
      } while (std::count(pos.begin(), pos.end(), true) % 6 == 0);
      bool flags[6];
      for (int k = 0; k < 6; ++k) flags[k] = pos[static_cast<std::size_t>(k)];
      auc_ok &= sir::roc_auc(scores, std::span<const bool>(flags, 6)) == oracle::auc_sweep(scores, pos);
    }
    return Verdict{worst <= 1e-9 && auc_ok && nonzero >= 10,
                   fmt("BLEU max |diff| %.1e over 50 pairs (%d non-zero); AUC %s on 20 tables", worst, nonzero,
                       auc_ok ? "exact" : "MISMATCH")};
  });

  criterion(6, "refinement direction", 120.0, [] {
    const auto corpus = bench::command_corpus();
    std::string detail;
    bool ok = true;
    for (auto cls : sir::kImpairedClasses) {
      double impaired = 0.0, refined = 0.0, impaired_raw = 0.0, refined_raw = 0.0;
      for (std::size_t i = 0; i < 100; ++i) {
        const std::string intent(corpus[i]);
        const auto bad = refine::corrupt_text(intent, cls, bench::corruption_seed(0, std::to_string(i)));
        const auto fixed = refine::rule_refine(bad);
        impaired += metrics::bleu(bad, intent, 4, metrics::Smoothing::AddEpsilon);
        refined += metrics::bleu(fixed, intent, 4, metrics::Smoothing::AddEpsilon);
        impaired_raw += metrics::bleu(bad, intent);
        refined_raw += metrics::bleu(fixed, intent);
      }
      const bool asserted = cls != ImpairmentClass::Dysarthria;
      if (asserted) ok &= refined > impaired && refined_raw > impaired_raw;
      detail += fmt("%s%s %.3f -> %.3f (unsmoothed %.3f -> %.3f)%s", detail.empty() ? "" : "; ",
                    std::string(sir::to_string(cls)).c_str(), impaired / 100, refined / 100, impaired_raw / 100,
                    refined_raw / 100, asserted ? "" : " [reported]");
    }
    return Verdict{ok, detail};
  });

  criterion(7, "recovery baseline", 120.0, [&] {
    const auto& f = trained_fixture();
    const auto manifest = bench::write_fixture(scratch / "fixture", f.items);
    auto deps = testsupport::mock_deps();
    deps.model = f.model;
    pipeline::Pipeline pipe(deps);
    bench::SpeechEvalConfig cfg;
    cfg.sidecar_from_manifest = true;
    const auto r = bench::run_speech_eval(bench::load_manifest(manifest), pipe, cfg);
    bool ok = r.failures == 0 && r.report.rows.size() == 2;
    std::string detail;
    for (auto cls : sir::kImpairedClasses) {
      const auto& imp = r.report.rows[0].cells.at(cls);
      const auto& ref = r.report.rows[1].cells.at(cls);
      ok &= imp.recover == 0.0 && ref.recover == 100.0;
      detail += fmt("%s%s impaired %.1f / refined %.1f (n=%zu)", detail.empty() ? "" : "; ",
                    std::string(sir::to_string(cls)).c_str(), imp.recover.value_or(-1), ref.recover.value_or(-1), imp.n);
    }
    return Verdict{ok, detail};
  });

  criterion(8, "REST contract", 60.0, [&] {
    auto pipe = std::make_shared<pipeline::Pipeline>(testsupport::mock_deps(),
                                                     std::make_shared<pipeline::SessionStore>(scratch / "sessions"));
    pipeline::ServerOptions so;
    so.port = 0;
    pipeline::Server server(pipe, so);
    httplib::Client client("127.0.0.1", server.start());
    client.set_read_timeout(30, 0);
    const auto wav = audio::encode_wav(voiced_clip(2.0, 9));
    auto post = [&](const std::string& body) {
      return client.Post("/v1/refine", httplib::MultipartFormDataItems{{"audio", body, "a.wav", "audio/wav"},
                                                                        {"style", "calm", "", ""}});
    };
    const auto a = post(std::string(wav.begin(), wav.end()));
    const auto b = post(std::string(wav.begin(), wav.end()));
    const auto bad = post("RIF");
    server.stop();
    if (!a || !b || !bad) return Verdict{false, "no response"};

    std::vector<std::string> missing;
    const auto j = json::parse(a->body);
    auto need = [&](bool present, const char* what) {
      if (!present) missing.push_back(what);
    };
    need(a->status == 200, "status 200");
    need(j.contains("session_id") && j["session_id"].is_string(), "session_id");
    need(j.contains("impairment") && j["impairment"]["label"].is_string() &&
             sir::parse_class(j["impairment"]["label"].get<std::string>()).has_value(),
         "impairment.label");
    double psum = 0.0;
    if (j.contains("impairment") && j["impairment"]["probs"].is_array()) {
      for (const auto& p : j["impairment"]["probs"]) psum += p.get<double>();
    }
    need(j["impairment"]["probs"].size() == 4 && std::abs(psum - 1.0) < 1e-9, "impairment.probs[4]");
    need(j["transcript"].is_string(), "transcript");
    need(j["refined_text"].is_string(), "refined_text");
    std::vector<std::uint8_t> audio_bytes;
    if (j["audio_wav_base64"].is_string()) audio_bytes = util::base64_decode(j["audio_wav_base64"].get<std::string>());
    need(!audio_bytes.empty() && audio::load_wav(audio_bytes).sample_rate > 0, "audio_wav_base64");
    for (const char* k : {"ingest_s", "sir_s", "asr_s", "refine_s", "tts_s", "total_s", "rtf"}) {
      need(j["timings"].contains(k) && j["timings"][k].is_number(), k);
    }
    const auto jb = json::parse(b->body);
    const bool identical = b->status == 200 && jb["audio_wav_base64"] == j["audio_wav_base64"];
    const auto jbad = json::parse(bad->body);
    const bool rejected = bad->status == 400 && jbad["error"] == "MalformedContainer" && jbad["stage"] == "ingest";
    std::string m;
    for (const auto& s : missing) m += " " + s;
    return Verdict{missing.empty() && identical && rejected,
                   fmt("fields %s; resubmission audio %s (%zu bytes); 3-byte upload -> %d %s at stage %s",
                       missing.empty() ? "complete" : ("missing:" + m).c_str(), identical ? "byte-identical" : "DIFFERS",
                       audio_bytes.size(), bad->status, jbad.value("error", "?").c_str(), jbad.value("stage", "?").c_str())};
  });

  criterion(9, "prompt fidelity", 5.0, [] {
    const std::filesystem::path golden(SPEECHAGENT_GOLDEN_DIR);
    const auto without = read_file(golden / "template_without_class.txt");
    const auto with = read_file(golden / "template_with_class.txt");
    const std::string input_ph = "[impaired text]", cond_ph = "[impairment description]";
    const auto& t = refine::PromptTemplate::builtin();
    int checked = 0, mismatched = 0;
    std::mt19937_64 rng(9);
    for (std::size_t i = 0; i < 40; ++i) {
      const std::string text(bench::command_corpus()[i]);
      const auto noisy = refine::corrupt_text(text, sir::kImpairedClasses[i % 3], rng());
      for (const auto& input : {text, noisy}) {
        // Without class: the golden text with the input placeholder replaced.
        std::string want = without;
        want.replace(want.find(input_ph), input_ph.size(), input);
        mismatched += refine::build_prompt(input, std::nullopt) != want;
        ++checked;
        for (auto cls : sir::kImpairedClasses) {
          std::string w = with;
          w.replace(w.find(cond_ph), cond_ph.size(), t.conditions.at(cls));
          w.replace(w.find(input_ph), input_ph.size(), input);
          mismatched += refine::build_prompt(input, cls) != w;
          ++checked;
        }
      }
    }
    const bool placeholders = t.render(refine::PromptVariant::WithoutClass, input_ph) == without &&
                              t.render(refine::PromptVariant::WithClass, input_ph, cond_ph) == with;
    int filled = 0;
    filled += refine::build_prompt("hello", std::nullopt) == read_file(golden / "prompt_none_hello.txt");
    filled += refine::build_prompt("b-b-book", ImpairmentClass::Stutter) == read_file(golden / "prompt_stutter.txt");
    filled += refine::build_prompt("um the uh table", ImpairmentClass::Aphasia) == read_file(golden / "prompt_aphasia.txt");
    filled += refine::build_prompt("b-bright sunshhhine... on the oceaan", ImpairmentClass::Dysarthria) ==
              read_file(golden / "prompt_dysarthria.txt");
    return Verdict{placeholders && mismatched == 0 && filled == 4,
                   fmt("templates %s; %d/%d rendered prompts byte-identical outside slots; %d/4 filled golden files",
                       placeholders ? "match" : "DIFFER", checked - mismatched, checked, filled)};
  });

  std::filesystem::remove_all(scratch);
  std::printf("%d criterion(s) failed\n", failures);
  return failures;
}
