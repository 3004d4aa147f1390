#include "speechagent/bench/speech_eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "speechagent/audio/wav.hpp"
#include "speechagent/bench/parallel.hpp"
#include "speechagent/metrics/recovery.hpp"

namespace speechagent::bench {

std::string clarity_question() {
  return "Clarity (1-5): how clear is this recording overall? Consider how it sounds "
         "(pronunciation, fluency, ease of listening) and what it says (whether the sentences "
         "hang together and the speaker's intent comes across).\n"
         "  1 = very unclear: hard to follow, meaning lost\n"
         "  2 = somewhat unclear: understandable only with real effort\n"
         "  3 = moderately clear: understandable, with rough spots\n"
         "  4 = clear: well articulated, intent easy to follow\n"
         "  5 = very clear: fluent and natural, intent obvious";
}

std::string cmos_question() {
  return "C-MOS (-3 to +3): listen to sample A, then sample B, and rate B relative to A.\n"
         "  -3 = B much worse   -2 = B moderately worse   -1 = B slightly worse\n"
         "   0 = no noticeable difference\n"
         "  +1 = B slightly better   +2 = B moderately better   +3 = B much better";
}

namespace {

const std::string kSpeechAgentRow = "SpeechAgent";

struct Outcome {
  bool ok = false;
  sir::ImpairmentClass impaired_pred = sir::ImpairmentClass::Healthy;
  sir::ImpairmentClass refined_pred = sir::ImpairmentClass::Healthy;
  std::vector<std::uint8_t> input_wav, output_wav;
  pipeline::RefineSession session;
};

std::optional<double> parse_score(const std::string& cell, double lo, double hi, const std::string& where) {
  if (cell.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end == cell.c_str() || *end != '\0' || !(v >= lo && v <= hi)) {
    throw Error(Errc::ManifestInvalid, where + ": score '" + cell + "' outside [" + std::to_string(lo) + ", " +
                                           std::to_string(hi) + "]");
  }
  return v;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

}  // namespace

SpeechEvalResult run_speech_eval(const std::vector<ManifestEntry>& entries, const pipeline::Pipeline& pipe,
                                 const SpeechEvalConfig& cfg) {
  const auto& model = pipe.deps().model;
  if (!model) throw Error(Errc::MissingModel, "speech evaluation needs a trained classifier");
  std::vector<const ManifestEntry*> usable;
  for (const auto& e : entries) {
    if (!e.audio_path) throw Error(Errc::ManifestInvalid, "entry " + e.sample_id + " has no audio_path");
    if (e.class_label != sir::ImpairmentClass::Healthy) usable.push_back(&e);
  }

  std::vector<Outcome> out(usable.size());
  parallel_for(usable.size(), cfg.workers, [&](std::size_t i) {
    const auto& e = *usable[i];
    auto& o = out[i];
    const auto clip = audio::load_wav_file(*e.audio_path);
    o.impaired_pred = sir::predict(clip, *model, pipe.deps().dsp).label;
    pipeline::SessionOptions opts;
    opts.style = cfg.style;
    opts.use_class_in_prompt = cfg.use_class_in_prompt;
    backends::RequestContext ctx;
    if (cfg.sidecar_from_manifest && e.impaired_text) ctx.sidecar_transcript = *e.impaired_text;
    auto r = pipe.refine_speech(clip, opts, ctx);
    o.session = r.session;
    if (!r.session.status.complete) return;
    o.refined_pred = sir::predict(audio::load_wav(r.output_wav), *model, pipe.deps().dsp).label;
    o.input_wav = audio::encode_wav(clip);
    o.output_wav = std::move(r.output_wav);
    o.ok = true;
  });

  SpeechEvalResult result;
  std::map<sir::ImpairmentClass, std::vector<sir::ImpairmentClass>> impaired_preds, refined_preds;
  std::vector<std::size_t> good;
  for (std::size_t i = 0; i < usable.size(); ++i) {
    result.sessions.push_back(out[i].session);
    if (!out[i].ok) {
      ++result.failures;
      continue;
    }
    impaired_preds[usable[i]->class_label].push_back(out[i].impaired_pred);
    refined_preds[usable[i]->class_label].push_back(out[i].refined_pred);
    good.push_back(i);
  }

  metrics::SpeechRow impaired_row{"Impaired", {}}, agent_row{kSpeechAgentRow, {}};
  for (const auto& [cls, preds] : impaired_preds) {
    const auto rec = metrics::recovery_from_labels(preds);
    impaired_row.cells[cls].recover = rec.rate_percent;
    impaired_row.cells[cls].n = rec.n_total;
    const auto rrec = metrics::recovery_from_labels(refined_preds[cls]);
    agent_row.cells[cls].recover = rrec.rate_percent;
    agent_row.cells[cls].n = rrec.n_total;
  }
  result.report.rows = {impaired_row, agent_row};

  // Blinded listening pairs.
  std::mt19937_64 rng(cfg.seed);
  std::shuffle(good.begin(), good.end(), rng);
  std::bernoulli_distribution coin(0.5);
  nlohmann::json items = nlohmann::json::array(), key_pairs = nlohmann::json::array();
  for (std::size_t k = 0; k < good.size(); ++k) {
    const std::size_t i = good[k];
    char id[24];
    std::snprintf(id, sizeof id, "p%03zu", k + 1);
    ListeningPair p{id, usable[i]->sample_id, usable[i]->class_label, coin(rng)};
    result.pairs.push_back(p);
    items.push_back({{"pair_id", p.pair_id},
                     {"a", "clips/" + p.pair_id + "-A.wav"},
                     {"b", "clips/" + p.pair_id + "-B.wav"}});
    key_pairs.push_back({{"pair_id", p.pair_id},
                         {"sample_id", p.sample_id},
                         {"class_label", sir::to_string(p.cls)},
                         {"a", p.refined_is_b ? "impaired" : "refined"},
                         {"b", p.refined_is_b ? "refined" : "impaired"},
                         {"session_id", out[i].session.id}});
    if (!cfg.listening_dir.empty()) {
      const auto clips = cfg.listening_dir / "clips";
      std::filesystem::create_directories(clips);
      auto write = [](const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        if (!f) throw Error(Errc::Io, "cannot write " + path.string());
      };
      write(clips / (p.pair_id + "-A.wav"), p.refined_is_b ? out[i].input_wav : out[i].output_wav);
      write(clips / (p.pair_id + "-B.wav"), p.refined_is_b ? out[i].output_wav : out[i].input_wav);
    }
  }
  result.rater_manifest = {
      {"instructions",
       "Each item has two recordings, A and B. Rate the clarity of each recording, then rate B against A."},
      {"questions", {{"clarity", clarity_question()}, {"cmos", cmos_question()}}},
      {"rating_csv_header", "blinded_id,clarity,cmos"},
      {"items", items}};
  result.key = {{"seed", cfg.seed}, {"pairs", key_pairs}};

  result.report.run_config = {{"seed", cfg.seed},
                              {"use_class_in_prompt", cfg.use_class_in_prompt},
                              {"style", cfg.style},
                              {"sidecar_from_manifest", cfg.sidecar_from_manifest},
                              {"workers", cfg.workers},
                              {"n_entries", usable.size()},
                              {"failures", result.failures},
                              {"backend_ids",
                               {{"asr", pipe.deps().asr->id()},
                                {"llm", pipe.deps().llm->id()},
                                {"tts", pipe.deps().tts->id()}}},
                              {"model_fingerprint", model->cfg_fingerprint}};
  return result;
}

void ingest_ratings(std::istream& csv, const nlohmann::json& key, metrics::SpeechReport& report) {
  struct PairInfo {
    sir::ImpairmentClass cls;
    bool refined_is_b;
  };
  std::map<std::string, PairInfo> pairs;
  for (const auto& p : key.at("pairs")) {
    const auto cls = sir::parse_class(p.at("class_label").get<std::string>());
    if (!cls) throw Error(Errc::ManifestInvalid, "listening key has an unknown class");
    pairs[p.at("pair_id").get<std::string>()] = {*cls, p.at("b").get<std::string>() == "refined"};
  }

  std::map<sir::ImpairmentClass, std::vector<double>> clarity_imp, clarity_ref, cmos_ref;
  std::string line;
  std::size_t n = 0;
  if (!std::getline(csv, line) || trim(line) != "blinded_id,clarity,cmos") {
    throw Error(Errc::ManifestInvalid, "ratings must start with the header blinded_id,clarity,cmos");
  }
  while (std::getline(csv, line)) {
    ++n;
    if (trim(line).empty()) continue;
    const auto where = "ratings row " + std::to_string(n);
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(trim(cell));
    if (line.back() == ',') cells.emplace_back();
    if (cells.size() != 3) throw Error(Errc::ManifestInvalid, where + ": expected 3 columns");
    const auto& id = cells[0];
    const auto dash = id.rfind('-');
    const auto it = dash == std::string::npos ? pairs.end() : pairs.find(id.substr(0, dash));
    const std::string side = dash == std::string::npos ? "" : id.substr(dash + 1);
    if (it == pairs.end() || (side != "A" && side != "B")) {
      throw Error(Errc::ManifestInvalid, where + ": unknown blinded id '" + id + "'");
    }
    const auto& info = it->second;
    if (const auto c = parse_score(cells[1], 1.0, 5.0, where)) {
      const bool is_refined = (side == "B") == info.refined_is_b;
      (is_refined ? clarity_ref : clarity_imp)[info.cls].push_back(*c);
    }
    if (const auto m = parse_score(cells[2], -3.0, 3.0, where)) {
      cmos_ref[info.cls].push_back(info.refined_is_b ? *m : -*m);
    }
  }

  auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  for (auto& row : report.rows) {
    const bool refined = row.method != "Impaired";
    for (auto& [cls, cell] : row.cells) {
      const auto& clar = refined ? clarity_ref : clarity_imp;
      if (auto f = clar.find(cls); f != clar.end() && !f->second.empty()) cell.clarity = mean(f->second);
      if (refined) {
        if (auto f = cmos_ref.find(cls); f != cmos_ref.end() && !f->second.empty()) cell.cmos = mean(f->second);
      }
    }
  }
  report.run_config["ratings_rows"] = n;
}

void write_listening_materials(const SpeechEvalResult& result, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir / "listening");
  auto dump = [](const std::filesystem::path& p, const nlohmann::json& j) {
    std::ofstream f(p, std::ios::trunc);
    f << j.dump(2) << '\n';
    if (!f) throw Error(Errc::Io, "cannot write " + p.string());
  };
  dump(out_dir / "listening" / "manifest.json", result.rater_manifest);
  dump(out_dir / "listening_key.json", result.key);
}

}  // namespace speechagent::bench
