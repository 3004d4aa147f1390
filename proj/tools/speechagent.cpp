#include <csignal>
#include <fstream>
#include <iostream>

#include <spdlog/spdlog.h>

#include "speechagent/bench/fixtures.hpp"
#include "speechagent/bench/manifest.hpp"
#include "speechagent/bench/profile.hpp"
#include "speechagent/bench/speech_eval.hpp"
#include "speechagent/bench/text_eval.hpp"
#include "speechagent/bench/train_cmd.hpp"
#include "speechagent/metrics/report.hpp"
#include "speechagent/pipeline/config.hpp"
#include "speechagent/pipeline/server.hpp"

#include <CLI11.hpp>

namespace fs = std::filesystem;
using namespace speechagent;
using nlohmann::json;

namespace {

struct Globals {
  std::string config_path;
  std::uint64_t seed = 0;
  std::string out = "out";
  int workers = 1;
  std::string log_level = "info";
};

pipeline::ServiceConfig service_config(const Globals& g) {
  auto cfg = g.config_path.empty() ? pipeline::ServiceConfig{} : pipeline::load_config(g.config_path);
  pipeline::apply_env_overrides(cfg);
  return cfg;
}

void write_text(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::trunc);
  f << text;
  if (!f) throw Error(Errc::Io, "cannot write " + path.string());
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

json read_json(const fs::path& path) {
  std::ifstream f(path);
  if (!f) throw Error(Errc::Io, "cannot read " + path.string());
  return json::parse(f);
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

pipeline::Server* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Speech refinement service and evaluation bench"};
  app.fallthrough();  // global options are also accepted after the verb
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_path, "Service configuration JSON")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Base seed");
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--workers", g.workers, "Parallel workers for per-entry work")->check(CLI::PositiveNumber);
  app.add_option("--log-level", g.log_level, "trace, debug, info, warn, error or off");

  // gen-fixtures
  auto* gen = app.add_subcommand("gen-fixtures", "Write the synthetic four-class fixture");
  int per_class = 80;
  gen->add_option("--per-class", per_class, "Clips per class")->check(CLI::PositiveNumber);

  // train-sir
  auto* train = app.add_subcommand("train-sir", "Train and evaluate the impairment classifier");
  std::string manifest_path;
  bench::TrainCmdConfig tcfg;
  std::string pool = "mean";
  train->add_option("--manifest", manifest_path, "JSON-lines manifest")->required()->check(CLI::ExistingFile);
  train->add_option("--hidden", tcfg.hyper.hidden, "Encoder width");
  train->add_option("--epochs", tcfg.hyper.epochs, "Training epochs");
  train->add_option("--lr", tcfg.hyper.lr, "Learning rate");
  train->add_option("--batch", tcfg.hyper.batch, "Mini-batch size");
  train->add_option("--pool", pool, "mean or attention");
  train->add_option("--test-fraction", tcfg.test_fraction, "Held-out share per class");
  train->add_option("--min-per-class", tcfg.min_per_class, "Smallest accepted class size");

  // eval-text
  auto* etext = app.add_subcommand("eval-text", "Text refinement table (BLEU, cosine) over seeds");
  std::string variants = "rule,with_class,without_class";
  int n_seeds = 5;
  bool no_smoothing = false;
  etext->add_option("--manifest", manifest_path, "JSON-lines manifest")->required()->check(CLI::ExistingFile);
  etext->add_option("--variants", variants, "Comma-separated: rule, with_class, without_class");
  etext->add_option("--seeds", n_seeds, "Number of runs; seeds are seed..seed+n-1")->check(CLI::PositiveNumber);
  etext->add_flag("--no-smoothing", no_smoothing, "Plain BLEU (zero when any n-gram order has no match)");

  // eval-speech
  auto* espeech = app.add_subcommand("eval-speech", "Speech refinement table and listening-test materials");
  std::string model_path, ratings_path, key_path, report_path;
  bool no_class = false, sidecar = false;
  std::string style;
  espeech->add_option("--manifest", manifest_path, "JSON-lines manifest")->check(CLI::ExistingFile);
  espeech->add_option("--model", model_path, "Classifier (overrides the config)")->check(CLI::ExistingFile);
  espeech->add_flag("--no-class", no_class, "Refine without the class condition");
  espeech->add_flag("--sidecar", sidecar, "Use manifest impaired_text as the transcript (mock recognizer)");
  espeech->add_option("--style", style, "Style description passed to the synthesizer");
  espeech->add_option("--ratings", ratings_path, "Completed rating CSV to fold into an existing report")
      ->check(CLI::ExistingFile);
  espeech->add_option("--key", key_path, "listening_key.json for --ratings")->check(CLI::ExistingFile);
  espeech->add_option("--report", report_path, "speech_report.json for --ratings")->check(CLI::ExistingFile);

  // profile
  auto* prof = app.add_subcommand("profile", "Per-stage latency and real-time factor");
  bench::ProfileConfig pcfg;
  int limit = 0;
  prof->add_option("--manifest", manifest_path, "JSON-lines manifest")->required()->check(CLI::ExistingFile);
  prof->add_option("--trials", pcfg.n_trials, "Requests per entry")->check(CLI::PositiveNumber);
  prof->add_option("--url", pcfg.url, "Remote server base URL (default: in process)");
  prof->add_option("--limit", limit, "Use only the first N entries with audio");
  prof->add_flag("--sidecar", pcfg.sidecar_from_manifest, "Send manifest impaired_text as the transcript");
  prof->add_option("--model", model_path, "Classifier (overrides the config)")->check(CLI::ExistingFile);

  // serve
  auto* serve = app.add_subcommand("serve", "Run the REST service");
  std::string host;
  int port = -1;
  serve->add_option("--host", host, "Listen address (overrides the config)");
  serve->add_option("--port", port, "Listen port (overrides the config)");
  serve->add_option("--model", model_path, "Classifier (overrides the config)")->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);
  spdlog::set_level(spdlog::level::from_str(g.log_level));
  const fs::path out(g.out);

  try {
    if (*gen) {
      bench::FixtureSpec spec;
      spec.per_class = per_class;
      spec.seed = g.seed;
      const auto manifest = bench::write_fixture(out, bench::make_fixture(spec));
      std::cout << "wrote " << 4 * per_class << " clips; manifest " << manifest.string() << "\n";
      return 0;
    }

    if (*train) {
      auto cfg = service_config(g);
      tcfg.dsp = cfg.dsp;
      tcfg.hyper.pool_mode = sir::parse_pool_mode(pool);
      tcfg.hyper.seed = g.seed;
      tcfg.split_seed = g.seed;
      tcfg.workers = g.workers;
      const auto entries = bench::load_manifest(manifest_path);
      const auto r = bench::train_sir_cmd(entries, tcfg);
      fs::create_directories(out);
      sir::save_model(out / "model.json", r.train.model);
      json report = {{"metrics", metrics::to_json(r.eval)},
                     {"run_config", r.run_config},
                     {"manifest", manifest_path},
                     {"initial_loss", r.train.initial_loss},
                     {"final_loss", r.train.final_loss}};
      write_json(out / "sir_report.json", report);
      const auto table = metrics::to_text(r.eval, std::string("encoder-") + std::string(sir::to_string(tcfg.hyper.pool_mode)));
      write_text(out / "sir_table.txt", table);
      std::cout << table;
      return 0;
    }

    if (*etext) {
      auto cfg = service_config(g);
      bench::EvalRunConfig ecfg;
      ecfg.seeds.clear();
      for (int i = 0; i < n_seeds; ++i) ecfg.seeds.push_back(g.seed + static_cast<std::uint64_t>(i));
      ecfg.variants.clear();
      for (const auto& v : split_csv(variants)) ecfg.variants.push_back(bench::parse_variant(v));
      if (no_smoothing) ecfg.smoothing = metrics::Smoothing::None;
      ecfg.completion = cfg.completion;
      ecfg.workers = g.workers;
      ecfg.backends = {{"llm", pipeline::to_json(cfg.llm)}, {"embedder", pipeline::to_json(cfg.embedder)}};
      ecfg.validate();
      const auto entries = bench::load_manifest(manifest_path);
      const auto llm = backends::make_llm(cfg.llm);
      const auto embedder = backends::make_embedder(cfg.embedder);
      auto report = bench::run_text_eval(entries, ecfg, llm.get(), *embedder);
      report.run_config["manifest"] = manifest_path;
      write_json(out / "text_report.json", metrics::to_json(report));
      const auto table = metrics::to_text(report);
      write_text(out / "text_table.txt", table);
      std::cout << table;
      return 0;
    }

    if (*espeech) {
      if (!ratings_path.empty()) {
        if (key_path.empty() || report_path.empty()) {
          throw Error(Errc::InvalidArgument, "--ratings needs --key and --report");
        }
        const auto rj = read_json(report_path);
        metrics::SpeechReport report;
        report.run_config = rj.value("run_config", json::object());
        for (const auto& row : rj.at("rows")) {
          metrics::SpeechRow r{row.at("method").get<std::string>(), {}};
          for (const auto& [name, cell] : row.at("cells").items()) {
            const auto cls = sir::parse_class(name);
            if (!cls) continue;
            metrics::SpeechCell c;
            if (cell.contains("recover") && !cell["recover"].is_null()) c.recover = cell["recover"].get<double>();
            c.n = cell.value("n", std::size_t{0});
            r.cells[*cls] = c;
          }
          report.rows.push_back(r);
        }
        std::ifstream csv(ratings_path);
        bench::ingest_ratings(csv, read_json(key_path), report);
        write_json(out / "speech_report_rated.json", metrics::to_json(report));
        const auto table = metrics::to_text(report);
        write_text(out / "speech_table_rated.txt", table);
        std::cout << table;
        return 0;
      }
      if (manifest_path.empty()) throw Error(Errc::InvalidArgument, "--manifest is required");
      auto cfg = service_config(g);
      if (!model_path.empty()) cfg.model_path = model_path;
      if (cfg.model_path.empty()) throw Error(Errc::MissingModel, "pass --model or set model_path in the config");
      cfg.session_dir = (out / "sessions").string();
      const auto pipe = pipeline::build_pipeline(cfg);
      bench::SpeechEvalConfig scfg;
      scfg.seed = g.seed;
      scfg.use_class_in_prompt = !no_class;
      scfg.style = style;
      scfg.sidecar_from_manifest = sidecar;
      scfg.workers = g.workers;
      scfg.listening_dir = out / "listening";
      const auto entries = bench::load_manifest(manifest_path);
      auto result = bench::run_speech_eval(entries, *pipe, scfg);
      result.report.run_config["manifest"] = manifest_path;
      result.report.run_config["service_config"] = pipeline::to_json(cfg);
      bench::write_listening_materials(result, out);
      write_json(out / "speech_report.json", metrics::to_json(result.report));
      const auto table = metrics::to_text(result.report);
      write_text(out / "speech_table.txt", table);
      std::cout << table;
      if (result.failures > 0) std::cout << result.failures << " entries failed; see " << (out / "sessions") << "\n";
      return 0;
    }

    if (*prof) {
      auto cfg = service_config(g);
      if (!model_path.empty()) cfg.model_path = model_path;
      auto entries = bench::load_manifest(manifest_path);
      std::erase_if(entries, [](const bench::ManifestEntry& e) { return !e.audio_path; });
      if (limit > 0 && entries.size() > static_cast<std::size_t>(limit)) entries.resize(static_cast<std::size_t>(limit));
      std::shared_ptr<pipeline::Pipeline> pipe;
      if (pcfg.url.empty()) {
        cfg.session_dir.clear();
        pipe = pipeline::build_pipeline(cfg);
      } else if (!cfg.api_token_env.empty()) {
        if (const char* tok = std::getenv(cfg.api_token_env.c_str())) pcfg.api_token = tok;
      }
      const auto r = bench::profile_latency(entries, pcfg, pipe.get());
      bench::write_profile_csv(r, out);
      json j = pipeline::to_json(r.overall);
      j["failures"] = r.failures;
      j["run_config"] = {{"n_trials", pcfg.n_trials},
                         {"url", pcfg.url},
                         {"entries", entries.size()},
                         {"manifest", manifest_path},
                         {"service_config", pipeline::to_json(cfg)}};
      for (const auto& [llm, rep] : r.by_llm) j["by_llm"][llm] = pipeline::to_json(rep);
      write_json(out / "latency_report.json", j);
      std::printf("trials %zu  mean total %.3f s  mean RTF %.4f\n", r.overall.n_trials, r.overall.mean_total_s,
                  r.overall.mean_rtf);
      for (auto st : pipeline::kAllStages) {
        std::printf("  %-8s %8.4f s  %5.1f%%\n", std::string(pipeline::to_string(st)).c_str(), r.overall.mean(st),
                    100.0 * r.overall.share(st));
      }
      return 0;
    }

    if (*serve) {
      auto cfg = service_config(g);
      if (!model_path.empty()) cfg.model_path = model_path;
      if (!host.empty()) cfg.host = host;
      if (port >= 0) cfg.port = port;
      pipeline::ServerOptions so;
      so.host = cfg.host;
      so.port = cfg.port;
      so.threads = cfg.threads;
      so.allow_sidecar = cfg.allow_sidecar;
      so.max_upload_bytes = cfg.max_upload_bytes;
      if (!cfg.api_token_env.empty()) {
        const char* tok = std::getenv(cfg.api_token_env.c_str());
        if (!tok || !*tok) throw Error(Errc::ConfigInvalid, cfg.api_token_env + " is not set");
        so.api_token = tok;
      }
      pipeline::Server server(pipeline::build_pipeline(cfg), so);
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      server.listen();
      g_server = nullptr;
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
