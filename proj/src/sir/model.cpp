#include "speechagent/sir/model.hpp"

#include <fstream>

#include "json.hpp"
#include "speechagent/audio/resample.hpp"
#include "speechagent/error.hpp"
#include "speechagent/sir/kernels.hpp"

namespace speechagent::sir {

using nlohmann::json;

namespace {

constexpr const char* kFormatTag = "speechagent-sir-model";
constexpr int kFormatVersion = 1;

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const Eigen::VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows > 0 ? static_cast<Eigen::Index>(j.at(0).size()) : 0;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j.at(static_cast<std::size_t>(r));
    if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw Error(Errc::InvalidArgument, "ragged matrix in model file");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
  }
  return m;
}

Eigen::VectorXd vector_from_json(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

}  // namespace

std::string_view to_string(PoolMode mode) {
  return mode == PoolMode::Mean ? "mean" : "attention";
}

PoolMode parse_pool_mode(std::string_view name) {
  if (name == "mean") return PoolMode::Mean;
  if (name == "attention") return PoolMode::Attention;
  throw Error(Errc::InvalidArgument, "unknown pool mode: " + std::string(name));
}

SirParams SirParams::zeros(Eigen::Index input_width, Eigen::Index hidden) {
  const auto n = static_cast<Eigen::Index>(kNumClasses);
  return SirParams{Eigen::MatrixXd::Zero(hidden, input_width), Eigen::VectorXd::Zero(hidden),
                   Eigen::VectorXd::Zero(hidden), Eigen::MatrixXd::Zero(n, hidden),
                   Eigen::VectorXd::Zero(n)};
}

bool SirParams::all_finite() const {
  return enc_weight.allFinite() && enc_bias.allFinite() && attn_query.allFinite() &&
         out_weight.allFinite() && out_bias.allFinite();
}

Eigen::MatrixXd encode(const Eigen::MatrixXd& frames, const SirModel& model) {
  if (frames.rows() != model.input_width()) {
    throw Error(Errc::DimensionMismatch,
                "spectrogram has " + std::to_string(frames.rows()) + " bands, model expects " +
                    std::to_string(model.input_width()));
  }
  return encode_frames(model.params.enc_weight, model.params.enc_bias, frames);
}

Eigen::MatrixXd encode(const audio::MelSpectrogram& mel, const SirModel& model) {
  return encode(mel.values, model);
}

Eigen::VectorXd pool(const Eigen::MatrixXd& hidden, const SirModel& model) {
  if (hidden.cols() == 0) throw Error(Errc::EmptySequence, "cannot pool zero frames");
  if (model.pool_mode == PoolMode::Mean) return mean_pool(hidden);
  if (model.params.attn_query.size() != hidden.rows()) {
    throw Error(Errc::DimensionMismatch, "attention query width differs from hidden width");
  }
  return attention_pool(hidden, model.params.attn_query);
}

ClassPosterior posterior_from_logits(const Eigen::Vector4d& logits) {
  ClassPosterior post;
  post.logits = logits;
  post.probs = softmax(logits);
  post.label = class_from_index(static_cast<int>(argmax_first(post.probs)));
  return post;
}

ClassPosterior classify(const Eigen::VectorXd& embedding, const SirModel& model) {
  if (embedding.size() != model.params.out_weight.cols()) {
    throw Error(Errc::DimensionMismatch, "embedding width differs from output layer");
  }
  const Eigen::Vector4d logits = model.params.out_weight * embedding + model.params.out_bias;
  return posterior_from_logits(logits);
}

ClassPosterior predict_mel(const audio::MelSpectrogram& mel, const SirModel& model) {
  return classify(pool(encode(mel, model), model), model);
}

ClassPosterior predict(const audio::AudioClip& clip, const SirModel& model,
                       const audio::DspConfig& cfg) {
  audio::validate(clip);
  const double dur = clip.duration_s();
  if (dur < kMinPredictDuration || dur > kMaxPredictDuration) {
    throw Error(Errc::DurationOutOfRange,
                "clip lasts " + std::to_string(dur) + " s; expected 0.2 s to 60 s");
  }
  if (audio::fingerprint(cfg) != model.cfg_fingerprint) {
    throw Error(Errc::FingerprintMismatch, "model was trained with a different DSP configuration");
  }
  if (clip.sample_rate != cfg.target_rate) {
    return predict_mel(audio::log_mel(audio::resample(clip, cfg.target_rate), cfg), model);
  }
  return predict_mel(audio::log_mel(clip, cfg), model);
}

void save_model(const std::filesystem::path& path, const SirModel& model) {
  json j;
  j["format"] = kFormatTag;
  j["version"] = kFormatVersion;
  json order = json::array();
  for (auto c : kAllClasses) order.push_back(std::string(to_string(c)));
  j["class_order"] = order;
  j["hidden"] = model.hidden();
  j["input_width"] = model.input_width();
  j["pool_mode"] = std::string(to_string(model.pool_mode));
  j["dsp"] = {{"target_rate", model.dsp.target_rate}, {"win_size", model.dsp.win_size},
              {"hop_size", model.dsp.hop_size},       {"n_mels", model.dsp.n_mels},
              {"fmin", model.dsp.fmin},               {"fmax", model.dsp.fmax},
              {"log_floor", model.dsp.log_floor}};
  j["cfg_fingerprint"] = model.cfg_fingerprint;
  j["params"] = {{"enc_weight", matrix_to_json(model.params.enc_weight)},
                 {"enc_bias", vector_to_json(model.params.enc_bias)},
                 {"attn_query", vector_to_json(model.params.attn_query)},
                 {"out_weight", matrix_to_json(model.params.out_weight)},
                 {"out_bias", vector_to_json(model.params.out_bias)}};
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(Errc::Io, "cannot write " + path.string());
  out << j.dump(1) << '\n';
}

SirModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::MissingModel, "cannot open model file " + path.string());
  SirModel model;
  try {
    const json j = json::parse(in);
    if (j.at("format").get<std::string>() != kFormatTag) {
      throw Error(Errc::InvalidArgument, "not a classifier model file");
    }
    if (j.at("version").get<int>() != kFormatVersion) {
      throw Error(Errc::InvalidArgument, "unsupported model version");
    }
    const auto order = j.at("class_order").get<std::vector<std::string>>();
    if (order.size() != kNumClasses) throw Error(Errc::InvalidArgument, "bad class order");
    for (std::size_t i = 0; i < kNumClasses; ++i) {
      if (order[i] != to_string(kAllClasses[i])) {
        throw Error(Errc::InvalidArgument, "class order differs from canonical order");
      }
    }
    model.pool_mode = parse_pool_mode(j.at("pool_mode").get<std::string>());
    const auto& d = j.at("dsp");
    model.dsp.target_rate = d.at("target_rate").get<int>();
    model.dsp.win_size = d.at("win_size").get<int>();
    model.dsp.hop_size = d.at("hop_size").get<int>();
    model.dsp.n_mels = d.at("n_mels").get<int>();
    model.dsp.fmin = d.at("fmin").get<double>();
    model.dsp.fmax = d.at("fmax").get<double>();
    model.dsp.log_floor = d.at("log_floor").get<double>();
    model.cfg_fingerprint = j.at("cfg_fingerprint").get<std::string>();
    const auto& p = j.at("params");
    model.params.enc_weight = matrix_from_json(p.at("enc_weight"));
    model.params.enc_bias = vector_from_json(p.at("enc_bias"));
    model.params.attn_query = vector_from_json(p.at("attn_query"));
    model.params.out_weight = matrix_from_json(p.at("out_weight"));
    model.params.out_bias = vector_from_json(p.at("out_bias"));
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidArgument, std::string("malformed model file: ") + e.what());
  }
  if (model.cfg_fingerprint != audio::fingerprint(model.dsp)) {
    throw Error(Errc::FingerprintMismatch, "stored fingerprint does not match stored DSP config");
  }
  const auto d = model.hidden();
  if (model.params.enc_bias.size() != d || model.params.attn_query.size() != d ||
      model.params.out_weight.rows() != static_cast<Eigen::Index>(kNumClasses) ||
      model.params.out_weight.cols() != d ||
      model.params.out_bias.size() != static_cast<Eigen::Index>(kNumClasses) ||
      model.input_width() != model.dsp.n_mels) {
    throw Error(Errc::DimensionMismatch, "model parameter shapes are inconsistent");
  }
  if (!model.params.all_finite()) {
    throw Error(Errc::InvalidArgument, "model contains non-finite parameters");
  }
  return model;
}

SirModel load_model(const std::filesystem::path& path, const audio::DspConfig& expected) {
  SirModel model = load_model(path);
  if (model.cfg_fingerprint != audio::fingerprint(expected)) {
    throw Error(Errc::FingerprintMismatch,
                "model was trained with a different DSP configuration");
  }
  return model;
}

}  // namespace speechagent::sir
