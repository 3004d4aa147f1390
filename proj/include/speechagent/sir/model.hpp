#pragma once

#include <filesystem>
#include <string>

#include <Eigen/Dense>

#include "speechagent/audio/audio_clip.hpp"
#include "speechagent/audio/mel.hpp"
#include "speechagent/sir/impairment.hpp"

namespace speechagent::sir {

enum class PoolMode { Mean, Attention };

std::string_view to_string(PoolMode mode);
PoolMode parse_pool_mode(std::string_view name);

// Trainable parameters. Shapes: enc_weight d x F, enc_bias d, attn_query d,
// out_weight |C| x d, out_bias |C|.
struct SirParams {
  Eigen::MatrixXd enc_weight;
  Eigen::VectorXd enc_bias;
  Eigen::VectorXd attn_query;
  Eigen::MatrixXd out_weight;
  Eigen::VectorXd out_bias;

  static SirParams zeros(Eigen::Index input_width, Eigen::Index hidden);
  bool all_finite() const;
};

struct SirModel {
  SirParams params;
  PoolMode pool_mode = PoolMode::Mean;
  audio::DspConfig dsp;
  std::string cfg_fingerprint;

  Eigen::Index hidden() const { return params.enc_weight.rows(); }
  Eigen::Index input_width() const { return params.enc_weight.cols(); }
};

struct ClassPosterior {
  Eigen::Vector4d probs;
  Eigen::Vector4d logits;
  ImpairmentClass label = ImpairmentClass::Dysarthria;
};

// Frame-level hidden states H (d x T). DimensionMismatch when the
// spectrogram height differs from the model input width.
Eigen::MatrixXd encode(const audio::MelSpectrogram& mel, const SirModel& model);
Eigen::MatrixXd encode(const Eigen::MatrixXd& frames, const SirModel& model);

// Speech-level embedding (d). EmptySequence for T = 0.
Eigen::VectorXd pool(const Eigen::MatrixXd& hidden, const SirModel& model);

// z = W h + b, softmax, argmax with ties to the lowest class index.
ClassPosterior classify(const Eigen::VectorXd& embedding, const SirModel& model);
ClassPosterior posterior_from_logits(const Eigen::Vector4d& logits);

ClassPosterior predict_mel(const audio::MelSpectrogram& mel, const SirModel& model);

inline constexpr double kMinPredictDuration = 0.2;
inline constexpr double kMaxPredictDuration = 60.0;

// log_mel -> encode -> pool -> classify. Clips at another rate are resampled
// to cfg.target_rate first. Errors: DurationOutOfRange outside [0.2 s, 60 s],
// FingerprintMismatch when cfg differs from the training configuration.
ClassPosterior predict(const audio::AudioClip& clip, const SirModel& model,
                       const audio::DspConfig& cfg);

// Versioned JSON: format tag, class order, pool mode, DSP config,
// fingerprint, parameters.
void save_model(const std::filesystem::path& path, const SirModel& model);
SirModel load_model(const std::filesystem::path& path);
// Also rejects a model whose training configuration differs from `expected`.
SirModel load_model(const std::filesystem::path& path, const audio::DspConfig& expected);

}  // namespace speechagent::sir
