#include "speechagent/sir/train.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>

#include "speechagent/error.hpp"
#include "speechagent/sir/kernels.hpp"

namespace speechagent::sir {

namespace {

struct Forward {
  Eigen::MatrixXd hidden;   // d x T
  Eigen::VectorXd weights;  // attention weights (T); empty in mean mode
  Eigen::VectorXd embedding;
  Eigen::Vector4d logits;
};

Forward forward(const SirParams& p, PoolMode mode, const Eigen::MatrixXd& frames) {
  Forward f;
  f.hidden = encode_frames(p.enc_weight, p.enc_bias, frames);
  if (mode == PoolMode::Mean) {
    f.embedding = mean_pool(f.hidden);
  } else {
    f.weights = attention_weights(f.hidden, p.attn_query);
    f.embedding = f.hidden * f.weights;
  }
  f.logits = p.out_weight * f.embedding + p.out_bias;
  return f;
}

double cross_entropy(const Eigen::Vector4d& logits, int label) {
  const double peak = logits.maxCoeff();
  const double lse = peak + std::log((logits.array() - peak).exp().sum());
  return lse - logits[label];
}

void check_examples(std::span<const Eigen::MatrixXd> frames,
                    std::span<const ImpairmentClass> labels, Eigen::Index width) {
  if (frames.size() != labels.size()) {
    throw Error(Errc::DimensionMismatch, "frames and labels differ in length");
  }
  if (frames.empty()) throw Error(Errc::EmptyDataset, "no training examples");
  for (const auto& x : frames) {
    if (x.rows() != width) {
      throw Error(Errc::DimensionMismatch, "example height differs from encoder input width");
    }
    if (x.cols() == 0) throw Error(Errc::EmptySequence, "example has no frames");
  }
}

void accumulate(const SirParams& p, PoolMode mode, const Eigen::MatrixXd& x, int label,
                SirParams& g, double& loss) {
  const Forward f = forward(p, mode, x);
  loss += cross_entropy(f.logits, label);

  Eigen::Vector4d g_logits = softmax(f.logits);
  g_logits[label] -= 1.0;
  g.out_weight.noalias() += g_logits * f.embedding.transpose();
  g.out_bias += g_logits;

  const Eigen::VectorXd g_embed = p.out_weight.transpose() * g_logits;
  Eigen::MatrixXd g_hidden;
  if (mode == PoolMode::Mean) {
    const auto frames = static_cast<double>(f.hidden.cols());
    g_hidden = (g_embed / frames).replicate(1, f.hidden.cols());
  } else {
    const Eigen::VectorXd g_weights = f.hidden.transpose() * g_embed;
    const double centre = f.weights.dot(g_weights);
    const Eigen::VectorXd g_scores =
        (f.weights.array() * (g_weights.array() - centre)).matrix();
    g_hidden = g_embed * f.weights.transpose() + p.attn_query * g_scores.transpose();
    g.attn_query.noalias() += f.hidden * g_scores;
  }

  const Eigen::MatrixXd g_pre =
      (g_hidden.array() * (1.0 - f.hidden.array().square())).matrix();
  g.enc_weight.noalias() += g_pre * x.transpose();
  g.enc_bias += g_pre.rowwise().sum();
}

void scale(SirParams& g, double s) {
  g.enc_weight *= s;
  g.enc_bias *= s;
  g.attn_query *= s;
  g.out_weight *= s;
  g.out_bias *= s;
}

void step(SirParams& p, const SirParams& g, double lr) {
  p.enc_weight -= lr * g.enc_weight;
  p.enc_bias -= lr * g.enc_bias;
  p.attn_query -= lr * g.attn_query;
  p.out_weight -= lr * g.out_weight;
  p.out_bias -= lr * g.out_bias;
}

}  // namespace

LossGradient loss_and_gradient(const SirParams& params, PoolMode mode,
                               std::span<const Eigen::MatrixXd> frames,
                               std::span<const ImpairmentClass> labels) {
  check_examples(frames, labels, params.enc_weight.cols());
  LossGradient out;
  out.grad = SirParams::zeros(params.enc_weight.cols(), params.enc_weight.rows());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    accumulate(params, mode, frames[i], index_of(labels[i]), out.grad, out.loss);
  }
  const double inv = 1.0 / static_cast<double>(frames.size());
  out.loss *= inv;
  scale(out.grad, inv);
  return out;
}

double mean_loss(const SirParams& params, PoolMode mode, std::span<const Eigen::MatrixXd> frames,
                 std::span<const ImpairmentClass> labels) {
  check_examples(frames, labels, params.enc_weight.cols());
  double loss = 0.0;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    loss += cross_entropy(forward(params, mode, frames[i]).logits, index_of(labels[i]));
  }
  return loss / static_cast<double>(frames.size());
}

SirParams init_params(Eigen::Index input_width, Eigen::Index hidden, double scale_,
                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-scale_, scale_);
  auto fill = [&](auto& m) {
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = dist(rng);
  };
  SirParams p = SirParams::zeros(input_width, hidden);
  fill(p.enc_weight);
  fill(p.enc_bias);
  fill(p.attn_query);
  fill(p.out_weight);
  fill(p.out_bias);
  return p;
}

TrainResult train(const LabeledDataset& data, const TrainHyper& hyper) {
  if (hyper.hidden < 1 || !(hyper.lr > 0.0) || hyper.epochs < 1 || hyper.batch < 1 ||
      !(hyper.init_scale >= 0.0)) {
    throw Error(Errc::InvalidArgument, "invalid training hyper-parameters");
  }
  audio::validate(data.dsp);
  std::array<int, kNumClasses> counts{};
  for (const auto& item : data.items) ++counts[static_cast<std::size_t>(index_of(item.label))];
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    if (counts[c] < 2) {
      throw Error(Errc::InsufficientData,
                  "class " + std::string(to_string(kAllClasses[c])) + " has " +
                      std::to_string(counts[c]) + " items; need at least 2");
    }
  }

  const Eigen::Index width = data.dsp.n_mels;
  std::vector<Eigen::MatrixXd> frames;
  std::vector<ImpairmentClass> labels;
  frames.reserve(data.items.size());
  labels.reserve(data.items.size());
  for (const auto& item : data.items) {
    if (item.mel.n_mels() != width) {
      throw Error(Errc::DimensionMismatch, "item " + item.id + " has the wrong number of bands");
    }
    frames.push_back(item.mel.values);
    labels.push_back(item.label);
  }

  // Per-band standardisation statistics over every training frame.
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(width);
  Eigen::VectorXd inv_std = Eigen::VectorXd::Ones(width);
  if (hyper.standardize) {
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(width);
    Eigen::VectorXd sum_sq = Eigen::VectorXd::Zero(width);
    double n = 0.0;
    for (const auto& x : frames) {
      sum += x.rowwise().sum();
      sum_sq += x.array().square().matrix().rowwise().sum();
      n += static_cast<double>(x.cols());
    }
    mean = sum / n;
    for (Eigen::Index f = 0; f < width; ++f) {
      const double var = std::max(0.0, sum_sq[f] / n - mean[f] * mean[f]);
      const double sd = std::sqrt(var);
      inv_std[f] = sd > 1e-6 ? 1.0 / sd : 1.0;
    }
    for (auto& x : frames) {
      x.colwise() -= mean;
      x = inv_std.asDiagonal() * x;
    }
  }

  SirParams params = init_params(width, hyper.hidden, hyper.init_scale, hyper.seed);
  TrainResult result;
  result.initial_loss = mean_loss(params, hyper.pool_mode, frames, labels);

  std::mt19937_64 shuffle_rng(hyper.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<std::size_t> order(frames.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<Eigen::MatrixXd> batch_frames;
  std::vector<ImpairmentClass> batch_labels;

  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double epoch_loss = 0.0;
    std::size_t seen = 0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(hyper.batch)) {
      const std::size_t stop = std::min(order.size(), start + static_cast<std::size_t>(hyper.batch));
      batch_frames.clear();
      batch_labels.clear();
      for (std::size_t i = start; i < stop; ++i) {
        batch_frames.push_back(frames[order[i]]);
        batch_labels.push_back(labels[order[i]]);
      }
      const LossGradient lg =
          loss_and_gradient(params, hyper.pool_mode, batch_frames, batch_labels);
      if (!std::isfinite(lg.loss) || !lg.grad.all_finite()) {
        throw Error(Errc::Divergence, "loss became non-finite at epoch " +
                                          std::to_string(epoch) + "; lower the learning rate");
      }
      epoch_loss += lg.loss * static_cast<double>(stop - start);
      seen += stop - start;
      step(params, lg.grad, hyper.lr);
    }
    result.epoch_losses.push_back(epoch_loss / static_cast<double>(seen));
  }
  result.final_loss = mean_loss(params, hyper.pool_mode, frames, labels);
  if (!std::isfinite(result.final_loss) || !params.all_finite()) {
    throw Error(Errc::Divergence, "training produced non-finite parameters");
  }

  // Fold standardisation into the encoder: A (x - mu) / sigma + c.
  if (hyper.standardize) {
    const Eigen::MatrixXd folded = params.enc_weight * inv_std.asDiagonal();
    params.enc_bias -= folded * mean;
    params.enc_weight = folded;
  }

  result.model.params = std::move(params);
  result.model.pool_mode = hyper.pool_mode;
  result.model.dsp = data.dsp;
  result.model.cfg_fingerprint = audio::fingerprint(data.dsp);
  return result;
}

std::pair<LabeledDataset, LabeledDataset> stratified_split(const LabeledDataset& data,
                                                           double test_fraction,
                                                           std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw Error(Errc::InvalidArgument, "test fraction must lie in (0, 1)");
  }
  LabeledDataset train_set{{}, data.dsp, seed};
  LabeledDataset test_set{{}, data.dsp, seed};
  std::mt19937_64 rng(seed);
  for (auto cls : kAllClasses) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < data.items.size(); ++i) {
      if (data.items[i].label == cls) idx.push_back(i);
    }
    std::shuffle(idx.begin(), idx.end(), rng);
    auto n_test = static_cast<std::size_t>(std::llround(static_cast<double>(idx.size()) * test_fraction));
    if (idx.size() >= 2) n_test = std::clamp<std::size_t>(n_test, 1, idx.size() - 1);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      (k < n_test ? test_set : train_set).items.push_back(data.items[idx[k]]);
    }
  }
  return {std::move(train_set), std::move(test_set)};
}

}  // namespace speechagent::sir
