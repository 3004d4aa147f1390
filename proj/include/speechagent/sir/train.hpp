#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "speechagent/audio/mel.hpp"
#include "speechagent/sir/model.hpp"

namespace speechagent::sir {

struct LabeledItem {
  audio::MelSpectrogram mel;
  ImpairmentClass label = ImpairmentClass::Healthy;
  std::string id;
};

struct LabeledDataset {
  std::vector<LabeledItem> items;
  audio::DspConfig dsp;  // configuration the spectrograms were computed with
  std::uint64_t split_seed = 0;
};

struct TrainHyper {
  int hidden = 64;
  PoolMode pool_mode = PoolMode::Mean;
  double lr = 0.05;
  int epochs = 200;
  int batch = 16;
  std::uint64_t seed = 0;
  double init_scale = 0.05;  // parameters start uniform in (-init_scale, init_scale)
  // Standardize each mel band with training-set statistics; the affine
  // normalisation is folded into the encoder weights after training.
  bool standardize = true;
};

struct TrainResult {
  SirModel model;
  double initial_loss = 0.0;  // mean cross-entropy at initialisation
  double final_loss = 0.0;    // mean cross-entropy over the training set after the last epoch
  std::vector<double> epoch_losses;
};

struct LossGradient {
  double loss = 0.0;
  SirParams grad;
};

// Mean cross-entropy -log p(y|S) over `examples` and its exact gradient with
// respect to every parameter (chain rule through softmax, output layer,
// pooling and the tanh encoder). Each example is an (F x T) frame matrix.
LossGradient loss_and_gradient(const SirParams& params, PoolMode mode,
                               std::span<const Eigen::MatrixXd> frames,
                               std::span<const ImpairmentClass> labels);

// Same loss without the gradient.
double mean_loss(const SirParams& params, PoolMode mode, std::span<const Eigen::MatrixXd> frames,
                 std::span<const ImpairmentClass> labels);

SirParams init_params(Eigen::Index input_width, Eigen::Index hidden, double scale,
                      std::uint64_t seed);

// Mini-batch gradient descent; deterministic for fixed data, hyper and seed.
// Errors: InsufficientData (< 2 items in some class), Divergence (non-finite
// loss), DimensionMismatch, InvalidArgument for bad hyper-parameters.
TrainResult train(const LabeledDataset& data, const TrainHyper& hyper);

// Per-class shuffle seeded by `seed`; each class contributes
// round(n * test_fraction) items to the test side, clamped to [1, n - 1] when
// the class has two or more items.
std::pair<LabeledDataset, LabeledDataset> stratified_split(const LabeledDataset& data,
                                                           double test_fraction,
                                                           std::uint64_t seed);

}  // namespace speechagent::sir
