#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "speechagent/sir/model.hpp"
#include "speechagent/sir/train.hpp"

namespace speechagent::sir {

struct ClassMetrics {
  std::size_t support = 0;
  double accuracy = 0.0;  // recall of this class
  double precision = 0.0;
  double f1 = 0.0;
  std::optional<double> auc;  // absent when the test set has no negatives
};

struct EvalReport {
  std::size_t n = 0;
  // Absent entries: the class does not occur in the test set.
  std::array<std::optional<ClassMetrics>, kNumClasses> per_class;
  // Macro averages over classes present in the test set (AUC over classes
  // where it is defined).
  double overall_accuracy = 0.0;
  double overall_f1 = 0.0;
  std::optional<double> overall_auc;
  double micro_accuracy = 0.0;
  Eigen::Matrix4i confusion = Eigen::Matrix4i::Zero();  // rows: truth, cols: predicted
};

// One-vs-rest ROC area via the Mann-Whitney rank statistic with ties counted
// half. Throws SingleClassAuc when either side is empty.
double roc_auc(std::span<const double> scores, std::span<const bool> positive);

EvalReport evaluate_posteriors(std::span<const ClassPosterior> posteriors,
                               std::span<const ImpairmentClass> truth);

// EmptyDataset when `test` has no items.
EvalReport evaluate(const SirModel& model, const LabeledDataset& test);

}  // namespace speechagent::sir
