#include "speechagent/sir/evaluate.hpp"

#include <algorithm>
#include <memory>
#include <numeric>

#include "speechagent/error.hpp"

namespace speechagent::sir {

double roc_auc(std::span<const double> scores, std::span<const bool> positive) {
  if (scores.size() != positive.size()) {
    throw Error(Errc::DimensionMismatch, "scores and labels differ in length");
  }
  const auto n_pos = static_cast<long long>(std::count(positive.begin(), positive.end(), true));
  const auto n_neg = static_cast<long long>(scores.size()) - n_pos;
  if (n_pos == 0 || n_neg == 0) {
    throw Error(Errc::SingleClassAuc, "AUC needs both positive and negative examples");
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Twice the positive rank sum, using doubled mid-ranks so it stays integral.
  long long twice_rank_sum = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
    const auto twice_mid = static_cast<long long>(i + 1 + j + 1);
    for (std::size_t k = i; k <= j; ++k) {
      if (positive[order[k]]) twice_rank_sum += twice_mid;
    }
    i = j + 1;
  }
  const long long twice_u = twice_rank_sum - n_pos * (n_pos + 1);
  return static_cast<double>(twice_u) / static_cast<double>(2 * n_pos * n_neg);
}

EvalReport evaluate_posteriors(std::span<const ClassPosterior> posteriors,
                               std::span<const ImpairmentClass> truth) {
  if (posteriors.size() != truth.size()) {
    throw Error(Errc::DimensionMismatch, "posteriors and labels differ in length");
  }
  if (posteriors.empty()) throw Error(Errc::EmptyDataset, "test set is empty");

  EvalReport report;
  report.n = posteriors.size();
  for (std::size_t i = 0; i < posteriors.size(); ++i) {
    ++report.confusion(index_of(truth[i]), index_of(posteriors[i].label));
  }

  double acc_sum = 0.0, f1_sum = 0.0, auc_sum = 0.0;
  int present = 0, with_auc = 0;
  std::vector<double> scores(posteriors.size());
  // std::vector<bool> is not contiguous, so span over a plain array instead.
  auto is_pos = std::make_unique<bool[]>(posteriors.size());
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    const int ci = static_cast<int>(c);
    const int support = report.confusion.row(ci).sum();
    if (support == 0) continue;
    const int tp = report.confusion(ci, ci);
    const int predicted = report.confusion.col(ci).sum();

    ClassMetrics m;
    m.support = static_cast<std::size_t>(support);
    m.accuracy = static_cast<double>(tp) / support;
    m.precision = predicted > 0 ? static_cast<double>(tp) / predicted : 0.0;
    m.f1 = (m.precision + m.accuracy) > 0.0
               ? 2.0 * m.precision * m.accuracy / (m.precision + m.accuracy)
               : 0.0;

    for (std::size_t i = 0; i < posteriors.size(); ++i) {
      scores[i] = posteriors[i].probs[ci];
      is_pos[i] = truth[i] == kAllClasses[c];
    }
    try {
      m.auc = roc_auc(scores, std::span<const bool>(is_pos.get(), posteriors.size()));
    } catch (const Error& e) {
      if (e.code() != Errc::SingleClassAuc) throw;
    }

    acc_sum += m.accuracy;
    f1_sum += m.f1;
    ++present;
    if (m.auc) {
      auc_sum += *m.auc;
      ++with_auc;
    }
    report.per_class[c] = m;
  }
  report.overall_accuracy = acc_sum / present;
  report.overall_f1 = f1_sum / present;
  if (with_auc > 0) report.overall_auc = auc_sum / with_auc;
  report.micro_accuracy = static_cast<double>(report.confusion.trace()) / static_cast<double>(report.n);
  return report;
}

EvalReport evaluate(const SirModel& model, const LabeledDataset& test) {
  if (test.items.empty()) throw Error(Errc::EmptyDataset, "test set is empty");
  std::vector<ClassPosterior> posteriors;
  std::vector<ImpairmentClass> truth;
  posteriors.reserve(test.items.size());
  truth.reserve(test.items.size());
  for (const auto& item : test.items) {
    posteriors.push_back(predict_mel(item.mel, model));
    truth.push_back(item.label);
  }
  return evaluate_posteriors(posteriors, truth);
}

}  // namespace speechagent::sir
