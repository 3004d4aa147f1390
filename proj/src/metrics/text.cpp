#include "speechagent/metrics/text.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

#include "speechagent/error.hpp"

namespace speechagent::metrics {

namespace {

using NgramCounts = std::map<std::vector<std::string>, int>;

NgramCounts count_ngrams(std::span<const std::string> tokens, std::size_t n) {
  NgramCounts counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[std::vector<std::string>(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                      tokens.begin() + static_cast<std::ptrdiff_t>(i + n))];
  }
  return counts;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (char c : text) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u)) {
      cur += static_cast<char>(std::tolower(u));
    } else if (!cur.empty()) {
      tokens.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

double bleu(std::span<const std::string> candidate, std::span<const std::string> reference,
            int max_n, Smoothing smoothing) {
  if (reference.empty()) throw Error(Errc::EmptyReference, "reference has no tokens");
  if (max_n < 1) throw Error(Errc::InvalidArgument, "max_n must be at least 1");
  if (candidate.empty()) return 0.0;

  double log_sum = 0.0;
  for (int n = 1; n <= max_n; ++n) {
    const auto cand = count_ngrams(candidate, static_cast<std::size_t>(n));
    const auto ref = count_ngrams(reference, static_cast<std::size_t>(n));
    int matched = 0, total = 0;
    for (const auto& [gram, count] : cand) {
      total += count;
      if (const auto it = ref.find(gram); it != ref.end()) matched += std::min(count, it->second);
    }
    if (matched == 0) {
      if (smoothing == Smoothing::None) return 0.0;
      log_sum += std::log(kBleuEpsilon / std::max(total, 1));
    } else {
      log_sum += std::log(static_cast<double>(matched) / total);
    }
  }
  const double c = static_cast<double>(candidate.size());
  const double r = static_cast<double>(reference.size());
  const double bp = std::exp(std::min(0.0, 1.0 - r / c));
  return bp * std::exp(log_sum / max_n);
}

double bleu(std::string_view candidate, std::string_view reference, int max_n,
            Smoothing smoothing) {
  const auto c = tokenize(candidate);
  const auto r = tokenize(reference);
  return bleu(std::span<const std::string>(c), std::span<const std::string>(r), max_n, smoothing);
}

Cosine cosine_sim(std::string_view a, std::string_view b, backends::Embedder& embedder) {
  const auto ea = embedder.embed(a);
  const auto eb = embedder.embed(b);
  if (ea.empty || eb.empty) return {0.0, true};
  if (ea.values.size() != eb.values.size()) {
    throw Error(Errc::DimensionMismatch, "embeddings differ in dimension");
  }
  return {std::clamp(ea.values.dot(eb.values), -1.0, 1.0), false};
}

TextPairScore score_pair(std::string_view candidate, std::string_view reference,
                         backends::Embedder& embedder, Smoothing smoothing) {
  TextPairScore s;
  s.candidate = candidate;
  s.reference = reference;
  s.bleu = bleu(candidate, reference, 4, smoothing);
  const auto cos = cosine_sim(candidate, reference, embedder);
  s.cosine = cos.value;
  s.cosine_degenerate = cos.degenerate;
  return s;
}

}  // namespace speechagent::metrics
