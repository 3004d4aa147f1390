#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "speechagent/backends/backend.hpp"

namespace speechagent::metrics {

// Lowercase, split on runs of non-alphanumeric ASCII.
std::vector<std::string> tokenize(std::string_view text);

enum class Smoothing { None, AddEpsilon };

inline constexpr double kBleuEpsilon = 0.1;

// Sentence BLEU: geometric mean of clipped n-gram precisions, n = 1..max_n,
// times exp(min(0, 1 - |ref| / |cand|)). Without smoothing any zero precision
// gives 0; AddEpsilon replaces a zero match count by 0.1. An empty candidate
// scores 0. EmptyReference when the reference has no tokens.
double bleu(std::span<const std::string> candidate, std::span<const std::string> reference,
            int max_n = 4, Smoothing smoothing = Smoothing::None);
double bleu(std::string_view candidate, std::string_view reference, int max_n = 4,
            Smoothing smoothing = Smoothing::None);

struct Cosine {
  double value = 0.0;
  bool degenerate = false;  // one side embedded to the zero vector
};

Cosine cosine_sim(std::string_view a, std::string_view b, backends::Embedder& embedder);

struct TextPairScore {
  double bleu = 0.0;
  double cosine = 0.0;
  bool cosine_degenerate = false;
  std::string candidate;
  std::string reference;
};

TextPairScore score_pair(std::string_view candidate, std::string_view reference,
                         backends::Embedder& embedder, Smoothing smoothing = Smoothing::None);

}  // namespace speechagent::metrics
