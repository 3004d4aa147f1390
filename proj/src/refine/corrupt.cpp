#include "speechagent/refine/corrupt.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <random>
#include <vector>

#include "speechagent/error.hpp"
#include "speechagent/refine/rule_refiner.hpp"

namespace speechagent::refine {

namespace {

constexpr std::array<std::string_view, 3> kCorruptFillers = {"uh", "um", "erm"};

constexpr std::array<std::string_view, 40> kStopwords = {
    "a",    "an",   "the",  "to",   "of",  "in",   "on",   "at",   "for",  "with",
    "and",  "or",   "but",  "is",   "are", "was",  "be",   "it",   "i",    "me",
    "my",   "you",  "your", "we",   "our", "he",   "she",  "they", "this", "that",
    "some", "from", "by",   "as",   "do",  "can",  "will", "what", "us",   "please"};

bool is_vowel(char c) {
  switch (std::tolower(static_cast<unsigned char>(c))) {
    case 'a': case 'e': case 'i': case 'o': case 'u': return true;
    default: return false;
  }
}

bool is_consonant(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) != 0 && !is_vowel(c);
}

bool is_stopword(const std::string& w) {
  std::string lw(w);
  std::transform(lw.begin(), lw.end(), lw.begin(),
                 [](char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); });
  return std::find(kStopwords.begin(), kStopwords.end(), lw) != kStopwords.end();
}

// "sun" -> "s-suun": consonant onset split off, first vowel (or sibilant when
// there is no vowel) doubled.
std::string slur(const std::string& w) {
  std::string out = w;
  std::size_t stretch = std::string::npos;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (is_vowel(out[i])) {
      stretch = i;
      break;
    }
  }
  if (stretch == std::string::npos) {
    for (std::size_t i = 0; i < out.size(); ++i) {
      const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(out[i])));
      if (c == 's' || c == 'z') {
        stretch = i;
        break;
      }
    }
  }
  if (stretch != std::string::npos) out.insert(stretch, 1, out[stretch]);
  if (!out.empty() && is_consonant(out[0])) {
    out = std::string(1, static_cast<char>(std::tolower(static_cast<unsigned char>(out[0])))) +
          "-" + out;
  }
  return out;
}

}  // namespace

std::string corrupt_text(std::string_view intent, sir::ImpairmentClass cls, std::uint64_t seed,
                         const CorruptionRates& rates) {
  const auto words = split_words(intent);
  if (words.empty()) throw Error(Errc::EmptyInput, "intent text is empty");
  if (cls == sir::ImpairmentClass::Healthy) {
    throw Error(Errc::HealthyClassInvalid, "healthy speech has no corruption model");
  }

  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(sir::index_of(cls))};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  std::vector<std::string> out;
  for (const auto& w : words) {
    // Fixed number of draws per word keeps the stream aligned across words.
    const double d0 = u(rng), d1 = u(rng), d2 = u(rng);
    switch (cls) {
      case sir::ImpairmentClass::Stutter: {
        if (d1 < rates.stutter_repeat) out.push_back(w);
        if (d0 < rates.stutter_prefix && is_consonant(w[0])) {
          const std::string onset(1, static_cast<char>(std::tolower(static_cast<unsigned char>(w[0]))));
          out.push_back(onset + "-" + onset + "-" + w);
        } else {
          out.push_back(w);
        }
        break;
      }
      case sir::ImpairmentClass::Dysarthria: {
        std::string t = d0 < rates.dysarthria_word ? slur(w) : w;
        if (d1 < rates.dysarthria_pause) t += "...";
        out.push_back(std::move(t));
        break;
      }
      case sir::ImpairmentClass::Aphasia: {
        const std::string filler(kCorruptFillers[static_cast<std::size_t>(d2 * 3.0) % 3]);
        if (!is_stopword(w) && d0 < rates.aphasia_delete) {
          if (d1 < rates.aphasia_replace) out.push_back(filler);
        } else {
          if (d1 < rates.aphasia_insert) out.push_back(filler);
          out.push_back(w);
        }
        break;
      }
      case sir::ImpairmentClass::Healthy:
        break;
    }
  }
  if (out.empty()) out.push_back(words.front());

  std::string joined;
  for (const auto& t : out) {
    if (!joined.empty()) joined += ' ';
    joined += t;
  }
  return joined;
}

}  // namespace speechagent::refine
