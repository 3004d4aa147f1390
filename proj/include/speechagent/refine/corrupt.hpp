#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "speechagent/sir/impairment.hpp"

namespace speechagent::refine {

struct CorruptionRates {
  double stutter_prefix = 0.30;   // consonant-initial words become "x-x-word"
  double stutter_repeat = 0.10;   // word emitted twice
  double dysarthria_word = 0.40;  // hyphen split plus stretched vowel/sibilant
  double dysarthria_pause = 0.15; // "..." appended after a word
  double aphasia_delete = 0.20;   // content word dropped
  double aphasia_replace = 0.50;  // deleted word replaced by a filler
  double aphasia_insert = 0.10;   // filler inserted before a kept word
};

// Seeded rule-based simulation of impaired text. Identical arguments give
// identical output and the result is never empty. Errors: EmptyInput,
// HealthyClassInvalid.
std::string corrupt_text(std::string_view intent, sir::ImpairmentClass cls, std::uint64_t seed,
                         const CorruptionRates& rates = {});

}  // namespace speechagent::refine
