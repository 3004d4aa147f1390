#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "speechagent/sir/impairment.hpp"

namespace speechagent::refine {

// Deterministic offline refiner. Passes, repeated to a fixed point:
//   1. "b-b-book" -> "book" when every hyphen/dash fragment prefixes the last
//   2. immediate duplicate words collapse to the first occurrence
//   3. fillers {uh, um, erm, uhh} are dropped
//   4. runs of >= 3 identical letters inside a word collapse to one
//   5. ellipses become spaces; whitespace is collapsed and trimmed
// The class argument is accepted for interface symmetry and ignored.
// EmptyInput for blank text.
std::string rule_refine(std::string_view text,
                        std::optional<sir::ImpairmentClass> cls = std::nullopt);

// Whitespace split, no normalisation.
std::vector<std::string> split_words(std::string_view text);

// Collapse whitespace runs to single spaces and trim the ends.
std::string collapse_whitespace(std::string_view text);

}  // namespace speechagent::refine
