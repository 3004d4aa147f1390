#pragma once

#include <span>
#include <string_view>

namespace speechagent::bench {

// Voice-assistant commands across seven intents (playlist, restaurant,
// weather, music, book rating, creative-work search, screenings). Lowercase,
// no punctuation.
std::span<const std::string_view> command_corpus();

}  // namespace speechagent::bench
