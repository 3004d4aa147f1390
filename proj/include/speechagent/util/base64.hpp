#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace speechagent::util {

std::string base64_encode(std::span<const std::uint8_t> bytes);
// InvalidArgument on malformed input.
std::vector<std::uint8_t> base64_decode(std::string_view text);

// ISO 8601 UTC with millisecond precision, e.g. "2025-01-31T12:00:00.123Z".
std::string utc_timestamp();

// Random (v4) UUID string.
std::string new_uuid();

}  // namespace speechagent::util
