#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace speechagent::sir {

// Canonical order; the index is the row of the output layer.
enum class ImpairmentClass : int { Dysarthria = 0, Stutter = 1, Aphasia = 2, Healthy = 3 };

inline constexpr std::size_t kNumClasses = 4;

inline constexpr std::array<ImpairmentClass, kNumClasses> kAllClasses = {
    ImpairmentClass::Dysarthria, ImpairmentClass::Stutter, ImpairmentClass::Aphasia,
    ImpairmentClass::Healthy};

inline constexpr std::array<ImpairmentClass, 3> kImpairedClasses = {
    ImpairmentClass::Dysarthria, ImpairmentClass::Stutter, ImpairmentClass::Aphasia};

constexpr int index_of(ImpairmentClass c) { return static_cast<int>(c); }

// Lowercase wire name: "dysarthria", "stutter", "aphasia", "healthy".
std::string_view to_string(ImpairmentClass c);
// Display name as used in report headers ("Dysarthria", "Stuttering", ...).
std::string_view display_name(ImpairmentClass c);
// Case-insensitive; also accepts "stuttering" and "health".
std::optional<ImpairmentClass> parse_class(std::string_view name);
ImpairmentClass class_from_index(int i);

}  // namespace speechagent::sir
