#include "speechagent/sir/impairment.hpp"

#include <algorithm>
#include <cctype>

#include "speechagent/error.hpp"

namespace speechagent::sir {

std::string_view to_string(ImpairmentClass c) {
  switch (c) {
    case ImpairmentClass::Dysarthria: return "dysarthria";
    case ImpairmentClass::Stutter: return "stutter";
    case ImpairmentClass::Aphasia: return "aphasia";
    case ImpairmentClass::Healthy: return "healthy";
  }
  return "unknown";
}

std::string_view display_name(ImpairmentClass c) {
  switch (c) {
    case ImpairmentClass::Dysarthria: return "Dysarthria";
    case ImpairmentClass::Stutter: return "Stuttering";
    case ImpairmentClass::Aphasia: return "Aphasia";
    case ImpairmentClass::Healthy: return "Healthy";
  }
  return "Unknown";
}

std::optional<ImpairmentClass> parse_class(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (lower == "dysarthria") return ImpairmentClass::Dysarthria;
  if (lower == "stutter" || lower == "stuttering") return ImpairmentClass::Stutter;
  if (lower == "aphasia") return ImpairmentClass::Aphasia;
  if (lower == "healthy" || lower == "health") return ImpairmentClass::Healthy;
  return std::nullopt;
}

ImpairmentClass class_from_index(int i) {
  if (i < 0 || i >= static_cast<int>(kNumClasses)) {
    throw Error(Errc::InvalidArgument, "class index out of range: " + std::to_string(i));
  }
  return static_cast<ImpairmentClass>(i);
}

}  // namespace speechagent::sir
