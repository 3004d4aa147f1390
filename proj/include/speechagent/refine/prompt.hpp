#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "speechagent/sir/impairment.hpp"

namespace speechagent::refine {

enum class PromptVariant { WithoutClass, WithClass };

// Refinement prompt templates. Bodies carry `{input}` and (with-class only)
// `{condition}` slots; everything else is emitted byte-for-byte.
struct PromptTemplate {
  std::string without_class;
  std::string with_class;
  std::map<sir::ImpairmentClass, std::string> conditions;  // impaired classes only

  // Shipped v1 assets, compiled into the library.
  static const PromptTemplate& builtin();
  // Directory holding without_class.txt, with_class.txt and conditions.json.
  // ConfigInvalid when a file is missing or a slot is absent or duplicated.
  static PromptTemplate load(const std::filesystem::path& dir);

  void validate() const;

  // Slot substitution by position: values are inserted verbatim and never
  // rescanned, so text containing "{input}" or "Input:" passes through.
  std::string render(PromptVariant variant, std::string_view input,
                     std::string_view condition = {}) const;
};

// Healthy and absent classes use the without-class template. EmptyInput for
// an empty `impaired_text`.
std::string build_prompt(std::string_view impaired_text, std::optional<sir::ImpairmentClass> cls,
                         const PromptTemplate& tmpl = PromptTemplate::builtin());

}  // namespace speechagent::refine
