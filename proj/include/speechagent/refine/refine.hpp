#pragma once

#include <optional>
#include <string>

#include "speechagent/backends/backend.hpp"
#include "speechagent/refine/prompt.hpp"
#include "speechagent/sir/impairment.hpp"

namespace speechagent::refine {

struct RefineOutcome {
  std::string refined_text;
  std::string prompt_used;
  std::string backend_id;
  double latency_s = 0.0;
  std::optional<sir::ImpairmentClass> class_used;  // absent for the without-class prompt
};

// Render the prompt, query the LLM, clean the reply. Backend errors
// propagate; an empty reply raises RefinementFailed carrying the raw text.
RefineOutcome refine_text(const std::string& text, std::optional<sir::ImpairmentClass> cls,
                          backends::LlmBackend& llm, const backends::CompletionParams& params = {},
                          const PromptTemplate& tmpl = PromptTemplate::builtin());

}  // namespace speechagent::refine
