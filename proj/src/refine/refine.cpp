#include "speechagent/refine/refine.hpp"

#include <chrono>

#include "speechagent/error.hpp"
#include "speechagent/refine/rule_refiner.hpp"

namespace speechagent::refine {

RefineOutcome refine_text(const std::string& text, std::optional<sir::ImpairmentClass> cls,
                          backends::LlmBackend& llm, const backends::CompletionParams& params,
                          const PromptTemplate& tmpl) {
  if (split_words(text).empty()) throw Error(Errc::EmptyInput, "nothing to refine");
  if (cls == sir::ImpairmentClass::Healthy) cls.reset();

  RefineOutcome out;
  out.prompt_used = build_prompt(text, cls, tmpl);
  out.class_used = cls;
  out.backend_id = llm.id();

  const auto t0 = std::chrono::steady_clock::now();
  std::string raw;
  try {
    raw = llm.complete(out.prompt_used, params);
  } catch (const Error& e) {
    if (e.code() != Errc::EmptyCompletion) throw;
    throw Error(Errc::RefinementFailed, "empty completion; raw response: \"\"");
  }
  out.latency_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  out.refined_text = collapse_whitespace(backends::clean_completion(raw));
  if (out.refined_text.empty()) {
    throw Error(Errc::RefinementFailed, "completion had no usable text; raw response: \"" + raw + "\"");
  }
  return out;
}

}  // namespace speechagent::refine
