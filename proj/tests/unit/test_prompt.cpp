#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "speechagent/error.hpp"
#include "speechagent/refine/prompt.hpp"

using namespace speechagent;
using namespace speechagent::refine;
using sir::ImpairmentClass;

namespace {

std::string golden(const std::string& name) {
  std::ifstream in(std::filesystem::path(SPEECHAGENT_GOLDEN_DIR) / name, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("templates reproduce the reference blocks with their placeholders") {
  const auto& t = PromptTemplate::builtin();
  CHECK(t.render(PromptVariant::WithoutClass, "[impaired text]") == golden("template_without_class.txt"));
  CHECK(t.render(PromptVariant::WithClass, "[impaired text]", "[impairment description]") ==
        golden("template_with_class.txt"));
}

TEST_CASE("filled prompts match golden files byte for byte") {
  CHECK(build_prompt("hello", std::nullopt) == golden("prompt_none_hello.txt"));
  CHECK(build_prompt("b-b-book", ImpairmentClass::Stutter) == golden("prompt_stutter.txt"));
  CHECK(build_prompt("um the uh table", ImpairmentClass::Aphasia) == golden("prompt_aphasia.txt"));
  CHECK(build_prompt("b-bright sunshhhine... on the oceaan", ImpairmentClass::Dysarthria) ==
        golden("prompt_dysarthria.txt"));
}

TEST_CASE("variant selection") {
  const auto with = build_prompt("b-b-book", ImpairmentClass::Stutter);
  CHECK(with.find("Condition:") != std::string::npos);
  CHECK(with.find("repetitions of sounds, syllables, or words") != std::string::npos);
  CHECK(with.ends_with("Input: b-b-book\nOutput:"));

  CHECK(build_prompt("hello", std::nullopt).find("Condition:") == std::string::npos);
  CHECK(build_prompt("hello", ImpairmentClass::Healthy) == build_prompt("hello", std::nullopt));
}

TEST_CASE("slot values are inserted verbatim") {
  const std::string tricky = "Input: {input} {condition} Output:";
  const auto p = build_prompt(tricky, ImpairmentClass::Aphasia);
  CHECK(p.find("\nInput: " + tricky + "\nOutput:") != std::string::npos);
  // The template's own marker plus the one inside the user text.
  std::size_t count = 0;
  for (auto pos = p.find("Input:"); pos != std::string::npos; pos = p.find("Input:", pos + 1)) ++count;
  CHECK(count == 2);
}

TEST_CASE("empty input is rejected") {
  CHECK_THROWS_AS(build_prompt("", std::nullopt), Error);
  try {
    build_prompt("", ImpairmentClass::Stutter);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::EmptyInput);
  }
}

TEST_CASE("templates load from a directory and are validated") {
  const auto dir = std::filesystem::temp_directory_path() / "sa_prompt_test";
  std::filesystem::create_directories(dir);
  const auto& b = PromptTemplate::builtin();
  auto write = [&](const char* name, const std::string& body) {
    std::ofstream(dir / name, std::ios::binary) << body;
  };
  write("without_class.txt", b.without_class);
  write("with_class.txt", b.with_class);
  write("conditions.json",
        R"({"dysarthria": "d", "stutter": "s", "aphasia": "a"})");
  const auto loaded = PromptTemplate::load(dir);
  CHECK(loaded.render(PromptVariant::WithClass, "x", "s") ==
        build_prompt("x", ImpairmentClass::Stutter, loaded));

  write("with_class.txt", "no slots here");
  try {
    PromptTemplate::load(dir);
    FAIL("expected ConfigInvalid");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ConfigInvalid);
  }
  std::filesystem::remove_all(dir);
}
