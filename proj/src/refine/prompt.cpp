#include "speechagent/refine/prompt.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "prompt_assets.hpp"
#include "speechagent/error.hpp"

namespace speechagent::refine {

namespace {

constexpr std::string_view kInputSlot = "{input}";
constexpr std::string_view kConditionSlot = "{condition}";

std::size_t count_of(std::string_view hay, std::string_view needle) {
  std::size_t n = 0;
  for (auto pos = hay.find(needle); pos != std::string_view::npos;
       pos = hay.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

std::map<sir::ImpairmentClass, std::string> parse_conditions(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ConfigInvalid, std::string("conditions.json: ") + e.what());
  }
  if (!j.is_object()) throw Error(Errc::ConfigInvalid, "conditions.json must be an object");
  std::map<sir::ImpairmentClass, std::string> out;
  for (const auto& [key, value] : j.items()) {
    const auto cls = sir::parse_class(key);
    if (!cls || *cls == sir::ImpairmentClass::Healthy || !value.is_string()) {
      throw Error(Errc::ConfigInvalid, "conditions.json: bad entry '" + key + "'");
    }
    out[*cls] = value.get<std::string>();
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::ConfigInvalid, "cannot read prompt asset " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

const PromptTemplate& PromptTemplate::builtin() {
  static const PromptTemplate tmpl = [] {
    PromptTemplate t{assets::kWithoutClass, assets::kWithClass, parse_conditions(assets::kConditions)};
    t.validate();
    return t;
  }();
  return tmpl;
}

PromptTemplate PromptTemplate::load(const std::filesystem::path& dir) {
  PromptTemplate t{read_file(dir / "without_class.txt"), read_file(dir / "with_class.txt"),
                   parse_conditions(read_file(dir / "conditions.json"))};
  t.validate();
  return t;
}

void PromptTemplate::validate() const {
  if (count_of(without_class, kInputSlot) != 1 || count_of(without_class, kConditionSlot) != 0) {
    throw Error(Errc::ConfigInvalid, "without-class template needs exactly one {input} slot");
  }
  if (count_of(with_class, kInputSlot) != 1 || count_of(with_class, kConditionSlot) != 1) {
    throw Error(Errc::ConfigInvalid,
                "with-class template needs exactly one {input} and one {condition} slot");
  }
  for (auto cls : sir::kImpairedClasses) {
    if (!conditions.contains(cls)) {
      throw Error(Errc::ConfigInvalid,
                  "no condition text for " + std::string(sir::to_string(cls)));
    }
  }
}

std::string PromptTemplate::render(PromptVariant variant, std::string_view input,
                                   std::string_view condition) const {
  const std::string_view body = variant == PromptVariant::WithClass ? with_class : without_class;
  std::string out;
  out.reserve(body.size() + input.size() + condition.size());
  std::size_t pos = 0;
  while (pos < body.size()) {
    if (body.compare(pos, kInputSlot.size(), kInputSlot) == 0) {
      out += input;
      pos += kInputSlot.size();
    } else if (body.compare(pos, kConditionSlot.size(), kConditionSlot) == 0) {
      out += condition;
      pos += kConditionSlot.size();
    } else {
      out += body[pos++];
    }
  }
  return out;
}

std::string build_prompt(std::string_view impaired_text, std::optional<sir::ImpairmentClass> cls,
                         const PromptTemplate& tmpl) {
  if (impaired_text.empty()) throw Error(Errc::EmptyInput, "nothing to refine");
  if (!cls || *cls == sir::ImpairmentClass::Healthy) {
    return tmpl.render(PromptVariant::WithoutClass, impaired_text);
  }
  return tmpl.render(PromptVariant::WithClass, impaired_text, tmpl.conditions.at(*cls));
}

}  // namespace speechagent::refine
