#include "speechagent/bench/manifest.hpp"

#include <fstream>
#include <set>

#include "speechagent/error.hpp"

namespace speechagent::bench {

namespace {

std::optional<std::string> opt_string(const nlohmann::json& j, const char* key, std::size_t line) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  if (!j[key].is_string()) {
    throw Error(Errc::ManifestInvalid, "line " + std::to_string(line) + ": '" + key + "' must be a string");
  }
  return j[key].get<std::string>();
}

}  // namespace

std::vector<ManifestEntry> parse_manifest(std::istream& in, const std::filesystem::path& base_dir) {
  std::vector<ManifestEntry> entries;
  std::set<std::string> seen;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto where = "line " + std::to_string(line) + ": ";
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::ManifestInvalid, where + "not valid JSON (" + e.what() + ")");
    }
    if (!j.is_object()) throw Error(Errc::ManifestInvalid, where + "expected a JSON object");

    ManifestEntry e;
    const auto id = opt_string(j, "sample_id", line);
    if (!id || id->empty()) throw Error(Errc::ManifestInvalid, where + "missing sample_id");
    e.sample_id = *id;
    if (!seen.insert(e.sample_id).second) {
      throw Error(Errc::ManifestInvalid, where + "duplicate sample_id '" + e.sample_id + "'");
    }
    const auto label = opt_string(j, "class_label", line);
    if (!label) throw Error(Errc::ManifestInvalid, where + "missing class_label");
    const auto cls = sir::parse_class(*label);
    if (!cls) throw Error(Errc::ManifestInvalid, where + "unknown class_label '" + *label + "'");
    e.class_label = *cls;

    if (const auto p = opt_string(j, "audio_path", line)) {
      std::filesystem::path path(*p);
      e.audio_path = path.is_relative() && !base_dir.empty() ? base_dir / path : path;
    }
    e.intent_text = opt_string(j, "intent_text", line);
    e.impaired_text = opt_string(j, "impaired_text", line);
    if (!e.audio_path && !e.intent_text && !e.impaired_text) {
      throw Error(Errc::ManifestInvalid, where + "needs audio_path, intent_text or impaired_text");
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ManifestInvalid, "cannot open manifest " + path.string());
  return parse_manifest(in, path.parent_path());
}

nlohmann::json to_json(const ManifestEntry& e) {
  nlohmann::json j = {{"sample_id", e.sample_id}, {"class_label", sir::to_string(e.class_label)}};
  if (e.audio_path) j["audio_path"] = e.audio_path->generic_string();
  if (e.intent_text) j["intent_text"] = *e.intent_text;
  if (e.impaired_text) j["impaired_text"] = *e.impaired_text;
  return j;
}

void save_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries) {
  const auto base = path.parent_path();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::Io, "cannot write manifest " + path.string());
  for (auto e : entries) {
    if (e.audio_path && !base.empty()) {
      const auto rel = e.audio_path->lexically_relative(base);
      if (!rel.empty() && *rel.begin() != "..") e.audio_path = rel;
    }
    out << to_json(e).dump() << '\n';
  }
  if (!out) throw Error(Errc::Io, "failed writing manifest " + path.string());
}

}  // namespace speechagent::bench
