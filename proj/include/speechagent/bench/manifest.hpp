#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "speechagent/sir/impairment.hpp"

namespace speechagent::bench {

struct ManifestEntry {
  std::string sample_id;
  sir::ImpairmentClass class_label = sir::ImpairmentClass::Healthy;
  std::optional<std::filesystem::path> audio_path;
  std::optional<std::string> intent_text;
  std::optional<std::string> impaired_text;
};

// One JSON object per line; blank lines are skipped. Relative audio paths are
// resolved against `base_dir`. Audio files are not opened. ManifestInvalid
// names the offending line.
std::vector<ManifestEntry> parse_manifest(std::istream& in, const std::filesystem::path& base_dir = {});
std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path);

nlohmann::json to_json(const ManifestEntry& e);
// Audio paths are written relative to `base_dir` when they live below it.
void save_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries);

}  // namespace speechagent::bench
