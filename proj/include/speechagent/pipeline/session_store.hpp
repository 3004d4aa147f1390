#pragma once

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "speechagent/pipeline/session.hpp"

namespace speechagent::pipeline {

enum class AudioSlot { Input, Output };

// Append-only directory store: <id>.json plus <id>.input.wav and
// <id>.output.wav. Files are written to a temporary name and renamed, and an
// existing id is never overwritten, so a stored session reads back
// byte-identical for its whole lifetime.
class SessionStore {
 public:
  explicit SessionStore(std::filesystem::path dir);

  // InvalidArgument when the id already exists or is not a plain token.
  void put(const RefineSession& session, const std::vector<std::uint8_t>* input_wav,
           const std::vector<std::uint8_t>* output_wav);

  // Raw stored JSON text; NotFound for unknown ids.
  std::string get_raw(const std::string& id) const;
  RefineSession get(const std::string& id) const;
  std::vector<std::uint8_t> audio(const std::string& id, AudioSlot slot) const;
  bool contains(const std::string& id) const;

  std::vector<RefineSession> list() const;

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path path_for(const std::string& id, std::string_view suffix) const;

  std::filesystem::path dir_;
  mutable std::mutex mu_;
};

// Ids may contain only [A-Za-z0-9-], so they never escape the store directory.
bool valid_session_id(std::string_view id);

}  // namespace speechagent::pipeline
