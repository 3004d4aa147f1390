#include "speechagent/pipeline/session_store.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "speechagent/error.hpp"

namespace speechagent::pipeline {

namespace {

void write_atomic(const std::filesystem::path& path, std::string_view bytes) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::Io, "cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(Errc::Io, "short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::NotFound, "no such file " + path.filename().string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

bool valid_session_id(std::string_view id) {
  return !id.empty() && id.size() <= 64 && std::all_of(id.begin(), id.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '-';
  });
}

SessionStore::SessionStore(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw Error(Errc::Io, "cannot create session directory " + dir_.string() + ": " + ec.message());
}

std::filesystem::path SessionStore::path_for(const std::string& id, std::string_view suffix) const {
  if (!valid_session_id(id)) throw Error(Errc::NotFound, "invalid session id");
  return dir_ / (id + std::string(suffix));
}

void SessionStore::put(const RefineSession& session, const std::vector<std::uint8_t>* input_wav,
                       const std::vector<std::uint8_t>* output_wav) {
  if (!valid_session_id(session.id)) throw Error(Errc::InvalidArgument, "invalid session id");
  const std::string text = to_json(session).dump(2) + "\n";
  std::lock_guard lock(mu_);
  const auto json_path = path_for(session.id, ".json");
  if (std::filesystem::exists(json_path)) {
    throw Error(Errc::InvalidArgument, "session " + session.id + " already stored");
  }
  auto as_view = [](const std::vector<std::uint8_t>& v) {
    return std::string_view(reinterpret_cast<const char*>(v.data()), v.size());
  };
  // Audio first: a visible record always has its audio in place.
  if (input_wav) write_atomic(path_for(session.id, ".input.wav"), as_view(*input_wav));
  if (output_wav) write_atomic(path_for(session.id, ".output.wav"), as_view(*output_wav));
  write_atomic(json_path, text);
}

std::string SessionStore::get_raw(const std::string& id) const {
  return read_all(path_for(id, ".json"));
}

RefineSession SessionStore::get(const std::string& id) const {
  return session_from_json(nlohmann::json::parse(get_raw(id)));
}

std::vector<std::uint8_t> SessionStore::audio(const std::string& id, AudioSlot slot) const {
  const std::string bytes = read_all(path_for(id, slot == AudioSlot::Input ? ".input.wav" : ".output.wav"));
  return {bytes.begin(), bytes.end()};
}

bool SessionStore::contains(const std::string& id) const {
  return valid_session_id(id) && std::filesystem::exists(dir_ / (id + ".json"));
}

std::vector<RefineSession> SessionStore::list() const {
  std::vector<RefineSession> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
    const auto& p = entry.path();
    if (p.extension() != ".json") continue;
    try {
      out.push_back(session_from_json(nlohmann::json::parse(read_all(p))));
    } catch (const std::exception&) {
      // Foreign or damaged files are skipped, not fatal.
    }
  }
  std::sort(out.begin(), out.end(), [](const RefineSession& a, const RefineSession& b) {
    return a.created_at != b.created_at ? a.created_at < b.created_at : a.id < b.id;
  });
  return out;
}

}  // namespace speechagent::pipeline
