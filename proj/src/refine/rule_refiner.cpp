#include "speechagent/refine/rule_refiner.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "speechagent/error.hpp"

namespace speechagent::refine {

namespace {

constexpr std::array<std::string_view, 4> kFillers = {"uh", "um", "erm", "uhh"};

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

// ASCII alphanumerics plus any non-ASCII byte, so UTF-8 letters stay inside
// the word core.
bool is_word_byte(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u >= 0x80 || std::isalnum(u) != 0;
}

char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), lower);
  return out;
}

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
}

struct Token {
  std::string lead, core, trail;

  explicit Token(std::string_view raw) {
    std::size_t b = 0;
    while (b < raw.size() && !is_word_byte(raw[b])) ++b;
    std::size_t e = raw.size();
    while (e > b && !is_word_byte(raw[e - 1])) --e;
    lead = raw.substr(0, b);
    core = raw.substr(b, e - b);
    trail = raw.substr(e);
  }
  std::string key() const { return lowercase(core); }
  std::string str() const { return lead + core + trail; }
};

bool is_prefix_ci(std::string_view prefix, std::string_view word) {
  if (prefix.empty() || prefix.size() > word.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (lower(prefix[i]) != lower(word[i])) return false;
  }
  return true;
}

// "b-b-book" -> "book", "th–this" -> "this"; "well-being" is left alone.
void collapse_stutter_prefix(Token& t) {
  std::string norm = t.core;
  replace_all(norm, "–", "-");
  replace_all(norm, "—", "-");
  if (norm.find('-') == std::string::npos) return;
  std::vector<std::string_view> parts;
  std::string_view rest = norm;
  for (auto pos = rest.find('-'); pos != std::string_view::npos; pos = rest.find('-')) {
    parts.push_back(rest.substr(0, pos));
    rest.remove_prefix(pos + 1);
  }
  parts.push_back(rest);
  const std::string_view last = parts.back();
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    if (!is_prefix_ci(parts[i], last)) return;
  }
  t.core = std::string(last);
}

void collapse_letter_runs(Token& t) {
  std::string out;
  const std::string& s = t.core;
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t j = i;
    while (j < s.size() && s[j] == s[i]) ++j;
    const bool letter = std::isalpha(static_cast<unsigned char>(s[i])) != 0;
    out.append(letter && j - i >= 3 ? 1 : j - i, s[i]);
    i = j;
  }
  t.core = std::move(out);
}

std::string apply_passes(std::string_view text) {
  std::vector<Token> tokens;
  for (const auto& w : split_words(text)) tokens.emplace_back(w);

  for (auto& t : tokens) collapse_stutter_prefix(t);

  std::vector<Token> kept;
  for (auto& t : tokens) {
    if (!kept.empty() && !t.core.empty() && t.key() == kept.back().key()) continue;
    kept.push_back(std::move(t));
  }

  std::erase_if(kept, [](const Token& t) {
    return std::find(kFillers.begin(), kFillers.end(), t.key()) != kFillers.end();
  });

  std::string joined;
  for (auto& t : kept) {
    collapse_letter_runs(t);
    if (!joined.empty()) joined += ' ';
    joined += t.str();
  }

  replace_all(joined, "…", " ");
  std::string out;
  std::size_t i = 0;
  while (i < joined.size()) {
    std::size_t j = i;
    while (j < joined.size() && joined[j] == '.') ++j;
    if (j - i >= 3) {
      out += ' ';
      i = j;
    } else if (j > i) {
      out.append(j - i, '.');
      i = j;
    } else {
      out += joined[i++];
    }
  }
  return collapse_whitespace(out);
}

}  // namespace

std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> words;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    if (j > i) words.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return words;
}

std::string collapse_whitespace(std::string_view text) {
  std::string out;
  for (const auto& w : split_words(text)) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

std::string rule_refine(std::string_view text, std::optional<sir::ImpairmentClass>) {
  if (split_words(text).empty()) throw Error(Errc::EmptyInput, "nothing to refine");
  // A pass can expose new work for an earlier one (an ellipsis split makes two
  // words adjacent), so iterate until nothing changes. Every pass that changes
  // the text also shortens it, so this terminates.
  std::string cur = apply_passes(text);
  for (;;) {
    std::string next = apply_passes(cur);
    if (next == cur) return cur;
    cur = std::move(next);
  }
}

}  // namespace speechagent::refine
