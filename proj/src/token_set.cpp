#include "logictree/token_set.hpp"

#include <algorithm>
#include <cctype>

namespace logictree {

TokenSet::TokenSet(Span s) {
  if (!s.empty()) spans_.push_back(s);
}

TokenSet::TokenSet(std::vector<Span> spans) {
  std::erase_if(spans, [](const Span& s) { return s.empty(); });
  std::sort(spans.begin(), spans.end());
  for (const auto& s : spans) {
    if (!spans_.empty() && s.begin <= spans_.back().end) {
      spans_.back().end = std::max(spans_.back().end, s.end);
    } else {
      spans_.push_back(s);
    }
  }
}

std::size_t TokenSet::size() const noexcept {
  std::size_t n = 0;
  for (const auto& s : spans_) n += s.size();
  return n;
}

Span TokenSet::hull() const noexcept {
  if (spans_.empty()) return {};
  return {spans_.front().begin, spans_.back().end};
}

bool TokenSet::contains(const Span& s) const noexcept {
  return std::any_of(spans_.begin(), spans_.end(),
                     [&](const Span& m) { return m.contains(s); });
}

bool TokenSet::overlaps(const Span& s) const noexcept {
  return std::any_of(spans_.begin(), spans_.end(),
                     [&](const Span& m) { return m.overlaps(s); });
}

TokenSet TokenSet::intersect(const TokenSet& other) const {
  std::vector<Span> out;
  for (const auto& a : spans_) {
    for (const auto& b : other.spans_) {
      Span c{std::max(a.begin, b.begin), std::min(a.end, b.end)};
      if (!c.empty()) out.push_back(c);
    }
  }
  return TokenSet(std::move(out));
}

TokenSet TokenSet::subtract(const TokenSet& other) const {
  std::vector<Span> out;
  for (const auto& a : spans_) {
    std::size_t cursor = a.begin;
    for (const auto& b : other.spans_) {
      if (b.end <= cursor || b.begin >= a.end) continue;
      if (b.begin > cursor) out.push_back({cursor, b.begin});
      cursor = std::max(cursor, b.end);
    }
    if (cursor < a.end) out.push_back({cursor, a.end});
  }
  return TokenSet(std::move(out));
}

std::vector<std::string> TokenSet::gather(std::span<const std::string> tokens) const {
  std::vector<std::string> out;
  out.reserve(size());
  for (const auto& s : spans_) {
    for (auto i = s.begin; i < s.end; ++i) out.push_back(tokens[i]);
  }
  return out;
}

bool is_punctuation(const std::string& token) noexcept {
  if (token.empty()) return false;
  return std::all_of(token.begin(), token.end(),
                     [](unsigned char c) { return std::ispunct(c) != 0; });
}

std::string join_tokens(std::span<const std::string> tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

}  // namespace logictree
