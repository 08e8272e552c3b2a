#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace logictree {

/// Half-open token interval [begin, end).
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end > begin ? end - begin : 0; }
  bool empty() const noexcept { return end <= begin; }
  bool contains(const Span& o) const noexcept { return begin <= o.begin && o.end <= end; }
  bool overlaps(const Span& o) const noexcept {
    return !empty() && !o.empty() && begin < o.end && o.begin < end;
  }

  auto operator<=>(const Span&) const = default;
};

/// Sorted, disjoint, non-adjacent union of non-empty spans. Arguments obtained
/// by subtracting one constituent from another may be non-contiguous.
class TokenSet {
 public:
  TokenSet() = default;
  TokenSet(Span s);  // NOLINT(google-explicit-constructor)
  explicit TokenSet(std::vector<Span> spans);

  const std::vector<Span>& spans() const noexcept { return spans_; }
  bool empty() const noexcept { return spans_.empty(); }
  std::size_t size() const noexcept;
  std::size_t front() const { return spans_.front().begin; }
  std::size_t back() const { return spans_.back().end; }
  /// Smallest single span covering every member.
  Span hull() const noexcept;

  /// True when `s` lies inside one of the member spans.
  bool contains(const Span& s) const noexcept;
  bool overlaps(const Span& s) const noexcept;

  TokenSet intersect(const TokenSet& other) const;
  TokenSet subtract(const TokenSet& other) const;

  /// Drops tokens at both ends for which `is_trimmed(tokens[i])` holds.
  template <typename Pred>
  TokenSet trim(std::span<const std::string> tokens, Pred is_trimmed) const {
    std::vector<Span> out = spans_;
    while (!out.empty() && is_trimmed(tokens[out.front().begin])) {
      if (++out.front().begin == out.front().end) out.erase(out.begin());
    }
    while (!out.empty() && is_trimmed(tokens[out.back().end - 1])) {
      if (--out.back().end == out.back().begin) out.pop_back();
    }
    return TokenSet(std::move(out));
  }

  /// Member tokens in surface order.
  std::vector<std::string> gather(std::span<const std::string> tokens) const;

  bool operator==(const TokenSet&) const = default;

 private:
  std::vector<Span> spans_;
};

/// A token made only of punctuation characters ("," "." "``" "--" ...).
bool is_punctuation(const std::string& token) noexcept;

std::string join_tokens(std::span<const std::string> tokens);

}  // namespace logictree
