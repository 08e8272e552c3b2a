#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace logictree {

enum class RelationType : std::uint8_t {
  Conjunction,
  Alternative,
  Restatement,
  Instantiation,
  Contrast,
  Concession,
  Analogy,
  Temporal,
  Condition,
  Causal,
};

inline constexpr std::size_t kRelationCount = 10;

inline constexpr std::array<RelationType, kRelationCount> kAllRelations = {
    RelationType::Conjunction, RelationType::Alternative, RelationType::Restatement,
    RelationType::Instantiation, RelationType::Contrast, RelationType::Concession,
    RelationType::Analogy, RelationType::Temporal, RelationType::Condition,
    RelationType::Causal,
};

constexpr std::size_t index_of(RelationType r) noexcept { return static_cast<std::size_t>(r); }

std::string_view to_string(RelationType r) noexcept;
std::optional<RelationType> parse_relation(std::string_view name);

/// A connective: one to five lowercase, whitespace-free tokens.
using Phrase = std::vector<std::string>;

std::string join_phrase(const Phrase& phrase);
std::string to_lower(std::string_view s);

struct ConnectiveMatch {
  RelationType relation;
  Phrase phrase;
  std::size_t length;

  bool operator==(const ConnectiveMatch&) const = default;
};

/// Relation -> connective phrase sets. Immutable once built; every phrase
/// belongs to exactly one relation.
class Taxonomy {
 public:
  static constexpr std::size_t kMaxPhraseTokens = 5;

  /// The ten relations with their connectives as listed in the reference table.
  static const Taxonomy& builtin();

  /// Parses `<relation>: phrase | phrase ...` lines; '#' comments and blank
  /// lines are skipped. Throws ValidationError on unknown relations,
  /// cross-relation duplicates or malformed phrases.
  static Taxonomy parse(std::string_view text);
  static Taxonomy from_file(const std::filesystem::path& path);

  const std::vector<Phrase>& phrases(RelationType r) const { return entries_[index_of(r)]; }
  std::optional<RelationType> relation_of(const Phrase& phrase) const;
  std::optional<RelationType> relation_of(std::span<const std::string> tokens) const;
  std::size_t phrase_count() const noexcept { return index_.size(); }
  std::size_t max_phrase_length() const noexcept { return max_length_; }

  /// Longest phrase matching `tokens[start..]`, compared case-insensitively.
  std::optional<ConnectiveMatch> longest_match(std::span<const std::string> tokens,
                                               std::size_t start) const;

  /// Canonical text form; parse(serialize()) reproduces the taxonomy.
  std::string serialize() const;

  bool operator==(const Taxonomy& other) const { return entries_ == other.entries_; }

 private:
  void add(RelationType r, Phrase phrase);

  std::array<std::vector<Phrase>, kRelationCount> entries_{};
  std::unordered_map<std::string, RelationType> index_;
  std::size_t max_length_ = 0;
};

/// Built-in taxonomy in file syntax, as shipped in data/taxonomy.txt.
std::string_view builtin_taxonomy_text() noexcept;

}  // namespace logictree
