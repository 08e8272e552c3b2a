#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace logictree {

inline constexpr std::string_view kNoFallacy = "No Fallacy";

struct FallacyEntry {
  std::string name;                         // canonical name used in prompts
  std::vector<std::string> aliases;         // dataset-specific names unified into `name`
  std::string definition;                   // one line, no trailing period
  std::map<std::string, int> datasets;      // dataset -> 1-based position in its list

  bool operator==(const FallacyEntry&) const = default;
};

/// Fallacy names and one-line definitions for the four benchmark datasets.
class FallacyCatalog {
 public:
  static const FallacyCatalog& builtin();
  static FallacyCatalog from_json_text(std::string_view text);
  static FallacyCatalog from_file(const std::filesystem::path& path);

  explicit FallacyCatalog(std::vector<FallacyEntry> entries);

  const std::vector<FallacyEntry>& entries() const noexcept { return entries_; }
  const FallacyEntry* find(std::string_view canonical_name) const;

  bool has_dataset(std::string_view dataset) const;
  std::vector<std::string> dataset_names() const;
  /// Entries of `dataset` in their listed order. Throws ValidationError for unknown datasets.
  std::vector<const FallacyEntry*> for_dataset(std::string_view dataset) const;

  std::string to_json_text() const;

  bool operator==(const FallacyCatalog& o) const { return entries_ == o.entries_; }

 private:
  std::vector<FallacyEntry> entries_;
};

}  // namespace logictree
