#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "logictree/catalog.hpp"
#include "logictree/logic_tree.hpp"

namespace logictree {

struct Triplet {
  std::string left_text;
  RelationType relation;
  Phrase connective;
  std::string right_text;
  std::size_t depth = 0;

  bool operator==(const Triplet&) const = default;
};

/// Rows ordered deepest first; equal depths left to right by connective position.
using TripletTable = std::vector<Triplet>;

TripletTable to_triplets(const LogicTree& tree);

inline constexpr std::string_view kTableHeader = "argument 1, logical relation, argument 2";

/// Header line, then `<left> | <relation> (<connective>) | <right>` per row,
/// or `none` for an empty table. Lines are joined with '\n'.
std::string render_table(const TripletTable& table);

/// Instruction templates. Placeholders: {fallacy_options}, {fallacy_names},
/// {fallacy_definitions}, {tree_sentence}, {text}, {example_text},
/// {example_explanation}, {example_label}, {table}.
struct PromptTemplates {
  std::string detection;
  std::string classification;
  std::string detection_cot;
  std::string classification_cot;
  std::string tree_sentence;

  static const PromptTemplates& builtin();
  static PromptTemplates from_json_text(std::string_view text);
  static PromptTemplates from_file(const std::filesystem::path& path);
  std::string to_json_text() const;

  bool operator==(const PromptTemplates&) const = default;
};

/// Worked example spliced into the chain-of-thought variant.
struct CotExample {
  std::string text;
  std::string explanation;
  std::string label;

  static CotExample from_file(const std::filesystem::path& path);
};

struct PromptOptions {
  bool with_tree = false;
  const CotExample* cot = nullptr;  // chain-of-thought scaffold when set
  const PromptTemplates* templates = nullptr;  // built-in when null
};

/// Yes/No detection prompt. The Logic dataset has no benign class, so it is rejected.
std::string build_detection_prompt(std::string_view text, const TripletTable& table,
                                   const FallacyCatalog& catalog, std::string_view dataset,
                                   const PromptOptions& options = {});

std::string build_classification_prompt(std::string_view text, const TripletTable& table,
                                        const FallacyCatalog& catalog, std::string_view dataset,
                                        const PromptOptions& options = {});

bool supports_detection(std::string_view dataset);

}  // namespace logictree
