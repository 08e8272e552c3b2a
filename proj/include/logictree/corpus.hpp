#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "logictree/syntax.hpp"

namespace logictree {

enum class Split { Train, Dev, Test, Unspecified };

std::string_view to_string(Split s) noexcept;
std::optional<Split> parse_split(std::string_view s);

struct CorpusRecord {
  std::string id;
  std::string text;
  std::string label;  // canonical fallacy name or "No Fallacy"
  Split split = Split::Unspecified;
  std::string dataset;
  std::vector<ConTree> trees;  // sentence parses, empty until attached
};

/// One JSON object per line with fields id, text, label, split and an
/// optional dataset. Blank lines are skipped.
std::vector<CorpusRecord> read_corpus(const std::filesystem::path& path);
std::vector<CorpusRecord> parse_corpus(std::string_view text);

struct TreeLineError {
  std::size_t line;
  std::string id;
  std::string message;
};

struct TreesFile {
  std::vector<std::string> order;                        // ids in first-seen order
  std::map<std::string, std::vector<ConTree>> trees;     // sentence trees per id
  std::map<std::string, std::vector<TreeLineError>> errors;
};

/// Lines are `<id>\t<bracketed tree>`; consecutive lines sharing an id are the
/// sentences of one statement. A line without a tab is a record of its own
/// whose id is its 1-based tree ordinal. '#' lines are comments. Malformed
/// trees are recorded per line and reading continues.
TreesFile parse_trees(std::string_view text);
TreesFile read_trees(const std::filesystem::path& path);

/// Whitespace split with punctuation and English clitics ("n't", "'s", "'d",
/// "'ll", "'re", "'ve", "'m") separated, for records without parses.
std::vector<std::string> simple_tokenize(std::string_view text);

/// Leaf tokens of the record's trees, or simple_tokenize(text) without trees.
std::vector<std::string> record_tokens(const CorpusRecord& record);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace logictree
