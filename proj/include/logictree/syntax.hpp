#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "logictree/token_set.hpp"

namespace logictree {

using NodeId = std::size_t;

struct ConNode {
  std::string label;
  std::optional<std::string> token;  // set on leaves only
  std::vector<NodeId> children;
  Span span;
  std::optional<NodeId> parent;
  std::size_t depth = 0;

  bool is_leaf() const noexcept { return token.has_value(); }
  bool operator==(const ConNode&) const = default;
};

/// Constituency tree stored as an arena; node 0 is the root. Immutable after
/// construction.
class ConTree {
 public:
  /// Parses one Penn-style bracketed expression, e.g. "(S (NP (PRP I)) (VP (VBP run)))".
  /// Bare words next to bracketed children become unlabeled leaves; escapes
  /// such as -LRB- are decoded. Throws ParseError with a character offset.
  static ConTree parse(std::string_view text);

  /// Places the trees side by side under a synthetic root labelled `label`,
  /// shifting spans into one token index space. A single tree is returned as is.
  static ConTree join(const std::vector<ConTree>& trees, std::string_view label = "DOC");

  NodeId root() const noexcept { return 0; }
  const ConNode& node(NodeId id) const { return nodes_.at(id); }
  std::size_t size() const noexcept { return nodes_.size(); }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }

  std::span<const std::string> leaf_text(NodeId id) const;
  std::string text(NodeId id) const { return join_tokens(leaf_text(id)); }

  /// Breadth-first from `from`, left to right within a depth. With `within`,
  /// only nodes whose span lies inside one of its spans are yielded.
  std::vector<NodeId> level_order(NodeId from, const std::optional<TokenSet>& within = {}) const;
  std::vector<NodeId> level_order(const std::optional<TokenSet>& within = {}) const {
    return level_order(root(), within);
  }

  /// Re-encodes bracket characters in tokens; parse(render()) == *this.
  std::string render() const;
  std::string render(NodeId id) const;

  bool operator==(const ConTree&) const = default;

 private:
  friend class ConTreeParser;
  NodeId append_copy(const ConTree& src, NodeId id, std::size_t offset, NodeId parent,
                     std::size_t depth_shift);
  void render_into(NodeId id, std::string& out) const;

  std::vector<ConNode> nodes_;
  std::vector<std::string> tokens_;
};

std::string decode_bracket_escape(std::string_view token);
std::string encode_bracket_escape(std::string_view token);

}  // namespace logictree
