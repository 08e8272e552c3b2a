#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "logictree/syntax.hpp"
#include "logictree/taxonomy.hpp"
#include "logictree/token_set.hpp"

namespace logictree {

/// A constituent whose text equals a taxonomy connective.
struct MatchSite {
  Phrase connective;
  RelationType relation;
  NodeId con_node;
  Span span;

  bool operator==(const MatchSite&) const = default;
};

struct ArgumentSpans {
  TokenSet left;
  TokenSet right;

  bool operator==(const ArgumentSpans&) const = default;
};

/// First node (breadth-first, left to right) inside `within` whose lowercased
/// text is a connective and whose span does not overlap any consumed span.
std::optional<MatchSite> find_first_match(const ConTree& tree, const TokenSet& within,
                                          const Taxonomy& taxonomy,
                                          const std::vector<Span>& consumed);

/// Argument rules for a matched connective w under its nearest span-growing
/// ancestor P:
///   P = alpha + w + beta  -> (alpha, beta)
///   P = w + beta          -> (G - P, beta), G the next span-growing ancestor
///   P = alpha + w         -> (alpha, G - P)
/// Arguments are trimmed of edge punctuation; nullopt when one ends up empty
/// or no qualifying ancestor exists.
std::optional<ArgumentSpans> extract_arguments(const ConTree& tree, const MatchSite& site);

struct LogicLeaf {
  TokenSet span;
  std::vector<std::string> text;

  bool operator==(const LogicLeaf&) const = default;
};

struct LogicInternal {
  RelationType relation;
  Phrase connective;
  Span connective_span;
  TokenSet span;                   // the argument region this subtree replaced
  std::vector<std::string> text;   // surface tokens of `span`
  NodeId left;
  NodeId right;

  bool operator==(const LogicInternal&) const = default;
};

using LogicNode = std::variant<LogicLeaf, LogicInternal>;

/// Binary tree with connectives on internal nodes and argument text on leaves.
/// Arena storage; children always have larger ids than their parent.
class LogicTree {
 public:
  static LogicTree leaf(std::vector<std::string> text, TokenSet span = {});
  /// Internal node over two existing trees; the text is left + connective + right.
  static LogicTree join(RelationType relation, Phrase connective, const LogicTree& left,
                        const LogicTree& right, Span connective_span = {});

  NodeId root() const noexcept { return root_; }
  const LogicNode& node(NodeId id) const { return nodes_.at(id); }
  std::size_t size() const noexcept { return nodes_.size(); }
  const std::vector<LogicNode>& nodes() const noexcept { return nodes_; }

  bool is_leaf(NodeId id) const { return std::holds_alternative<LogicLeaf>(node(id)); }
  const LogicInternal* internal(NodeId id) const { return std::get_if<LogicInternal>(&node(id)); }
  const std::vector<std::string>& text(NodeId id) const;
  const TokenSet& span(NodeId id) const;

  std::size_t internal_count() const;
  std::size_t depth() const;  // a lone leaf has depth 1

  /// Appends `node` and returns its id.
  NodeId add(LogicNode node);
  void replace(NodeId id, LogicNode node) { nodes_.at(id) = std::move(node); }
  void set_root(NodeId id) { root_ = id; }

  bool operator==(const LogicTree&) const = default;

 private:
  NodeId graft(const LogicTree& other, NodeId id);

  std::vector<LogicNode> nodes_;
  NodeId root_ = 0;
};

struct BuildResult {
  LogicTree tree;
  std::vector<Span> consumed;  // every connective span examined, used or rejected
};

/// Builds the logical structure tree of a statement given its sentence trees.
/// Several sentences are joined under a synthetic root first.
BuildResult build_logic_tree_traced(const ConTree& statement, const Taxonomy& taxonomy);
LogicTree build_logic_tree(const std::vector<ConTree>& sentences, const Taxonomy& taxonomy);

}  // namespace logictree
