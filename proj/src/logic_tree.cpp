#include "logictree/logic_tree.hpp"

#include <algorithm>
#include <functional>

#include "logictree/error.hpp"

namespace logictree {

namespace {

TokenSet trimmed(const TokenSet& set, const ConTree& tree) {
  return set.trim(tree.tokens(), is_punctuation);
}

/// Nearest proper ancestor of `from` whose span, minus `inner`, still holds a
/// non-punctuation token. Unary chains and punctuation-only wrappers are skipped.
std::optional<NodeId> growing_ancestor(const ConTree& tree, NodeId from, const Span& inner) {
  auto cur = tree.node(from).parent;
  while (cur) {
    const auto extra = trimmed(TokenSet(tree.node(*cur).span).subtract(TokenSet(inner)), tree);
    if (!extra.empty()) return cur;
    cur = tree.node(*cur).parent;
  }
  return std::nullopt;
}

}  // namespace

std::optional<MatchSite> find_first_match(const ConTree& tree, const TokenSet& within,
                                          const Taxonomy& taxonomy,
                                          const std::vector<Span>& consumed) {
  // Ancestors precede descendants in level order, so of two nested matches
  // sharing a start the longer phrase is always seen first.
  for (const auto id : tree.level_order(tree.root(), within)) {
    const auto& n = tree.node(id);
    if (n.span.size() > taxonomy.max_phrase_length()) continue;
    const auto relation = taxonomy.relation_of(tree.leaf_text(id));
    if (!relation) continue;
    const bool taken = std::any_of(consumed.begin(), consumed.end(),
                                   [&](const Span& c) { return c.overlaps(n.span); });
    if (taken) continue;
    Phrase phrase;
    for (const auto& t : tree.leaf_text(id)) phrase.push_back(to_lower(t));
    return MatchSite{std::move(phrase), *relation, id, n.span};
  }
  return std::nullopt;
}

std::optional<ArgumentSpans> extract_arguments(const ConTree& tree, const MatchSite& site) {
  const auto parent = growing_ancestor(tree, site.con_node, site.span);
  if (!parent) return std::nullopt;
  const auto& ps = tree.node(*parent).span;

  const auto alpha = trimmed(TokenSet(Span{ps.begin, site.span.begin}), tree);
  const auto beta = trimmed(TokenSet(Span{site.span.end, ps.end}), tree);
  if (!alpha.empty() && !beta.empty()) return ArgumentSpans{alpha, beta};

  // w + beta or alpha + w: the missing side is the grandparent's remainder.
  const auto grand = growing_ancestor(tree, *parent, ps);
  if (!grand) return std::nullopt;
  const auto remainder =
      trimmed(TokenSet(tree.node(*grand).span).subtract(TokenSet(ps)), tree);
  if (remainder.empty()) return std::nullopt;
  if (alpha.empty()) return ArgumentSpans{remainder, beta};
  return ArgumentSpans{alpha, remainder};
}

LogicTree LogicTree::leaf(std::vector<std::string> text, TokenSet span) {
  LogicTree t;
  t.add(LogicLeaf{std::move(span), std::move(text)});
  return t;
}

NodeId LogicTree::add(LogicNode node) {
  nodes_.push_back(std::move(node));
  return nodes_.size() - 1;
}

NodeId LogicTree::graft(const LogicTree& other, NodeId id) {
  const auto& src = other.node(id);
  if (const auto* leaf = std::get_if<LogicLeaf>(&src)) return add(*leaf);
  const auto& in = std::get<LogicInternal>(src);
  const auto mine = add(in);
  const auto l = graft(other, in.left);
  const auto r = graft(other, in.right);
  auto& placed = std::get<LogicInternal>(nodes_[mine]);
  placed.left = l;
  placed.right = r;
  return mine;
}

LogicTree LogicTree::join(RelationType relation, Phrase connective, const LogicTree& left,
                          const LogicTree& right, Span connective_span) {
  std::vector<std::string> text = left.text(left.root());
  text.insert(text.end(), connective.begin(), connective.end());
  const auto& rt = right.text(right.root());
  text.insert(text.end(), rt.begin(), rt.end());

  TokenSet span(std::vector<Span>{left.span(left.root()).hull(), connective_span,
                                  right.span(right.root()).hull()});
  LogicTree t;
  t.add(LogicInternal{relation, std::move(connective), connective_span, std::move(span),
                      std::move(text), 0, 0});
  const auto l = t.graft(left, left.root());
  const auto r = t.graft(right, right.root());
  auto& root = std::get<LogicInternal>(t.nodes_[0]);
  root.left = l;
  root.right = r;
  return t;
}

const std::vector<std::string>& LogicTree::text(NodeId id) const {
  return std::visit([](const auto& n) -> const std::vector<std::string>& { return n.text; },
                    node(id));
}

const TokenSet& LogicTree::span(NodeId id) const {
  return std::visit([](const auto& n) -> const TokenSet& { return n.span; }, node(id));
}

std::size_t LogicTree::internal_count() const {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const auto& n) {
    return std::holds_alternative<LogicInternal>(n);
  }));
}

std::size_t LogicTree::depth() const {
  if (nodes_.empty()) return 0;
  std::function<std::size_t(NodeId)> rec = [&](NodeId id) -> std::size_t {
    const auto* in = internal(id);
    if (in == nullptr) return 1;
    return 1 + std::max(rec(in->left), rec(in->right));
  };
  return rec(root_);
}

namespace {

class Builder {
 public:
  Builder(const ConTree& tree, const Taxonomy& taxonomy) : con_(tree), taxonomy_(taxonomy) {}

  BuildResult run() {
    const auto whole = trimmed(TokenSet(con_.node(con_.root()).span), con_);
    const auto root = build(whole);
    out_.set_root(root);
    return BuildResult{std::move(out_), std::move(consumed_)};
  }

 private:
  NodeId build(const TokenSet& region) {
    while (true) {
      const auto site = find_first_match(con_, region, taxonomy_, consumed_);
      if (!site) return out_.add(LogicLeaf{region, region.gather(con_.tokens())});
      consumed_.push_back(site->span);

      const auto args = extract_arguments(con_, *site);
      if (!args) continue;
      // Arguments never reach outside the region being decomposed.
      const auto left = trimmed(args->left.intersect(region), con_);
      const auto right = trimmed(args->right.intersect(region), con_);
      if (left.empty() || right.empty()) continue;

      const auto id = out_.add(LogicLeaf{});
      const auto l = build(left);
      const auto r = build(right);
      out_.replace(id, LogicInternal{site->relation, site->connective, site->span, region,
                                     region.gather(con_.tokens()), l, r});
      return id;
    }
  }

  const ConTree& con_;
  const Taxonomy& taxonomy_;
  LogicTree out_;
  std::vector<Span> consumed_;
};

}  // namespace

BuildResult build_logic_tree_traced(const ConTree& statement, const Taxonomy& taxonomy) {
  return Builder(statement, taxonomy).run();
}

LogicTree build_logic_tree(const std::vector<ConTree>& sentences, const Taxonomy& taxonomy) {
  if (sentences.empty()) throw ValidationError("statement has no constituency trees");
  return build_logic_tree_traced(ConTree::join(sentences), taxonomy).tree;
}

}  // namespace logictree
