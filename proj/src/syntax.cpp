#include "logictree/syntax.hpp"

#include <array>
#include <cctype>
#include <deque>
#include <utility>

#include "logictree/error.hpp"

namespace logictree {

namespace {

constexpr std::array<std::pair<std::string_view, std::string_view>, 6> kEscapes = {{
    {"-LRB-", "("}, {"-RRB-", ")"}, {"-LSB-", "["},
    {"-RSB-", "]"}, {"-LCB-", "{"}, {"-RCB-", "}"},
}};

std::string replace_all(std::string_view s, std::string_view from, std::string_view to) {
  std::string out;
  std::size_t pos = 0;
  while (true) {
    const auto hit = s.find(from, pos);
    if (hit == std::string_view::npos) break;
    out.append(s.substr(pos, hit - pos));
    out.append(to);
    pos = hit + from.size();
  }
  out.append(s.substr(pos));
  return out;
}

}  // namespace

std::string decode_bracket_escape(std::string_view token) {
  std::string out(token);
  for (const auto& [esc, raw] : kEscapes) out = replace_all(out, esc, raw);
  return out;
}

std::string encode_bracket_escape(std::string_view token) {
  std::string out(token);
  for (const auto& [esc, raw] : kEscapes) out = replace_all(out, raw, esc);
  return out;
}

class ConTreeParser {
 public:
  explicit ConTreeParser(std::string_view text) : text_(text) {}

  ConTree run() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("empty tree expression", pos_);
    if (text_[pos_] != '(') throw ParseError("expected '('", pos_);
    parse_node(std::nullopt, 0);
    skip_ws();
    if (pos_ < text_.size()) throw ParseError("trailing content after tree", pos_);
    return std::move(tree_);
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string read_atom() {
    const auto start = pos_;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '(' || c == ')' || std::isspace(static_cast<unsigned char>(c))) break;
      ++pos_;
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  NodeId parse_node(std::optional<NodeId> parent, std::size_t depth) {
    const auto open = pos_;
    ++pos_;  // '('
    const NodeId id = tree_.nodes_.size();
    tree_.nodes_.emplace_back();
    tree_.nodes_[id].parent = parent;
    tree_.nodes_[id].depth = depth;

    skip_ws();
    std::string label;
    if (pos_ < text_.size() && text_[pos_] != '(' && text_[pos_] != ')') label = read_atom();
    tree_.nodes_[id].label = label;

    const auto first_token = tree_.tokens_.size();
    std::vector<NodeId> children;
    std::size_t word_count = 0;
    while (true) {
      skip_ws();
      if (pos_ >= text_.size()) throw ParseError("unbalanced brackets: missing ')'", pos_);
      const char c = text_[pos_];
      if (c == ')') {
        ++pos_;
        break;
      }
      if (c == '(') {
        children.push_back(parse_node(id, depth + 1));
      } else {
        auto word = decode_bracket_escape(read_atom());
        // Bare words among bracketed siblings become unlabeled leaves.
        const NodeId leaf = tree_.nodes_.size();
        tree_.nodes_.emplace_back();
        auto& n = tree_.nodes_[leaf];
        n.token = word;
        n.parent = id;
        n.depth = depth + 1;
        n.span = {tree_.tokens_.size(), tree_.tokens_.size() + 1};
        tree_.tokens_.push_back(std::move(word));
        children.push_back(leaf);
        ++word_count;
      }
    }

    if (children.empty()) throw ParseError("node '" + label + "' has no children", open);

    auto& self = tree_.nodes_[id];
    if (children.size() == 1 && word_count == 1) {
      // Preterminal "(TAG word)": the node itself is the leaf.
      const NodeId leaf = children.front();
      self.token = tree_.nodes_[leaf].token;
      self.span = tree_.nodes_[leaf].span;
      tree_.nodes_.pop_back();
      return id;
    }
    self.children = std::move(children);
    self.span = {first_token, tree_.tokens_.size()};
    return id;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  ConTree tree_;
};

ConTree ConTree::parse(std::string_view text) { return ConTreeParser(text).run(); }

NodeId ConTree::append_copy(const ConTree& src, NodeId id, std::size_t offset, NodeId parent,
                            std::size_t depth_shift) {
  const NodeId mine = nodes_.size();
  const auto& s = src.nodes_[id];
  nodes_.push_back(ConNode{s.label, s.token, {}, {s.span.begin + offset, s.span.end + offset},
                           parent, s.depth + depth_shift});
  std::vector<NodeId> kids;
  for (const auto c : s.children) kids.push_back(append_copy(src, c, offset, mine, depth_shift));
  nodes_[mine].children = std::move(kids);
  return mine;
}

ConTree ConTree::join(const std::vector<ConTree>& trees, std::string_view label) {
  if (trees.empty()) throw ValidationError("cannot join an empty list of trees");
  if (trees.size() == 1) return trees.front();
  ConTree out;
  out.nodes_.push_back(ConNode{std::string(label), std::nullopt, {}, {}, std::nullopt, 0});
  std::vector<NodeId> kids;
  for (const auto& t : trees) {
    const auto offset = out.tokens_.size();
    kids.push_back(out.append_copy(t, t.root(), offset, 0, 1));
    out.tokens_.insert(out.tokens_.end(), t.tokens_.begin(), t.tokens_.end());
  }
  out.nodes_[0].children = std::move(kids);
  out.nodes_[0].span = {0, out.tokens_.size()};
  return out;
}

std::span<const std::string> ConTree::leaf_text(NodeId id) const {
  const auto& s = node(id).span;
  return std::span<const std::string>(tokens_).subspan(s.begin, s.size());
}

std::vector<NodeId> ConTree::level_order(NodeId from, const std::optional<TokenSet>& within) const {
  std::vector<NodeId> out;
  std::deque<NodeId> queue{from};
  while (!queue.empty()) {
    const auto id = queue.front();
    queue.pop_front();
    const auto& n = nodes_[id];
    if (!within || within->contains(n.span)) out.push_back(id);
    // Descendants of a node outside `within` may still lie inside it.
    if (within && !within->overlaps(n.span)) continue;
    for (const auto c : n.children) queue.push_back(c);
  }
  return out;
}

void ConTree::render_into(NodeId id, std::string& out) const {
  const auto& n = nodes_[id];
  if (n.is_leaf()) {
    if (n.label.empty()) {
      out += encode_bracket_escape(*n.token);
    } else {
      out += '(' + n.label + ' ' + encode_bracket_escape(*n.token) + ')';
    }
    return;
  }
  out += '(';
  out += n.label;
  for (const auto c : n.children) {
    out += ' ';
    render_into(c, out);
  }
  out += ')';
}

std::string ConTree::render(NodeId id) const {
  std::string out;
  render_into(id, out);
  return out;
}

std::string ConTree::render() const { return render(root()); }

}  // namespace logictree
