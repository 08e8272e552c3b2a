#include "logictree/serialize.hpp"

#include <sstream>

#include "logictree/error.hpp"

namespace logictree {

namespace {

std::vector<std::string> split_words(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

Json node_to_json(const LogicTree& tree, NodeId id) {
  Json j;
  if (const auto* in = tree.internal(id)) {
    j["relation"] = std::string(to_string(in->relation));
    j["connective"] = join_phrase(in->connective);
    j["connective_span"] = Json::array({in->connective_span.begin, in->connective_span.end});
    j["span"] = to_json(in->span);
    j["text"] = join_tokens(in->text);
    j["left"] = node_to_json(tree, in->left);
    j["right"] = node_to_json(tree, in->right);
  } else {
    const auto& leaf = std::get<LogicLeaf>(tree.node(id));
    j["text"] = join_tokens(leaf.text);
    j["span"] = to_json(leaf.span);
  }
  return j;
}

NodeId node_from_json(const Json& j, LogicTree& out) {
  if (!j.is_object() || !j.contains("text")) {
    throw ValidationError("logic tree node needs a 'text' field");
  }
  const auto span = j.contains("span") ? token_set_from_json(j.at("span")) : TokenSet{};
  auto text = split_words(j.at("text").get<std::string>());
  if (!j.contains("relation")) return out.add(LogicLeaf{span, std::move(text)});

  const auto relation = parse_relation(j.at("relation").get<std::string>());
  if (!relation) {
    throw ValidationError("unknown relation '" + j.at("relation").get<std::string>() + "'");
  }
  Span cspan;
  if (j.contains("connective_span")) {
    cspan = {j.at("connective_span").at(0).get<std::size_t>(),
             j.at("connective_span").at(1).get<std::size_t>()};
  }
  const auto id = out.add(LogicLeaf{});
  const auto l = node_from_json(j.at("left"), out);
  const auto r = node_from_json(j.at("right"), out);
  out.replace(id, LogicInternal{*relation, split_words(j.at("connective").get<std::string>()),
                                cspan, span, std::move(text), l, r});
  return id;
}

}  // namespace

Json to_json(const TokenSet& set) {
  Json arr = Json::array();
  for (const auto& s : set.spans()) arr.push_back(Json::array({s.begin, s.end}));
  return arr;
}

TokenSet token_set_from_json(const Json& j) {
  std::vector<Span> spans;
  for (const auto& s : j) spans.push_back({s.at(0).get<std::size_t>(), s.at(1).get<std::size_t>()});
  return TokenSet(std::move(spans));
}

Json to_json(const LogicTree& tree) { return node_to_json(tree, tree.root()); }

LogicTree logic_tree_from_json(const Json& j) {
  LogicTree out;
  out.set_root(node_from_json(j, out));
  return out;
}

}  // namespace logictree
