#pragma once

#include "json.hpp"
#include "logictree/logic_tree.hpp"

namespace logictree {

using Json = nlohmann::ordered_json;

/// Nested record form: internal nodes carry relation, connective, spans, text,
/// left and right; leaves carry text and span.
Json to_json(const LogicTree& tree);
LogicTree logic_tree_from_json(const Json& j);

Json to_json(const TokenSet& set);
TokenSet token_set_from_json(const Json& j);

}  // namespace logictree
