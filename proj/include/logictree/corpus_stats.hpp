#pragma once

#include <array>
#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "logictree/corpus.hpp"
#include "logictree/logic_tree.hpp"
#include "logictree/taxonomy.hpp"

namespace logictree {

std::set<RelationType> relation_presence(const LogicTree& tree);

/// Relations with at least one connective occurrence anywhere in `tokens`,
/// overlapping occurrences included.
std::set<RelationType> raw_relation_presence(const std::vector<std::string>& tokens,
                                             const Taxonomy& taxonomy);

enum class PresenceMode { Tree, Raw };
/// Binary groups records into "fallacy" / "no fallacy"; Label keeps each label.
enum class Grouping { Binary, Label };

struct PresenceRow {
  std::string dataset;
  std::string group;
  std::size_t samples = 0;
  std::array<std::size_t, kRelationCount> hits{};
  std::array<double, kRelationCount> ratio{};  // percent

  double percent(RelationType r) const { return ratio[index_of(r)]; }
};

struct RelationPresenceTable {
  std::vector<PresenceRow> rows;  // sorted by dataset then group

  const PresenceRow* find(const std::string& dataset, const std::string& group) const;
  /// Tab-separated: dataset, class, samples, then one column per relation (2 decimals).
  std::string to_tsv() const;
};

/// Per-class share of samples containing each relation. Tree mode builds the
/// logical structure tree of every record (records need trees); raw mode scans
/// the token stream. `jobs` bounds worker threads.
RelationPresenceTable class_distribution(const std::vector<CorpusRecord>& corpus,
                                         const Taxonomy& taxonomy, PresenceMode mode,
                                         Grouping grouping = Grouping::Binary,
                                         std::size_t jobs = 1);

std::string group_of(const CorpusRecord& record, Grouping grouping);

}  // namespace logictree
