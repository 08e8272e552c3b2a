#include "logictree/corpus_stats.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "logictree/catalog.hpp"
#include "logictree/error.hpp"
#include "logictree/parallel.hpp"

namespace logictree {

std::set<RelationType> relation_presence(const LogicTree& tree) {
  std::set<RelationType> out;
  for (const auto& n : tree.nodes()) {
    if (const auto* in = std::get_if<LogicInternal>(&n)) out.insert(in->relation);
  }
  return out;
}

std::set<RelationType> raw_relation_presence(const std::vector<std::string>& tokens,
                                             const Taxonomy& taxonomy) {
  std::set<RelationType> out;
  const std::span<const std::string> all(tokens);
  for (std::size_t start = 0; start < tokens.size(); ++start) {
    const auto limit = std::min(taxonomy.max_phrase_length(), tokens.size() - start);
    for (std::size_t len = 1; len <= limit; ++len) {
      if (const auto r = taxonomy.relation_of(all.subspan(start, len))) out.insert(*r);
    }
  }
  return out;
}

std::string group_of(const CorpusRecord& record, Grouping grouping) {
  if (grouping == Grouping::Label) return record.label;
  return to_lower(record.label) == to_lower(kNoFallacy) ? "no fallacy" : "fallacy";
}

const PresenceRow* RelationPresenceTable::find(const std::string& dataset,
                                               const std::string& group) const {
  for (const auto& r : rows) {
    if (r.dataset == dataset && r.group == group) return &r;
  }
  return nullptr;
}

std::string RelationPresenceTable::to_tsv() const {
  std::string out = "dataset\tclass\tsamples";
  for (const auto r : kAllRelations) {
    out += '\t';
    out += to_string(r);
  }
  out += '\n';
  char buf[32];
  for (const auto& row : rows) {
    out += row.dataset + '\t' + row.group + '\t' + std::to_string(row.samples);
    for (const auto v : row.ratio) {
      std::snprintf(buf, sizeof buf, "\t%.2f", v);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

RelationPresenceTable class_distribution(const std::vector<CorpusRecord>& corpus,
                                         const Taxonomy& taxonomy, PresenceMode mode,
                                         Grouping grouping, std::size_t jobs) {
  if (corpus.empty()) throw ValidationError("class_distribution: empty corpus");

  std::vector<std::set<RelationType>> present(corpus.size());
  parallel_for(corpus.size(), jobs, [&](std::size_t i) {
    const auto& rec = corpus[i];
    if (mode == PresenceMode::Raw) {
      present[i] = raw_relation_presence(record_tokens(rec), taxonomy);
      return;
    }
    if (rec.trees.empty()) {
      throw ValidationError("record '" + rec.id + "' has no constituency trees (tree mode)");
    }
    present[i] = relation_presence(build_logic_tree(rec.trees, taxonomy));
  });

  std::map<std::pair<std::string, std::string>, PresenceRow> rows;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& rec = corpus[i];
    const auto dataset = rec.dataset.empty() ? std::string("corpus") : rec.dataset;
    auto& row = rows[{dataset, group_of(rec, grouping)}];
    row.dataset = dataset;
    row.group = group_of(rec, grouping);
    ++row.samples;
    for (const auto r : present[i]) ++row.hits[index_of(r)];
  }

  RelationPresenceTable table;
  for (auto& [_, row] : rows) {
    for (std::size_t k = 0; k < kRelationCount; ++k) {
      row.ratio[k] = 100.0 * static_cast<double>(row.hits[k]) / static_cast<double>(row.samples);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace logictree
