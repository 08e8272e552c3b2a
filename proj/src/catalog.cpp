#include "logictree/catalog.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "logictree/error.hpp"

namespace logictree {

namespace {

std::vector<FallacyEntry> builtin_entries() {
  return {
      {"Ad Hominem", {}, "the text attack a person instead of arguing against the claims",
       {{"argotario", 1}, {"logic", 1}}},
      {"Emotional Language", {"Appeal to Emotion"}, "the text arouse non-rational emotions",
       {{"argotario", 2}, {"logic", 7}}},
      {"Hasty Generalization", {"Faulty Generalization"},
       "the text draw a broad conclusion based on a limited sample of population",
       {{"argotario", 3}, {"reddit", 3}, {"climate", 6}, {"logic", 10}}},
      {"Irrelevant Authority", {"False Authority", "Fallacy of Credibility"},
       "the text cite an authority but the authority lacks relevant expertise",
       {{"argotario", 4}, {"reddit", 2}, {"climate", 5}, {"logic", 12}}},
      {"Red Herring", {"Fallacy of Relevance"}, "the text diverge the attention to irrelevant issues",
       {{"argotario", 5}, {"climate", 3}, {"logic", 13}}},
      {"Slippery Slope", {},
       "the text suggest taking a small initial step leads to a chain of related events "
       "culminating in significant effect",
       {{"reddit", 1}}},
      {"Black-and-White Fallacy", {"False Dilemma"},
       "the text present two alternative options as the only possibilities",
       {{"reddit", 4}, {"logic", 3}}},
      {"Ad Populum", {}, "the text affirm something is true because the majority thinks so",
       {{"reddit", 5}, {"logic", 2}}},
      {"Tradition Fallacy", {}, "the text argue the action has always been done in the tradition",
       {{"reddit", 6}}},
      {"Naturalistic Fallacy", {},
       "the text claim something is good or bad because it is natural or unnatural",
       {{"reddit", 7}}},
      {"Worse Problem Fallacy", {},
       "the text justify an issue by arguing more severe issues exists", {{"reddit", 8}}},
      {"Evading Burden of Proof", {"Evading the Burden of Proof"},
       "the text make a claim without evidence or supporting argument", {{"climate", 1}}},
      {"Cherry Picking", {}, "the text selectively present partial evidence to support a claim",
       {{"climate", 2}}},
      {"Strawman", {}, "the text distort the claim to another one to make it easier to attack",
       {{"climate", 4}}},
      {"False Cause", {"Post Hoc"},
       "the text assume two correlated events must also have a causal relation",
       {{"climate", 7}, {"logic", 4}}},
      {"False Analogy", {}, "the text assume two alike things must be alike in other aspects",
       {{"climate", 8}}},
      {"Vagueness", {}, "the text use ambiguous words, terms, or phrases", {{"climate", 9}}},
      {"Circular Reasoning", {"Circular Claim"},
       "the end of the text come back to the beginning without having proven itself",
       {{"logic", 5}}},
      {"Deductive Fallacy", {"Fallacy of Logic"}, "the text has an error in the logical reasoning",
       {{"logic", 6}}},
      {"Equivocation", {},
       "the text use a key term in multiple senses, leading to ambiguous conclusions",
       {{"logic", 8}}},
      {"Extension Fallacy", {"Fallacy of Extension"},
       "the text attack an exaggerated version of the opponent’s claim", {{"logic", 9}}},
      {"Intentional Fallacy", {},
       "the text show intentional action to incorrectly support an argument", {{"logic", 11}}},
  };
}

}  // namespace

FallacyCatalog::FallacyCatalog(std::vector<FallacyEntry> entries) : entries_(std::move(entries)) {
  std::set<std::string> names;
  for (const auto& e : entries_) {
    if (e.name.empty()) throw ValidationError("fallacy entry without a name");
    if (!names.insert(e.name).second) throw ValidationError("duplicate fallacy '" + e.name + "'");
  }
  for (const auto& d : dataset_names()) {
    std::set<int> positions;
    for (const auto* e : for_dataset(d)) {
      if (!positions.insert(e->datasets.at(d)).second) {
        throw ValidationError("dataset '" + d + "' has two fallacies at one position");
      }
    }
  }
}

const FallacyCatalog& FallacyCatalog::builtin() {
  static const FallacyCatalog instance(builtin_entries());
  return instance;
}

FallacyCatalog FallacyCatalog::from_json_text(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("fallacy catalog: ") + e.what());
  }
  std::vector<FallacyEntry> entries;
  for (const auto& r : doc.at("fallacies")) {
    FallacyEntry e;
    e.name = r.at("name").get<std::string>();
    e.definition = r.at("definition").get<std::string>();
    if (r.contains("aliases")) e.aliases = r.at("aliases").get<std::vector<std::string>>();
    if (r.contains("datasets")) e.datasets = r.at("datasets").get<std::map<std::string, int>>();
    entries.push_back(std::move(e));
  }
  return FallacyCatalog(std::move(entries));
}

FallacyCatalog FallacyCatalog::from_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read fallacy catalog " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

std::string FallacyCatalog::to_json_text() const {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& e : entries_) {
    nlohmann::ordered_json r;
    r["name"] = e.name;
    r["aliases"] = e.aliases;
    r["definition"] = e.definition;
    r["datasets"] = e.datasets;
    arr.push_back(std::move(r));
  }
  nlohmann::ordered_json doc;
  doc["fallacies"] = std::move(arr);
  return doc.dump(2) + "\n";
}

const FallacyEntry* FallacyCatalog::find(std::string_view canonical_name) const {
  for (const auto& e : entries_) {
    if (e.name == canonical_name) return &e;
  }
  return nullptr;
}

bool FallacyCatalog::has_dataset(std::string_view dataset) const {
  return std::any_of(entries_.begin(), entries_.end(), [&](const FallacyEntry& e) {
    return e.datasets.contains(std::string(dataset));
  });
}

std::vector<std::string> FallacyCatalog::dataset_names() const {
  std::set<std::string> names;
  for (const auto& e : entries_) {
    for (const auto& [d, _] : e.datasets) names.insert(d);
  }
  return {names.begin(), names.end()};
}

std::vector<const FallacyEntry*> FallacyCatalog::for_dataset(std::string_view dataset) const {
  const std::string key(dataset);
  std::vector<const FallacyEntry*> out;
  for (const auto& e : entries_) {
    if (e.datasets.contains(key)) out.push_back(&e);
  }
  if (out.empty()) throw ValidationError("unknown dataset '" + key + "'");
  std::stable_sort(out.begin(), out.end(), [&](const FallacyEntry* a, const FallacyEntry* b) {
    return a->datasets.at(key) < b->datasets.at(key);
  });
  return out;
}

}  // namespace logictree
