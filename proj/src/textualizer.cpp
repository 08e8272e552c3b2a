#include "logictree/textualizer.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "logictree/error.hpp"

namespace logictree {

namespace {

constexpr std::string_view kCotScaffold =
    "Let's think step by step. Firstly, explain the logical relations and logical structure in "
    "the text. Secondly, choose the answer. Please mimic the output style in the Example. "
    "Example: {example_text}. Output: Firstly, explain the logical relations and logical "
    "structure in the text. {example_explanation}. Secondly, choose the answer. Answer: "
    "{example_label}.  Text: {text}. Output:";

PromptTemplates make_builtin() {
  PromptTemplates t;
  const std::string detect_head =
      "The task is to detect whether the Text contains logical fallacy or not. The logical "
      "fallacy can be {fallacy_options}. {tree_sentence}Please answer Yes if the Text contains "
      "logical fallacy, else answer No. ";
  const std::string classify_head =
      "The task is to classify the fallacy type of the Text. Choose one answer from these "
      "fallacy types: {fallacy_names}. The definitions of each fallacy type are as follows. "
      "{fallacy_definitions}. {tree_sentence}Please classify the fallacy type of the Text. ";
  t.detection = detect_head + "Text: {text}. Answer:";
  t.classification = classify_head + "Text: {text}. Answer:";
  t.detection_cot = detect_head + std::string(kCotScaffold);
  t.classification_cot = classify_head + std::string(kCotScaffold);
  t.tree_sentence = "The logical relations in the Text are presented in this table: {table}. ";
  return t;
}

/// Single left-to-right pass; substituted values are never rescanned.
std::string fill(std::string_view tmpl, const std::map<std::string, std::string>& values) {
  std::string out;
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    const auto open = tmpl.find('{', pos);
    if (open == std::string_view::npos) break;
    const auto close = tmpl.find('}', open);
    if (close == std::string_view::npos) break;
    const auto key = std::string(tmpl.substr(open + 1, close - open - 1));
    out.append(tmpl.substr(pos, open - pos));
    if (const auto it = values.find(key); it != values.end()) {
      out += it->second;
    } else {
      out.append(tmpl.substr(open, close - open + 1));
    }
    pos = close + 1;
  }
  out.append(tmpl.substr(std::min(pos, tmpl.size())));
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::map<std::string, std::string> common_values(std::string_view text, const TripletTable& table,
                                                 const PromptOptions& options,
                                                 const PromptTemplates& templates) {
  std::map<std::string, std::string> v;
  v["text"] = std::string(text);
  v["tree_sentence"] =
      options.with_tree ? fill(templates.tree_sentence, {{"table", render_table(table)}}) : "";
  if (options.cot != nullptr) {
    v["example_text"] = options.cot->text;
    v["example_explanation"] = options.cot->explanation;
    v["example_label"] = options.cot->label;
  }
  return v;
}

}  // namespace

TripletTable to_triplets(const LogicTree& tree) {
  struct Row {
    Triplet triplet;
    std::size_t start;
  };
  std::vector<Row> rows;
  // Pre-order walk; the stable sort below keeps this order among full ties.
  std::vector<std::pair<NodeId, std::size_t>> stack{{tree.root(), 0}};
  while (!stack.empty()) {
    const auto [id, depth] = stack.back();
    stack.pop_back();
    const auto* in = tree.internal(id);
    if (in == nullptr) continue;
    rows.push_back({Triplet{join_tokens(tree.text(in->left)), in->relation, in->connective,
                            join_tokens(tree.text(in->right)), depth},
                    in->connective_span.begin});
    stack.emplace_back(in->right, depth + 1);
    stack.emplace_back(in->left, depth + 1);
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.triplet.depth != b.triplet.depth) return a.triplet.depth > b.triplet.depth;
    return a.start < b.start;
  });
  TripletTable out;
  out.reserve(rows.size());
  for (auto& r : rows) out.push_back(std::move(r.triplet));
  return out;
}

std::string render_table(const TripletTable& table) {
  std::string out(kTableHeader);
  if (table.empty()) return out + "\nnone";
  for (const auto& t : table) {
    out += '\n';
    out += t.left_text;
    out += " | ";
    out += to_string(t.relation);
    out += " (" + join_phrase(t.connective) + ") | ";
    out += t.right_text;
  }
  return out;
}

const PromptTemplates& PromptTemplates::builtin() {
  static const PromptTemplates instance = make_builtin();
  return instance;
}

PromptTemplates PromptTemplates::from_json_text(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("prompt templates: ") + e.what());
  }
  PromptTemplates t;
  t.detection = doc.at("detection").get<std::string>();
  t.classification = doc.at("classification").get<std::string>();
  t.detection_cot = doc.at("detection_cot").get<std::string>();
  t.classification_cot = doc.at("classification_cot").get<std::string>();
  t.tree_sentence = doc.at("tree_sentence").get<std::string>();
  return t;
}

PromptTemplates PromptTemplates::from_file(const std::filesystem::path& path) {
  return from_json_text(read_file(path));
}

std::string PromptTemplates::to_json_text() const {
  nlohmann::ordered_json doc;
  doc["detection"] = detection;
  doc["classification"] = classification;
  doc["detection_cot"] = detection_cot;
  doc["classification_cot"] = classification_cot;
  doc["tree_sentence"] = tree_sentence;
  return doc.dump(2) + "\n";
}

CotExample CotExample::from_file(const std::filesystem::path& path) {
  const auto doc = nlohmann::json::parse(read_file(path));
  return CotExample{doc.at("text").get<std::string>(), doc.at("explanation").get<std::string>(),
                    doc.at("label").get<std::string>()};
}

bool supports_detection(std::string_view dataset) {
  return dataset == "argotario" || dataset == "reddit" || dataset == "climate";
}

std::string build_detection_prompt(std::string_view text, const TripletTable& table,
                                   const FallacyCatalog& catalog, std::string_view dataset,
                                   const PromptOptions& options) {
  if (!supports_detection(dataset)) {
    throw ValidationError("fallacy detection is not defined for dataset '" +
                          std::string(dataset) + "'");
  }
  const auto& templates = options.templates ? *options.templates : PromptTemplates::builtin();
  std::string fallacies;
  for (const auto* e : catalog.for_dataset(dataset)) {
    if (!fallacies.empty()) fallacies += ", ";
    fallacies += e->name + " (" + e->definition + ")";
  }
  auto values = common_values(text, table, options, templates);
  values["fallacy_options"] = std::move(fallacies);
  return fill(options.cot ? templates.detection_cot : templates.detection, values);
}

std::string build_classification_prompt(std::string_view text, const TripletTable& table,
                                        const FallacyCatalog& catalog, std::string_view dataset,
                                        const PromptOptions& options) {
  const auto& templates = options.templates ? *options.templates : PromptTemplates::builtin();
  std::string names;
  std::string definitions;
  for (const auto* e : catalog.for_dataset(dataset)) {
    if (!names.empty()) {
      names += ", ";
      definitions += ". ";
    }
    names += e->name;
    definitions += e->name + ": " + e->definition;
  }
  auto values = common_values(text, table, options, templates);
  values["fallacy_names"] = std::move(names);
  values["fallacy_definitions"] = std::move(definitions);
  return fill(options.cot ? templates.classification_cot : templates.classification, values);
}

}  // namespace logictree
