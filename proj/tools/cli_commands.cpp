#include "cli_commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "logictree/catalog.hpp"
#include "logictree/corpus.hpp"
#include "logictree/corpus_stats.hpp"
#include "logictree/digest.hpp"
#include "logictree/error.hpp"
#include "logictree/eval_metrics.hpp"
#include "logictree/llm_gateway.hpp"
#include "logictree/logic_tree.hpp"
#include "logictree/parallel.hpp"
#include "logictree/serialize.hpp"
#include "logictree/taxonomy.hpp"
#include "logictree/textualizer.hpp"
#include "logictree/tree_encoder.hpp"

namespace logictree::cli {

namespace {

namespace fs = std::filesystem;

struct Options {
  std::string taxonomy;
  std::string trees;
  std::string corpus;
  std::string out;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;

  // stats
  std::string mode = "tree";
  std::string grouping = "binary";

  // textualize / zeroshot
  std::string task = "detection";
  std::string dataset;
  bool with_tree = false;
  std::string cot_example;
  std::string templates;
  std::string catalog;
  std::string endpoint;
  std::string model = "gpt-3.5-turbo";
  std::string auth_env = "OPENAI_API_KEY";
  std::string replay;
  double temperature = 0;
  int max_tokens = 256;
  long timeout_ms = 60000;
  std::size_t max_concurrent = 4;
  int retries = 3;
  long backoff_ms = 500;

  // encode
  std::string vectors;
  std::string params;
  long proj_dim = 0;
  std::string save_params;
  std::size_t grad_probes = 0;

  // eval
  std::string predictions;
};

/// Accumulates the run manifest; written last into the output directory.
class Manifest {
 public:
  Manifest(std::string command, const Options& o) : command_(std::move(command)), seed_(o.seed) {
    started_ = timestamp();
  }

  void input(const std::string& role, const std::string& path) {
    if (path.empty()) return;
    inputs_.push_back({{"role", role}, {"path", path}, {"sha256", sha256_file(path)}});
  }
  void config(Json j) { config_ = std::move(j); }
  void taxonomy(const Taxonomy& t) { taxonomy_digest_ = sha256_hex(t.serialize()); }
  void output(const fs::path& p) { outputs_.push_back(p.filename().string()); }

  std::size_t records = 0;
  std::size_t fatal = 0;
  std::size_t soft = 0;
  std::vector<std::string> failures;

  void write(const fs::path& dir) const {
    Json m;
    m["command"] = command_;
    m["inputs"] = inputs_;
    m["config_sha256"] = sha256_hex(config_.dump());
    m["config"] = config_;
    m["taxonomy_sha256"] = taxonomy_digest_.empty() ? Json() : Json(taxonomy_digest_);
    m["seed"] = seed_;
    m["started"] = started_;
    m["finished"] = timestamp();
    m["outputs"] = outputs_;
    m["records"] = records;
    m["fatal_failures"] = fatal;
    m["soft_failures"] = soft;
    m["failure_messages"] = failures;
    std::ofstream out(dir / "manifest.json", std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + (dir / "manifest.json").string());
    out << m.dump(2) << '\n';
  }

 private:
  /// UTC ISO-8601; SOURCE_DATE_EPOCH pins it for reproducible runs.
  static std::string timestamp() {
    std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    if (const char* e = std::getenv("SOURCE_DATE_EPOCH"); e != nullptr && *e != '\0') {
      t = static_cast<std::time_t>(std::strtoll(e, nullptr, 10));
    }
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
  }

  std::string command_;
  std::uint64_t seed_;
  std::string started_;
  Json inputs_ = Json::array();
  Json config_ = Json::object();
  std::string taxonomy_digest_;
  std::vector<std::string> outputs_;
};

class Output {
 public:
  Output(const std::string& dir, Manifest& manifest) : dir_(dir), manifest_(manifest) {
    if (dir.empty()) throw ValidationError("--out is required");
    fs::create_directories(dir_);
  }

  void text(const std::string& name, const std::string& content) {
    const auto path = dir_ / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << content;
    manifest_.output(path);
  }

  void jsonl(const std::string& name, const std::vector<Json>& rows) {
    std::string s;
    for (const auto& r : rows) s += r.dump() + "\n";
    text(name, s);
  }

  fs::path path(const std::string& name) {
    manifest_.output(dir_ / name);
    return dir_ / name;
  }

  const fs::path& dir() const { return dir_; }

 private:
  fs::path dir_;
  Manifest& manifest_;
};

Taxonomy load_taxonomy(const Options& o) {
  return o.taxonomy.empty() ? Taxonomy::builtin() : Taxonomy::from_file(o.taxonomy);
}

FallacyCatalog load_catalog(const Options& o) {
  return o.catalog.empty() ? FallacyCatalog::builtin() : FallacyCatalog::from_file(o.catalog);
}

/// A corpus record plus whatever went wrong while assembling it.
struct Item {
  CorpusRecord record;
  std::vector<std::string> problems;
};

CorpusRecord record_with_id(const std::string& id) {
  CorpusRecord r;
  r.id = id;
  return r;
}

/// Joins the corpus and trees files by id. Without a corpus, records come
/// from the trees file in order. Ids present in only one file are problems
/// of that record, as are tree parse errors.
std::vector<Item> load_items(const Options& o, bool need_trees) {
  if (o.corpus.empty() && o.trees.empty()) throw ValidationError("--corpus or --trees is required");
  if (need_trees && o.trees.empty()) throw ValidationError("--trees is required");
  std::optional<TreesFile> trees;
  if (!o.trees.empty()) trees = read_trees(o.trees);

  std::vector<Item> items;
  if (!o.corpus.empty()) {
    for (auto& r : read_corpus(o.corpus)) items.push_back({std::move(r), {}});
  } else {
    for (const auto& id : trees->order) items.push_back({record_with_id(id), {}});
  }
  if (!o.dataset.empty()) {
    for (auto& it : items) it.record.dataset = o.dataset;
  }
  if (!trees) return items;

  std::set<std::string> known;
  for (auto& it : items) {
    const auto& id = it.record.id;
    known.insert(id);
    if (const auto e = trees->errors.find(id); e != trees->errors.end()) {
      for (const auto& err : e->second) {
        it.problems.push_back("trees line " + std::to_string(err.line) + ": " + err.message);
      }
    }
    if (const auto t = trees->trees.find(id); t != trees->trees.end()) {
      it.record.trees = t->second;
    } else if (need_trees && it.problems.empty()) {
      it.problems.push_back("no constituency trees for this id");
    }
  }
  for (const auto& id : trees->order) {
    if (!known.contains(id)) {
      items.push_back({record_with_id(id), {"trees file id not present in the corpus"}});
    }
  }
  return items;
}

/// Records problem items as fatal failures; returns whether `it` is usable.
bool usable(const Item& it, Manifest& m, std::ostream& err) {
  if (it.problems.empty()) return true;
  for (const auto& p : it.problems) {
    const auto msg = it.record.id + ": " + p;
    err << "error: " << msg << '\n';
    m.failures.push_back(msg);
  }
  ++m.fatal;
  return false;
}

void soft(Manifest& m, std::ostream& err, const std::string& id, const Diagnostics& d) {
  if (d.empty()) return;
  ++m.soft;
  for (const auto& msg : d.messages) err << "warning: " << id << ": " << msg << '\n';
}

std::vector<double> to_std(const Vector<double>& v) { return {v.data(), v.data() + v.size()}; }

int finish(Manifest& m, Output& out, std::ostream& os) {
  m.write(out.dir());
  os << "records: " << m.records << ", fatal failures: " << m.fatal
     << ", soft failures: " << m.soft << '\n';
  return m.fatal == 0 ? 0 : 1;
}

// ---------------------------------------------------------------------------

int cmd_build(const Options& o, std::ostream& os, std::ostream& err) {
  Manifest m("build", o);
  const auto tax = load_taxonomy(o);
  m.input("trees", o.trees);
  m.input("corpus", o.corpus);
  m.input("taxonomy", o.taxonomy);
  m.taxonomy(tax);
  Output out(o.out, m);

  const auto items = load_items(o, true);
  std::vector<std::optional<LogicTree>> built(items.size());
  parallel_for(items.size(), o.jobs, [&](std::size_t i) {
    if (items[i].problems.empty()) built[i] = build_logic_tree(items[i].record.trees, tax);
  });

  std::array<std::size_t, kRelationCount> counts{};
  std::vector<Json> rows;
  for (std::size_t i = 0; i < items.size(); ++i) {
    ++m.records;
    if (!usable(items[i], m, err)) continue;
    for (const auto& n : built[i]->nodes()) {
      if (const auto* in = std::get_if<LogicInternal>(&n)) ++counts[index_of(in->relation)];
    }
    rows.push_back(Json{{"id", items[i].record.id}, {"tree", to_json(*built[i])}});
  }
  out.jsonl("logic_trees.jsonl", rows);

  std::string summary = "internal nodes:";
  for (const auto r : kAllRelations) {
    summary += " " + std::string(to_string(r)) + "=" + std::to_string(counts[index_of(r)]);
  }
  os << summary << '\n';
  out.text("summary.txt", summary + "\n");
  return finish(m, out, os);
}

struct PromptSetup {
  FallacyCatalog catalog;
  std::optional<PromptTemplates> templates;
  std::optional<CotExample> cot;
  Taxonomy taxonomy;
};

PromptSetup prompt_setup(const Options& o, Manifest& m) {
  if (o.task != "detection" && o.task != "classification") {
    throw ValidationError("--task must be detection or classification");
  }
  PromptSetup s{load_catalog(o), std::nullopt, std::nullopt, load_taxonomy(o)};
  if (!o.templates.empty()) s.templates = PromptTemplates::from_file(o.templates);
  if (!o.cot_example.empty()) s.cot = CotExample::from_file(o.cot_example);
  m.input("corpus", o.corpus);
  m.input("trees", o.trees);
  m.input("taxonomy", o.taxonomy);
  m.input("catalog", o.catalog);
  m.input("templates", o.templates);
  m.input("cot_example", o.cot_example);
  m.taxonomy(s.taxonomy);
  return s;
}

struct PromptRow {
  std::size_t item;
  TripletTable table;
  std::string prompt;
  std::string error;  // set when the record failed fatally
};

/// One row per record in scope, in corpus order. Classification leaves out
/// "No Fallacy" records. Failures are already counted in the manifest.
std::vector<PromptRow> make_prompts(const std::vector<Item>& items, const PromptSetup& s,
                                    const Options& o, Manifest& m, std::ostream& err) {
  if (o.corpus.empty()) throw ValidationError("--corpus is required");
  PromptOptions popts;
  popts.with_tree = o.with_tree;
  popts.cot = s.cot ? &*s.cot : nullptr;
  popts.templates = s.templates ? &*s.templates : nullptr;

  const auto in_scope = [&](const Item& it) {
    return o.task == "detection" || it.record.label != kNoFallacy || !it.problems.empty();
  };
  std::vector<PromptRow> rows(items.size());
  parallel_for(items.size(), o.jobs, [&](std::size_t i) {
    const auto& r = items[i].record;
    rows[i].item = i;
    if (!items[i].problems.empty() || !in_scope(items[i])) return;
    try {
      if (r.dataset.empty()) throw ValidationError("no dataset; pass --dataset");
      if (o.with_tree) rows[i].table = to_triplets(build_logic_tree(r.trees, s.taxonomy));
      rows[i].prompt =
          o.task == "detection"
              ? build_detection_prompt(r.text, rows[i].table, s.catalog, r.dataset, popts)
              : build_classification_prompt(r.text, rows[i].table, s.catalog, r.dataset, popts);
    } catch (const Error& e) {
      rows[i].error = e.what();
    }
  });

  std::vector<PromptRow> out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!in_scope(items[i])) continue;
    ++m.records;
    if (!usable(items[i], m, err)) {
      rows[i].error = items[i].problems.front();
    } else if (!rows[i].error.empty()) {
      usable(Item{items[i].record, {rows[i].error}}, m, err);
    }
    out.push_back(std::move(rows[i]));
  }
  return out;
}

Json prompt_config(const Options& o) {
  return {{"task", o.task}, {"dataset", o.dataset}, {"with_tree", o.with_tree}};
}

int cmd_textualize(const Options& o, std::ostream& os, std::ostream& err) {
  Manifest m("textualize", o);
  const auto setup = prompt_setup(o, m);
  m.config(prompt_config(o));
  Output out(o.out, m);
  const auto items = load_items(o, o.with_tree);
  std::vector<Json> rows;
  for (const auto& p : make_prompts(items, setup, o, m, err)) {
    if (!p.error.empty()) continue;
    rows.push_back(Json{{"id", items[p.item].record.id},
                        {"table", render_table(p.table)},
                        {"prompt", p.prompt}});
  }
  out.jsonl("prompts.jsonl", rows);
  return finish(m, out, os);
}

Json metrics_json(const MetricsReport& r) {
  const auto cls = [](const ClassMetrics& c) {
    return Json{{"precision", c.precision}, {"recall", c.recall},  {"f1", c.f1},
                {"support", c.support},     {"predicted", c.predicted}, {"in_gold", c.in_gold}};
  };
  Json j;
  j["total"] = r.total;
  j["accuracy"] = r.accuracy;
  if (r.positive) j["fallacy"] = cls(*r.positive);
  j["macro_precision"] = r.macro_precision;
  j["macro_recall"] = r.macro_recall;
  j["macro_f1"] = r.macro_f1;
  j["per_class"] = Json::object();
  for (const auto& [name, c] : r.per_class) j["per_class"][name] = cls(c);
  j["diagnostics"] = r.diagnostics;
  return j;
}

void write_report(Output& out, const MetricsReport& report, std::ostream& os) {
  const auto text = report.to_text();
  os << text;
  out.text("report.txt", text);
  out.text("report.json", metrics_json(report).dump(2) + "\n");
}

DetectionLabel gold_detection(const CorpusRecord& r) {
  return r.label == kNoFallacy ? DetectionLabel::NoFallacy : DetectionLabel::Fallacy;
}

int cmd_zeroshot(const Options& o, std::ostream& os, std::ostream& err) {
  Manifest m("zeroshot", o);
  const auto setup = prompt_setup(o, m);
  m.input("replay", o.replay);
  auto cfg = prompt_config(o);
  cfg["model"] = o.model;
  cfg["endpoint"] = o.endpoint;
  cfg["temperature"] = o.temperature;
  cfg["max_tokens"] = o.max_tokens;
  cfg["replay"] = !o.replay.empty();
  m.config(cfg);
  Output out(o.out, m);

  const auto items = load_items(o, o.with_tree);
  const auto prompts = make_prompts(items, setup, o, m, err);

  std::vector<PromptJob> jobs;
  for (const auto& p : prompts) {
    if (p.error.empty()) jobs.push_back({items[p.item].record.id, p.prompt});
  }

  std::vector<CompletionRecord> completions;
  if (!o.replay.empty()) {
    const auto log = read_completion_log(o.replay);
    for (const auto& job : jobs) {
      CompletionRecord c{job.id, job.prompt, std::nullopt, ""};
      if (const auto it = log.find(job.id); it == log.end()) {
        c.error = "no logged response for this id";
      } else {
        c.response = it->second.response;
        c.error = it->second.error;
        if (!c.response && c.error.empty()) c.error = "logged record has no response";
        if (it->second.prompt != job.prompt) {
          ++m.soft;
          err << "warning: " << job.id << ": logged prompt differs from the rebuilt prompt\n";
        }
      }
      completions.push_back(std::move(c));
    }
  } else {
    if (o.endpoint.empty()) throw ValidationError("--endpoint or --replay is required");
    GatewayConfig gc;
    gc.endpoint = o.endpoint;
    gc.model = o.model;
    gc.auth_env = o.auth_env;
    gc.temperature = o.temperature;
    gc.max_tokens = o.max_tokens;
    gc.timeout = std::chrono::milliseconds(o.timeout_ms);
    gc.max_concurrent = o.max_concurrent;
    gc.retry_limit = o.retries;
    gc.backoff_base = std::chrono::milliseconds(o.backoff_ms);
    ChatClient client(gc);
    completions = run_batch(jobs, client, std::max(o.jobs, o.max_concurrent));
  }
  write_completion_log(out.path("completions.jsonl"), completions);

  // Every record in scope gets one outcome row: a label or the failure.
  const auto& map = LabelMap::builtin();
  std::vector<Json> rows;
  std::vector<DetectionLabel> dpred;
  std::vector<DetectionLabel> dgold;
  std::vector<std::string> cpred;
  std::vector<std::string> cgold;
  std::size_t k = 0;
  for (const auto& p : prompts) {
    const auto& rec = items[p.item].record;
    Json row{{"id", rec.id}};
    if (!p.error.empty()) {
      row["label"] = nullptr;
      row["error"] = p.error;
      rows.push_back(std::move(row));
      continue;
    }
    const auto& c = completions[k++];
    if (!c.response) {
      usable(Item{rec, {"completion failed: " + c.error}}, m, err);
      row["label"] = nullptr;
      row["error"] = c.error;
      rows.push_back(std::move(row));
      continue;
    }
    Diagnostics diag;
    if (o.task == "detection") {
      const auto ans = parse_detection(*c.response, &diag);
      dpred.push_back(ans.label);
      dgold.push_back(gold_detection(rec));
      row["label"] = to_string(ans.label);
      row["parsed"] = ans.parsed;
    } else {
      auto label = parse_classification(*c.response, setup.catalog, map, rec.dataset, &diag);
      row["label"] = label;
      row["parsed"] = label != kUnparsedLabel;
      cpred.push_back(std::move(label));
      cgold.push_back(rec.label);
    }
    soft(m, err, rec.id, diag);
    rows.push_back(std::move(row));
  }
  out.jsonl("predictions.jsonl", rows);

  if (!dpred.empty() || !cpred.empty()) {
    const auto report = o.task == "detection" ? detection_metrics(dpred, dgold)
                                              : classification_metrics(cpred, cgold, map);
    write_report(out, report, os);
  }
  return finish(m, out, os);
}

int cmd_stats(const Options& o, std::ostream& os, std::ostream& err) {
  Manifest m("stats", o);
  if (o.mode != "tree" && o.mode != "raw") throw ValidationError("--mode must be tree or raw");
  if (o.grouping != "binary" && o.grouping != "label") {
    throw ValidationError("--grouping must be binary or label");
  }
  if (o.corpus.empty()) throw ValidationError("--corpus is required");
  const auto tax = load_taxonomy(o);
  m.input("corpus", o.corpus);
  m.input("trees", o.trees);
  m.input("taxonomy", o.taxonomy);
  m.taxonomy(tax);
  m.config({{"mode", o.mode}, {"grouping", o.grouping}, {"dataset", o.dataset}});
  Output out(o.out, m);

  const bool tree_mode = o.mode == "tree";
  std::vector<CorpusRecord> records;
  for (auto& it : load_items(o, tree_mode)) {
    ++m.records;
    if (usable(it, m, err)) records.push_back(std::move(it.record));
  }
  if (records.empty()) throw ValidationError("no usable records");
  const auto table =
      class_distribution(records, tax, tree_mode ? PresenceMode::Tree : PresenceMode::Raw,
                         o.grouping == "label" ? Grouping::Label : Grouping::Binary, o.jobs);
  const auto tsv = table.to_tsv();
  os << tsv;
  out.text("stats.tsv", tsv);
  return finish(m, out, os);
}

int cmd_encode(const Options& o, std::ostream& os, std::ostream& err) {
  Manifest m("encode", o);
  if (o.vectors.empty()) throw ValidationError("--vectors is required");
  const auto tax = load_taxonomy(o);
  m.input("trees", o.trees);
  m.input("corpus", o.corpus);
  m.input("taxonomy", o.taxonomy);
  m.input("vectors", o.vectors);
  m.input("params", o.params);
  m.taxonomy(tax);
  m.config({{"proj_dim", o.proj_dim}, {"grad_probes", o.grad_probes}});
  Output out(o.out, m);

  const auto table = load_vectors<double>(o.vectors);
  EncoderParams<double> params;
  if (!o.params.empty()) {
    params = load_params<double>(o.params);
  } else {
    const auto dp = o.proj_dim > 0 ? o.proj_dim : table.dim();
    params = init_params<double>(o.seed, table.dim(), dp);
  }
  if (params.dim() != table.dim()) {
    throw ValidationError("parameter dimension " + std::to_string(params.dim()) +
                          " does not match vector dimension " + std::to_string(table.dim()));
  }
  if (!o.save_params.empty()) {
    save_params(o.save_params, params);
    os << "parameters written to " << o.save_params << '\n';
  }

  const auto items = load_items(o, true);
  struct Result {
    Json row;
    Diagnostics diag;
  };
  std::vector<Result> results(items.size());
  parallel_for(items.size(), o.jobs, [&](std::size_t i) {
    if (!items[i].problems.empty()) return;
    const auto tree = build_logic_tree(items[i].record.trees, tax);
    const auto v = encode_tree(tree, params, table, &results[i].diag);
    auto& row = results[i].row;
    row["id"] = items[i].record.id;
    row["embedding"] = to_std(v);
    row["projected"] = to_std(project(v, params));
    if (o.grad_probes > 0) {
      row["grad_check_max_relative_error"] =
          grad_check(tree, params, table, 1e-3, o.grad_probes, o.seed + i).max_relative_error;
    }
  });

  std::vector<Json> rows;
  for (std::size_t i = 0; i < items.size(); ++i) {
    ++m.records;
    if (!usable(items[i], m, err)) continue;
    soft(m, err, items[i].record.id, results[i].diag);
    rows.push_back(std::move(results[i].row));
  }
  out.jsonl("embeddings.jsonl", rows);
  return finish(m, out, os);
}

int cmd_eval(const Options& o, std::ostream& os, std::ostream& err) {
  Manifest m("eval", o);
  if (o.task != "detection" && o.task != "classification") {
    throw ValidationError("--task must be detection or classification");
  }
  if (o.predictions.empty() || o.corpus.empty()) {
    throw ValidationError("--predictions and --corpus are required");
  }
  m.input("predictions", o.predictions);
  m.input("corpus", o.corpus);
  m.config({{"task", o.task}});
  Output out(o.out, m);

  std::map<std::string, std::string> predicted;
  {
    std::istringstream in(read_text_file(o.predictions));
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
      ++n;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      try {
        const auto j = nlohmann::json::parse(line);
        const auto id = j.at("id").is_string() ? j.at("id").get<std::string>() : j.at("id").dump();
        predicted[id] = j.at("label").get<std::string>();
      } catch (const nlohmann::json::exception& e) {
        throw ValidationError("predictions line " + std::to_string(n) + ": " + e.what());
      }
    }
  }

  const auto& map = LabelMap::builtin();
  std::vector<DetectionLabel> dpred;
  std::vector<DetectionLabel> dgold;
  std::vector<std::string> cpred;
  std::vector<std::string> cgold;
  for (const auto& rec : read_corpus(o.corpus)) {
    if (o.task == "classification" && rec.label == kNoFallacy) continue;
    ++m.records;
    const auto it = predicted.find(rec.id);
    if (it == predicted.end()) {
      usable(Item{rec, {"no prediction for this id"}}, m, err);
      continue;
    }
    if (o.task == "detection") {
      const auto p = parse_detection_label(it->second);
      if (!p) {
        usable(Item{rec, {"unrecognised detection label '" + it->second + "'"}}, m, err);
        continue;
      }
      dpred.push_back(*p);
      dgold.push_back(gold_detection(rec));
    } else {
      cpred.push_back(it->second);
      cgold.push_back(rec.label);
    }
  }
  const auto report = o.task == "detection" ? detection_metrics(dpred, dgold)
                                            : classification_metrics(cpred, cgold, map);
  m.soft += report.diagnostics.size();
  write_report(out, report, os);
  return finish(m, out, os);
}

void common_flags(CLI::App* app, Options& o) {
  app->add_option("--taxonomy", o.taxonomy, "Connective taxonomy file (built-in table by default)");
  app->add_option("--out", o.out, "Output directory")->required();
  app->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app->add_option("--seed", o.seed, "Seed for every random choice");
}

void prompt_flags(CLI::App* app, Options& o) {
  app->add_option("--trees", o.trees, "Constituency trees file");
  app->add_option("--corpus", o.corpus, "Corpus JSON Lines file")->required();
  app->add_option("--task", o.task, "detection or classification");
  app->add_option("--dataset", o.dataset, "Dataset whose fallacy list is used");
  app->add_flag("--with-tree", o.with_tree, "Append the textualized logical structure tree");
  app->add_option("--cot-example", o.cot_example, "Chain-of-thought example (JSON)");
  app->add_option("--templates", o.templates, "Prompt templates (JSON)");
  app->add_option("--catalog", o.catalog, "Fallacy catalog (JSON)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Logical structure trees for fallacy detection and classification", "logictree");
  app.require_subcommand(1);
  Options o;

  auto* build = app.add_subcommand("build", "Build logical structure trees");
  common_flags(build, o);
  build->add_option("--trees", o.trees, "Constituency trees file")->required();
  build->add_option("--corpus", o.corpus, "Corpus JSON Lines file; ids must match the trees");

  auto* textualize = app.add_subcommand("textualize", "Render prompts with optional tree tables");
  common_flags(textualize, o);
  prompt_flags(textualize, o);

  auto* stats = app.add_subcommand("stats", "Per-class relation presence ratios");
  common_flags(stats, o);
  stats->add_option("--corpus", o.corpus, "Corpus JSON Lines file")->required();
  stats->add_option("--trees", o.trees, "Constituency trees file (tree mode)");
  stats->add_option("--mode", o.mode, "tree or raw");
  stats->add_option("--grouping", o.grouping, "binary or label");
  stats->add_option("--dataset", o.dataset, "Dataset name for records without one");

  auto* encode = app.add_subcommand("encode", "Tree embeddings and their projections");
  common_flags(encode, o);
  encode->add_option("--trees", o.trees, "Constituency trees file")->required();
  encode->add_option("--corpus", o.corpus, "Corpus JSON Lines file");
  encode->add_option("--vectors", o.vectors, "Token vector file")->required();
  encode->add_option("--params", o.params, "Encoder parameter file (random init otherwise)");
  encode->add_option("--proj-dim", o.proj_dim, "Projection width for random init");
  encode->add_option("--save-params", o.save_params, "Write the parameters used");
  encode->add_option("--grad-check", o.grad_probes, "Finite-difference probes per tree");

  auto* eval = app.add_subcommand("eval", "Score predictions against gold labels");
  common_flags(eval, o);
  eval->add_option("--predictions", o.predictions, "Predictions JSON Lines {id, label}")
      ->required();
  eval->add_option("--corpus", o.corpus, "Gold corpus")->required();
  eval->add_option("--task", o.task, "detection or classification");

  auto* zeroshot = app.add_subcommand("zeroshot", "Prompt a chat endpoint and score the answers");
  common_flags(zeroshot, o);
  prompt_flags(zeroshot, o);
  zeroshot->add_option("--endpoint", o.endpoint, "Chat-completions URL");
  zeroshot->add_option("--model", o.model, "Model name");
  zeroshot->add_option("--auth-env", o.auth_env, "Variable holding the bearer token");
  zeroshot->add_option("--replay", o.replay, "Score a logged completions file offline");
  zeroshot->add_option("--temperature", o.temperature, "Sampling temperature");
  zeroshot->add_option("--max-tokens", o.max_tokens, "Completion length limit");
  zeroshot->add_option("--timeout-ms", o.timeout_ms, "Per-request timeout");
  zeroshot->add_option("--max-concurrent", o.max_concurrent, "Requests in flight")
      ->check(CLI::PositiveNumber);
  zeroshot->add_option("--retries", o.retries, "Retries for transient failures");
  zeroshot->add_option("--backoff-ms", o.backoff_ms, "Initial retry delay");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*build) return cmd_build(o, out, err);
    if (*textualize) return cmd_textualize(o, out, err);
    if (*stats) return cmd_stats(o, out, err);
    if (*encode) return cmd_encode(o, out, err);
    if (*eval) return cmd_eval(o, out, err);
    if (*zeroshot) return cmd_zeroshot(o, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace logictree::cli
