#include "doctest.h"

#include <cstdlib>
#include <sstream>

#include "cli_commands.hpp"
#include "json.hpp"
#include "logictree/tree_encoder.hpp"
#include "support.hpp"

using namespace logictree;
using Json = nlohmann::json;

namespace {

struct RunResult {
  int status;
  std::string out;
  std::string err;
};

RunResult run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int status = cli::run(args, out, err);
  return {status, out.str(), err.str()};
}

std::vector<Json> read_jsonl(const std::filesystem::path& p) {
  std::vector<Json> rows;
  std::istringstream in(testing::slurp(p));
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) rows.push_back(Json::parse(line));
  }
  return rows;
}

std::string corpus_line(const std::string& id, const std::string& text, const std::string& label,
                        const std::string& dataset = "argotario") {
  return Json{{"id", id}, {"text", text}, {"label", label}, {"split", "test"}, {"dataset", dataset}}
             .dump() +
         "\n";
}

}  // namespace

TEST_CASE("build writes one tree per record") {
  testing::TempDir dir;
  const auto r = run({"build", "--trees", testing::fixture("figure1/trees.txt").string(), "--corpus",
                      testing::fixture("figure1/corpus.jsonl").string(), "--taxonomy",
                      testing::fixture("figure1/taxonomy.txt").string(), "--out",
                      (dir / "out").string()});
  CHECK(r.status == 0);
  const auto rows = read_jsonl(dir / "out/logic_trees.jsonl");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0]["id"] == "fig1a");
  CHECK(rows[0]["tree"]["relation"] == "causal");
  CHECK(rows[0]["tree"]["connective"] == "therefore");
  CHECK(rows[0]["tree"]["left"]["relation"] == "temporal");
  CHECK(rows[1]["tree"]["relation"] == "analogy");
  CHECK(r.out.find("causal=2") != std::string::npos);
  const auto manifest = Json::parse(testing::slurp(dir / "out/manifest.json"));
  CHECK(manifest["command"] == "build");
  CHECK(manifest["records"] == 2);
  CHECK(manifest["inputs"][0]["sha256"].get<std::string>().size() == 64);
}

TEST_CASE("statements without connectives become single leaves") {
  testing::TempDir dir;
  testing::write_file(dir / "t.txt", "x\t(S (NP (NNS dogs)) (VP (VBP bark)))\n");
  const auto r = run({"build", "--trees", (dir / "t.txt").string(), "--out", (dir / "o").string()});
  CHECK(r.status == 0);
  const auto rows = read_jsonl(dir / "o/logic_trees.jsonl");
  REQUIRE(rows.size() == 1);
  CHECK_FALSE(rows[0]["tree"].contains("relation"));
  CHECK(rows[0]["tree"]["text"] == "dogs bark");
}

TEST_CASE("outputs are byte-identical across runs") {
  ::setenv("SOURCE_DATE_EPOCH", "1700000000", 1);
  testing::TempDir dir;
  for (const char* name : {"a", "b"}) {
    CHECK(run({"build", "--trees", testing::fixture("figure1/trees.txt").string(), "--out",
               (dir / name).string(), "--jobs", "2"})
              .status == 0);
  }
  ::unsetenv("SOURCE_DATE_EPOCH");
  for (const char* f : {"logic_trees.jsonl", "summary.txt", "manifest.json"}) {
    CHECK(testing::slurp(dir / "a" / f) == testing::slurp(dir / "b" / f));
  }
}

TEST_CASE("tree ids missing from the corpus fail the run") {
  testing::TempDir dir;
  testing::write_file(dir / "c.jsonl", corpus_line("other", "dogs bark", "No Fallacy"));
  const auto r = run({"build", "--trees", testing::fixture("figure1/trees.txt").string(),
                      "--corpus", (dir / "c.jsonl").string(), "--out", (dir / "o").string()});
  CHECK(r.status == 1);
  CHECK(r.out.find("fatal failures: ") != std::string::npos);
}

TEST_CASE("usage errors") {
  CHECK(run({}).status == 2);
  CHECK(run({"build"}).status == 2);
  CHECK(run({"frobnicate"}).status == 2);
  testing::TempDir dir;
  CHECK(run({"build", "--trees", (dir / "missing.txt").string(), "--out", (dir / "o").string()})
            .status == 2);
}

TEST_CASE("eval scores a predictions file") {
  testing::TempDir dir;
  testing::write_file(dir / "gold.jsonl", corpus_line("1", "a", "Red Herring") +
                                              corpus_line("2", "b", "No Fallacy") +
                                              corpus_line("3", "c", "Ad Hominem") +
                                              corpus_line("4", "d", "No Fallacy"));
  testing::write_file(dir / "pred.jsonl",
                      "{\"id\": \"1\", \"label\": \"fallacy\"}\n{\"id\": \"2\", \"label\": "
                      "\"fallacy\"}\n{\"id\": \"3\", \"label\": \"no_fallacy\"}\n{\"id\": \"4\", "
                      "\"label\": \"no_fallacy\"}\n");
  const auto r = run({"eval", "--predictions", (dir / "pred.jsonl").string(), "--corpus",
                      (dir / "gold.jsonl").string(), "--out", (dir / "o").string()});
  CHECK(r.status == 0);
  const auto report = Json::parse(testing::slurp(dir / "o/report.json"));
  CHECK(report["fallacy"]["precision"] == 50.0);
  CHECK(report["fallacy"]["recall"] == 50.0);
  CHECK(report["accuracy"] == 50.0);

  testing::write_file(dir / "short.jsonl", "{\"id\": \"1\", \"label\": \"fallacy\"}\n");
  CHECK(run({"eval", "--predictions", (dir / "short.jsonl").string(), "--corpus",
             (dir / "gold.jsonl").string(), "--out", (dir / "o2").string()})
            .status == 1);
}

TEST_CASE("encode with averaging parameters returns the shared leaf vector") {
  testing::TempDir dir;
  testing::write_file(dir / "t.txt",
                      "s\t(S (S (NN rain)) (IN because) (S (NN wind)))\n");
  testing::write_file(dir / "v.txt", "rain 1 2\nwind 1 2\nbecause 1 2\n");
  save_params(dir / "p.txt", averaging_params<double>(2));
  const auto r = run({"encode", "--trees", (dir / "t.txt").string(), "--vectors",
                      (dir / "v.txt").string(), "--params", (dir / "p.txt").string(),
                      "--grad-check", "4", "--out", (dir / "o").string()});
  CHECK(r.status == 0);
  const auto rows = read_jsonl(dir / "o/embeddings.jsonl");
  REQUIRE(rows.size() == 1);
  CHECK(rows[0]["embedding"][0].get<double>() == doctest::Approx(1.0));
  CHECK(rows[0]["embedding"][1].get<double>() == doctest::Approx(2.0));
  CHECK(rows[0]["projected"] == rows[0]["embedding"]);
  CHECK(rows[0]["grad_check_max_relative_error"].get<double>() <= 1e-4);
}

TEST_CASE("zero-shot replay of an always-yes log") {
  testing::TempDir dir;
  std::string corpus;
  for (int i = 0; i < 10; ++i) {
    corpus += corpus_line(std::to_string(i), "statement number " + std::to_string(i),
                          i % 2 == 0 ? "Red Herring" : "No Fallacy");
  }
  testing::write_file(dir / "c.jsonl", corpus);
  REQUIRE(run({"textualize", "--corpus", (dir / "c.jsonl").string(), "--out",
               (dir / "p").string()})
              .status == 0);
  std::string log;
  for (const auto& row : read_jsonl(dir / "p/prompts.jsonl")) {
    log += Json{{"id", row["id"]}, {"prompt", row["prompt"]}, {"response", "Yes"}, {"error", ""}}
               .dump() +
           "\n";
  }
  testing::write_file(dir / "log.jsonl", log);

  const auto r = run({"zeroshot", "--corpus", (dir / "c.jsonl").string(), "--replay",
                      (dir / "log.jsonl").string(), "--out", (dir / "z").string()});
  CHECK(r.status == 0);
  CHECK(r.err.find("differs") == std::string::npos);
  const auto report = Json::parse(testing::slurp(dir / "z/report.json"));
  CHECK(report["fallacy"]["recall"] == 100.0);
  CHECK(report["accuracy"] == 50.0);
  CHECK(read_jsonl(dir / "z/predictions.jsonl").size() == 10);
}

TEST_CASE("zero-shot replay with a missing log entry") {
  testing::TempDir dir;
  testing::write_file(dir / "c.jsonl", corpus_line("1", "a", "Red Herring") +
                                           corpus_line("2", "b", "No Fallacy"));
  testing::write_file(dir / "log.jsonl", "{\"id\": \"1\", \"prompt\": \"\", \"response\": \"No\"}\n");
  const auto r = run({"zeroshot", "--corpus", (dir / "c.jsonl").string(), "--replay",
                      (dir / "log.jsonl").string(), "--out", (dir / "z").string()});
  CHECK(r.status == 1);
  const auto rows = read_jsonl(dir / "z/predictions.jsonl");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0]["label"] == "no_fallacy");
  CHECK(rows[1]["label"].is_null());
}

TEST_CASE("stats prints a table") {
  testing::TempDir dir;
  const auto r = run({"stats", "--corpus", testing::fixture("figure1/corpus.jsonl").string(),
                      "--trees", testing::fixture("figure1/trees.txt").string(), "--out",
                      (dir / "o").string()});
  CHECK(r.status == 0);
  CHECK(testing::slurp(dir / "o/stats.tsv").starts_with("dataset\tclass\tsamples\t"));
  CHECK(r.out.find("logic\tfallacy\t2\t") != std::string::npos);
}
