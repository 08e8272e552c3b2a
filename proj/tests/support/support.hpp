#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "logictree/logic_tree.hpp"
#include "logictree/taxonomy.hpp"

namespace logictree::testing {

std::filesystem::path fixture(const std::string& relative);
std::filesystem::path data_file(const std::string& name);

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

void write_file(const std::filesystem::path& path, const std::string& content);
std::string slurp(const std::filesystem::path& path);

/// Bracketed constituency trees for statements made of filler clauses joined
/// by taxonomy connectives, nested up to `max_depth`. Connectives appear both
/// between clauses and sentence-initially; some statements carry stray
/// connective words inside noun phrases.
std::vector<std::string> synthetic_statements(std::size_t count, std::uint64_t seed,
                                              const Taxonomy& taxonomy, int max_depth = 3);

/// Random logic tree whose internal nodes draw relations and connectives from
/// `taxonomy` and whose leaves draw 1-4 tokens from `vocabulary`.
LogicTree random_logic_tree(std::mt19937_64& rng, int max_depth, const Taxonomy& taxonomy,
                            const std::vector<std::string>& vocabulary);

/// Confusion-matrix reference for the metric definitions, kept separate from
/// the library code on purpose.
struct OracleClass {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  long support = 0;
  long predicted = 0;
};

struct OracleReport {
  std::map<std::string, OracleClass> per_class;
  double macro_precision = 0;
  double macro_recall = 0;
  double macro_f1 = 0;
  double accuracy = 0;
};

OracleReport oracle_metrics(const std::vector<std::string>& preds,
                            const std::vector<std::string>& golds);

}  // namespace logictree::testing
