#include "support.hpp"

#include <atomic>
#include <fstream>
#include <set>
#include <sstream>

#include "logictree/error.hpp"

namespace logictree::testing {

namespace fs = std::filesystem;

fs::path fixture(const std::string& relative) { return fs::path(LOGICTREE_FIXTURE_DIR) / relative; }

fs::path data_file(const std::string& name) { return fs::path(LOGICTREE_DATA_DIR) / name; }

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  std::random_device rd;
  path_ = fs::temp_directory_path() /
          ("logictree-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

namespace {

const std::vector<std::string> kNouns = {"dog",  "cat",   "farmer", "river", "teacher",
                                         "storm", "city", "price",  "engine", "garden"};
const std::vector<std::string> kVerbs = {"barked", "slept",   "grew",    "fell",   "rose",
                                         "changed", "arrived", "vanished", "failed", "shone"};

class Generator {
 public:
  Generator(std::uint64_t seed, const Taxonomy& taxonomy) : rng_(seed) {
    for (const auto r : kAllRelations) {
      for (const auto& p : taxonomy.phrases(r)) phrases_.push_back(p);
    }
  }

  std::string statement(int max_depth) { return "(ROOT " + node(max_depth) + ")"; }

 private:
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }

  std::string clause() {
    std::string np = "(NP (DT the) (NN " + kNouns[pick(kNouns.size())] + "))";
    // A stray single-token connective inside the noun phrase.
    if (chance(0.15)) np = "(NP (DT no) (NN " + kNouns[pick(kNouns.size())] + "))";
    std::string vp = "(VP (VBD " + kVerbs[pick(kVerbs.size())] + ")";
    if (chance(0.3)) vp += " (NP (DT a) (NN " + kNouns[pick(kNouns.size())] + "))";
    return "(S " + np + " " + vp + "))";
  }

  std::string connective() {
    const auto& p = phrases_[pick(phrases_.size())];
    if (p.size() == 1) return "(CC " + p[0] + ")";
    std::string out = "(ADVP";
    for (const auto& t : p) out += " (RB " + t + ")";
    return out + ")";
  }

  std::string node(int depth) {
    if (depth <= 0 || chance(0.25)) return clause();
    switch (pick(4)) {
      case 0:
      case 1:
        return "(S " + node(depth - 1) + " (, ,) " + connective() + " " + node(depth - 1) + ")";
      case 2:
        return "(S (SBAR " + connective() + " " + node(depth - 1) + ") (, ,) " + node(depth - 1) +
               ")";
      default:
        return "(S " + node(depth - 1) + " (, ,) " + connective() + ")";
    }
  }

  std::mt19937_64 rng_;
  std::vector<Phrase> phrases_;
};

}  // namespace

std::vector<std::string> synthetic_statements(std::size_t count, std::uint64_t seed,
                                              const Taxonomy& taxonomy, int max_depth) {
  Generator g(seed, taxonomy);
  std::vector<std::string> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(g.statement(max_depth));
  return out;
}

LogicTree random_logic_tree(std::mt19937_64& rng, int max_depth, const Taxonomy& taxonomy,
                            const std::vector<std::string>& vocabulary) {
  const auto pick = [&](std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  };
  if (max_depth <= 1 || std::bernoulli_distribution(0.3)(rng)) {
    std::vector<std::string> text(1 + pick(4));
    for (auto& t : text) t = vocabulary[pick(vocabulary.size())];
    return LogicTree::leaf(std::move(text));
  }
  RelationType r;
  do {
    r = kAllRelations[pick(kRelationCount)];
  } while (taxonomy.phrases(r).empty());
  const auto& phrases = taxonomy.phrases(r);
  auto connective = phrases[pick(phrases.size())];
  const auto left = random_logic_tree(rng, max_depth - 1, taxonomy, vocabulary);
  const auto right = random_logic_tree(rng, max_depth - 1, taxonomy, vocabulary);
  return LogicTree::join(r, std::move(connective), left, right);
}

OracleReport oracle_metrics(const std::vector<std::string>& preds,
                            const std::vector<std::string>& golds) {
  std::set<std::string> names(golds.begin(), golds.end());
  names.insert(preds.begin(), preds.end());
  const std::vector<std::string> classes(names.begin(), names.end());
  const auto k = classes.size();
  const auto index = [&](const std::string& c) {
    return static_cast<std::size_t>(
        std::lower_bound(classes.begin(), classes.end(), c) - classes.begin());
  };

  // confusion[g][p]: gold class g predicted as p.
  std::vector<std::vector<long>> confusion(k, std::vector<long>(k, 0));
  for (std::size_t i = 0; i < golds.size(); ++i) ++confusion[index(golds[i])][index(preds[i])];

  OracleReport r;
  long trace = 0;
  long total = 0;
  int present = 0;
  for (std::size_t c = 0; c < k; ++c) {
    long row = 0;
    long col = 0;
    for (std::size_t j = 0; j < k; ++j) {
      row += confusion[c][j];
      col += confusion[j][c];
      total += confusion[c][j];
    }
    const long tp = confusion[c][c];
    trace += tp;
    OracleClass m;
    m.support = row;
    m.predicted = col;
    m.precision = col == 0 ? 0.0 : 100.0 * static_cast<double>(tp) / static_cast<double>(col);
    m.recall = row == 0 ? 0.0 : 100.0 * static_cast<double>(tp) / static_cast<double>(row);
    m.f1 = m.precision + m.recall == 0 ? 0.0
                                       : 2.0 * m.precision * m.recall / (m.precision + m.recall);
    r.per_class[classes[c]] = m;
    if (row > 0) {
      r.macro_precision += m.precision;
      r.macro_recall += m.recall;
      r.macro_f1 += m.f1;
      ++present;
    }
  }
  r.macro_precision /= present;
  r.macro_recall /= present;
  r.macro_f1 /= present;
  r.accuracy = 100.0 * static_cast<double>(trace) / static_cast<double>(total);
  return r;
}

}  // namespace logictree::testing
