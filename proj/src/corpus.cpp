#include "logictree/corpus.hpp"

#include <array>
#include <cctype>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "logictree/error.hpp"
#include "logictree/taxonomy.hpp"

namespace logictree {

std::string_view to_string(Split s) noexcept {
  switch (s) {
    case Split::Train: return "train";
    case Split::Dev: return "dev";
    case Split::Test: return "test";
    case Split::Unspecified: break;
  }
  return "";
}

std::optional<Split> parse_split(std::string_view s) {
  const auto v = to_lower(s);
  if (v == "train") return Split::Train;
  if (v == "dev" || v == "validation" || v == "valid") return Split::Dev;
  if (v == "test") return Split::Test;
  if (v.empty()) return Split::Unspecified;
  return std::nullopt;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<CorpusRecord> parse_corpus(std::string_view text) {
  std::vector<CorpusRecord> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("corpus line " + std::to_string(line_no) + ": " + e.what());
    }
    CorpusRecord r;
    if (!j.contains("id")) {
      throw ValidationError("corpus line " + std::to_string(line_no) + ": missing id");
    }
    r.id = j.at("id").is_string() ? j.at("id").get<std::string>() : j.at("id").dump();
    r.text = j.value("text", "");
    r.label = j.value("label", "");
    r.dataset = j.value("dataset", "");
    const auto split = parse_split(j.value("split", ""));
    if (!split) {
      throw ValidationError("corpus line " + std::to_string(line_no) + ": bad split");
    }
    r.split = *split;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<CorpusRecord> read_corpus(const std::filesystem::path& path) {
  return parse_corpus(read_text_file(path));
}

TreesFile parse_trees(std::string_view text) {
  TreesFile out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  std::size_t ordinal = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    ++ordinal;

    std::string id;
    std::string_view expr = line;
    const auto tab = line.find('\t');
    const auto paren = line.find('(');
    if (tab != std::string::npos && (paren == std::string::npos || tab < paren)) {
      id = line.substr(0, tab);
      expr = std::string_view(line).substr(tab + 1);
    } else {
      id = std::to_string(ordinal);
    }
    if (!out.trees.contains(id) && !out.errors.contains(id)) out.order.push_back(id);
    try {
      auto tree = ConTree::parse(expr);
      out.trees[id].push_back(std::move(tree));
    } catch (const ParseError& e) {
      out.errors[id].push_back({line_no, id, e.what()});
    }
  }
  return out;
}

TreesFile read_trees(const std::filesystem::path& path) { return parse_trees(read_text_file(path)); }

std::vector<std::string> simple_tokenize(std::string_view text) {
  static constexpr std::array<std::string_view, 7> kClitics = {"n't", "'s", "'d", "'ll",
                                                               "'re", "'ve", "'m"};
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string word;
  while (in >> word) {
    std::vector<std::string> tail;
    std::size_t b = 0;
    std::size_t e = word.size();
    while (b < e && std::ispunct(static_cast<unsigned char>(word[b])) && word[b] != '\'') {
      out.emplace_back(1, word[b]);
      ++b;
    }
    while (e > b && std::ispunct(static_cast<unsigned char>(word[e - 1])) && word[e - 1] != '\'') {
      tail.emplace_back(1, word[e - 1]);
      --e;
    }
    std::string core = word.substr(b, e - b);
    std::string clitic;
    const auto lowered = to_lower(core);
    for (const auto c : kClitics) {
      if (lowered.size() > c.size() && lowered.ends_with(c)) {
        clitic = core.substr(core.size() - c.size());
        core.resize(core.size() - c.size());
        break;
      }
    }
    if (!core.empty()) out.push_back(core);
    if (!clitic.empty()) out.push_back(clitic);
    out.insert(out.end(), tail.rbegin(), tail.rend());
  }
  return out;
}

std::vector<std::string> record_tokens(const CorpusRecord& record) {
  if (record.trees.empty()) return simple_tokenize(record.text);
  std::vector<std::string> out;
  for (const auto& t : record.trees) out.insert(out.end(), t.tokens().begin(), t.tokens().end());
  return out;
}

}  // namespace logictree
