#include "logictree/taxonomy.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "logictree/error.hpp"

namespace logictree {

namespace {

constexpr std::array<std::string_view, kRelationCount> kRelationNames = {
    "conjunction", "alternative", "restatement", "instantiation", "contrast",
    "concession",  "analogy",     "temporal",    "condition",     "causal",
};

constexpr std::string_view kBuiltinText =
    "conjunction: and | as well as | as well | also | separately\n"
    "alternative: or | either | instead | alternatively | else | nor | neither\n"
    "restatement: specifically | particularly | in particular | besides | additionally | "
    "in addition | moreover | furthermore | plus | not only | indeed | in other words | "
    "in fact | in short | in the end | overall | in summary | in details\n"
    "instantiation: for example | for instance | such as | including | as an example | "
    "an as instance | for one thing\n"
    "contrast: but | however | yet | while | unlike | rather | rather than | in comparison | "
    "by comparison | on the other hand | on the contrary | contrary to | in contrast | "
    "by contrast | whereas | conversely | not | no | none | nothing | n't\n"
    "concession: although | though | despite | despite of | in spite of | regardless | "
    "regardless of | nevertheless | nonetheless | even if | even though | even as | "
    "even when | even after | even so | no matter\n"
    "analogy: likewise | similarly | as if | as though | just as | just like | namely\n"
    "temporal: during | before | after | when | as soon as | then | next | until | till | "
    "meanwhile | in turn | meantime | afterwards | simultaneously | at the same time | "
    "beforehand | previously | earlier | later | thereafter | finally | ultimately\n"
    "condition: if | as long as | unless | otherwise | except | whenever | whichever | once | "
    "only if | only when | depend on\n"
    "causal: because | cause | as a result | result in | due to | therefore | hence | thus | "
    "thereby | since | now that | consequently | in consequence | in order to | so as to | "
    "so that | why | for | accordingly | given | turn out\n";

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

Phrase split_tokens(std::string_view s) {
  Phrase out;
  std::istringstream in{std::string(s)};
  std::string tok;
  while (in >> tok) out.push_back(to_lower(tok));
  return out;
}

}  // namespace

std::string_view to_string(RelationType r) noexcept { return kRelationNames[index_of(r)]; }

std::optional<RelationType> parse_relation(std::string_view name) {
  const auto lowered = to_lower(trim(name));
  for (std::size_t i = 0; i < kRelationCount; ++i) {
    if (kRelationNames[i] == lowered) return kAllRelations[i];
  }
  return std::nullopt;
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string join_phrase(const Phrase& phrase) {
  std::string out;
  for (const auto& tok : phrase) {
    if (!out.empty()) out += ' ';
    out += tok;
  }
  return out;
}

std::string_view builtin_taxonomy_text() noexcept { return kBuiltinText; }

const Taxonomy& Taxonomy::builtin() {
  static const Taxonomy instance = Taxonomy::parse(kBuiltinText);
  return instance;
}

void Taxonomy::add(RelationType r, Phrase phrase) {
  if (phrase.empty()) {
    throw ValidationError("empty connective phrase under " + std::string(to_string(r)));
  }
  if (phrase.size() > kMaxPhraseTokens) {
    throw ValidationError("connective '" + join_phrase(phrase) + "' exceeds " +
                          std::to_string(kMaxPhraseTokens) + " tokens");
  }
  const auto key = join_phrase(phrase);
  if (const auto it = index_.find(key); it != index_.end()) {
    if (it->second == r) return;
    throw ValidationError("connective '" + key + "' listed under both " +
                          std::string(to_string(it->second)) + " and " +
                          std::string(to_string(r)));
  }
  index_.emplace(key, r);
  max_length_ = std::max(max_length_, phrase.size());
  entries_[index_of(r)].push_back(std::move(phrase));
}

Taxonomy Taxonomy::parse(std::string_view text) {
  Taxonomy tax;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    const auto colon = line.find(':');
    if (colon == std::string_view::npos) {
      throw ValidationError("taxonomy line " + std::to_string(line_no) + ": missing ':'");
    }
    const auto name = trim(line.substr(0, colon));
    const auto relation = parse_relation(name);
    if (!relation) {
      throw ValidationError("taxonomy line " + std::to_string(line_no) +
                            ": unknown relation '" + std::string(name) + "'");
    }
    auto rest = line.substr(colon + 1);
    std::size_t p = 0;
    while (p <= rest.size()) {
      auto bar = rest.find('|', p);
      if (bar == std::string_view::npos) bar = rest.size();
      auto phrase = split_tokens(rest.substr(p, bar - p));
      if (phrase.empty()) {
        throw ValidationError("taxonomy line " + std::to_string(line_no) +
                              ": empty connective phrase");
      }
      tax.add(*relation, std::move(phrase));
      p = bar + 1;
    }
  }
  return tax;
}

Taxonomy Taxonomy::from_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read taxonomy file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::optional<RelationType> Taxonomy::relation_of(const Phrase& phrase) const {
  const auto it = index_.find(join_phrase(phrase));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<RelationType> Taxonomy::relation_of(std::span<const std::string> tokens) const {
  if (tokens.empty() || tokens.size() > max_length_) return std::nullopt;
  Phrase lowered;
  lowered.reserve(tokens.size());
  for (const auto& t : tokens) lowered.push_back(to_lower(t));
  return relation_of(lowered);
}

std::optional<ConnectiveMatch> Taxonomy::longest_match(std::span<const std::string> tokens,
                                                       std::size_t start) const {
  if (start >= tokens.size()) return std::nullopt;
  const auto limit = std::min(max_length_, tokens.size() - start);
  Phrase window;
  std::optional<ConnectiveMatch> best;
  for (std::size_t len = 1; len <= limit; ++len) {
    window.push_back(to_lower(tokens[start + len - 1]));
    if (const auto r = relation_of(window)) best = ConnectiveMatch{*r, window, len};
  }
  return best;
}

std::string Taxonomy::serialize() const {
  std::string out;
  for (const auto r : kAllRelations) {
    if (phrases(r).empty()) continue;
    out += to_string(r);
    out += ':';
    bool first = true;
    for (const auto& p : phrases(r)) {
      out += first ? " " : " | ";
      out += join_phrase(p);
      first = false;
    }
    out += '\n';
  }
  return out;
}

}  // namespace logictree
