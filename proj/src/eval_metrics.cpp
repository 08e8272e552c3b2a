#include "logictree/eval_metrics.hpp"

#include <cctype>
#include <cstdio>
#include <set>

#include "logictree/error.hpp"
#include "logictree/taxonomy.hpp"

namespace logictree {

std::string normalize_label(std::string_view name) {
  std::string out;
  bool pending_space = false;
  for (const char c : name) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

void LabelMap::add(std::string_view alias, std::string canonical) {
  map_[normalize_label(alias)] = std::move(canonical);
}

LabelMap LabelMap::from_catalog(const FallacyCatalog& catalog) {
  LabelMap m;
  for (const auto& e : catalog.entries()) {
    m.add(e.name, e.name);
    for (const auto& a : e.aliases) m.add(a, e.name);
  }
  m.add(kNoFallacy, std::string(kNoFallacy));
  return m;
}

const LabelMap& LabelMap::builtin() {
  static const LabelMap instance = from_catalog(FallacyCatalog::builtin());
  return instance;
}

std::optional<std::string> LabelMap::lookup(std::string_view name) const {
  const auto it = map_.find(normalize_label(name));
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

std::string LabelMap::unify(std::string_view name, Diagnostics* diagnostics) const {
  if (auto hit = lookup(name)) return *hit;
  warn(diagnostics, "unknown label '" + std::string(name) + "' kept as is");
  return std::string(name);
}

std::string_view to_string(DetectionLabel l) noexcept {
  return l == DetectionLabel::Fallacy ? "fallacy" : "no_fallacy";
}

std::optional<DetectionLabel> parse_detection_label(std::string_view s) {
  const auto v = normalize_label(s);
  if (v.empty()) return std::nullopt;
  if (v == "no_fallacy" || v == "no fallacy" || v == "no" || v == "benign" || v == "0") {
    return DetectionLabel::NoFallacy;
  }
  if (v == "fallacy" || v == "yes" || v == "1") return DetectionLabel::Fallacy;
  if (LabelMap::builtin().lookup(v)) return DetectionLabel::Fallacy;
  return std::nullopt;
}

namespace {

ClassMetrics score(std::size_t tp, std::size_t predicted, std::size_t support) {
  ClassMetrics m;
  m.support = support;
  m.predicted = predicted;
  m.in_gold = support > 0;
  m.precision = predicted ? 100.0 * static_cast<double>(tp) / static_cast<double>(predicted) : 0.0;
  m.recall = support ? 100.0 * static_cast<double>(tp) / static_cast<double>(support) : 0.0;
  m.f1 = (m.precision + m.recall) > 0
             ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
             : 0.0;
  return m;
}

MetricsReport score_all(const std::vector<std::string>& preds,
                        const std::vector<std::string>& golds) {
  if (preds.size() != golds.size()) {
    throw ValidationError("prediction/gold length mismatch: " + std::to_string(preds.size()) +
                          " vs " + std::to_string(golds.size()));
  }
  if (golds.empty()) throw ValidationError("no predictions to score");

  std::map<std::string, std::size_t> tp;
  std::map<std::string, std::size_t> predicted;
  std::map<std::string, std::size_t> support;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < golds.size(); ++i) {
    ++predicted[preds[i]];
    ++support[golds[i]];
    if (preds[i] == golds[i]) {
      ++tp[preds[i]];
      ++correct;
    }
  }
  std::set<std::string> classes;
  for (const auto& [c, _] : predicted) classes.insert(c);
  for (const auto& [c, _] : support) classes.insert(c);

  MetricsReport r;
  r.total = golds.size();
  r.accuracy = 100.0 * static_cast<double>(correct) / static_cast<double>(golds.size());
  std::size_t counted = 0;
  for (const auto& c : classes) {
    const auto m = score(tp[c], predicted[c], support[c]);
    r.per_class[c] = m;
    if (!m.in_gold) {
      r.diagnostics.push_back("class '" + c + "' is predicted but absent from gold; "
                              "excluded from macro averages");
      continue;
    }
    r.macro_precision += m.precision;
    r.macro_recall += m.recall;
    r.macro_f1 += m.f1;
    ++counted;
  }
  const auto n = static_cast<double>(counted);
  r.macro_precision /= n;
  r.macro_recall /= n;
  r.macro_f1 /= n;
  return r;
}

}  // namespace

MetricsReport detection_metrics(const std::vector<DetectionLabel>& preds,
                                const std::vector<DetectionLabel>& golds) {
  std::vector<std::string> p;
  std::vector<std::string> g;
  for (const auto l : preds) p.emplace_back(to_string(l));
  for (const auto l : golds) g.emplace_back(to_string(l));
  auto r = score_all(p, g);
  const auto key = std::string(to_string(DetectionLabel::Fallacy));
  if (const auto it = r.per_class.find(key); it != r.per_class.end()) {
    r.positive = it->second;
  } else {
    r.positive = ClassMetrics{};
  }
  return r;
}

MetricsReport classification_metrics(const std::vector<std::string>& preds,
                                     const std::vector<std::string>& golds, const LabelMap& map) {
  Diagnostics diag;
  std::vector<std::string> p;
  std::vector<std::string> g;
  p.reserve(preds.size());
  g.reserve(golds.size());
  for (const auto& l : preds) p.push_back(map.unify(l, &diag));
  for (const auto& l : golds) g.push_back(map.unify(l, &diag));
  auto r = score_all(p, g);
  r.diagnostics.insert(r.diagnostics.begin(), diag.messages.begin(), diag.messages.end());
  return r;
}

std::string MetricsReport::to_text() const {
  std::string out;
  char buf[256];
  if (positive) {
    std::snprintf(buf, sizeof buf, "fallacy class  P %6.2f  R %6.2f  F1 %6.2f\n",
                  positive->precision, positive->recall, positive->f1);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "macro          P %6.2f  R %6.2f  F1 %6.2f\n", macro_precision,
                macro_recall, macro_f1);
  out += buf;
  std::snprintf(buf, sizeof buf, "accuracy       %6.2f  (n=%zu)\n", accuracy, total);
  out += buf;
  out += "\nclass\tprecision\trecall\tf1\tsupport\tpredicted\n";
  for (const auto& [name, m] : per_class) {
    std::snprintf(buf, sizeof buf, "\t%.2f\t%.2f\t%.2f\t%zu\t%zu%s\n", m.precision, m.recall,
                  m.f1, m.support, m.predicted, m.in_gold ? "" : "\t(not in gold)");
    out += name + buf;
  }
  for (const auto& d : diagnostics) out += "note: " + d + "\n";
  return out;
}

}  // namespace logictree
