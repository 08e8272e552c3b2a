#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "logictree/catalog.hpp"
#include "logictree/diagnostics.hpp"

namespace logictree {

/// Alias -> canonical fallacy name. Lookup ignores case and collapses runs of
/// whitespace; canonical names map to themselves.
class LabelMap {
 public:
  static LabelMap from_catalog(const FallacyCatalog& catalog);
  static const LabelMap& builtin();

  void add(std::string_view alias, std::string canonical);

  /// Unknown names come back unchanged, with a diagnostic.
  std::string unify(std::string_view name, Diagnostics* diagnostics = nullptr) const;
  std::optional<std::string> lookup(std::string_view name) const;

  /// Every alias and canonical name, in normalized form, with its canonical target.
  const std::map<std::string, std::string>& entries() const noexcept { return map_; }

 private:
  std::map<std::string, std::string> map_;
};

std::string normalize_label(std::string_view name);

enum class DetectionLabel { Fallacy, NoFallacy };

std::string_view to_string(DetectionLabel l) noexcept;
/// "fallacy", "no_fallacy", "no fallacy", "yes", "no" and fallacy names.
std::optional<DetectionLabel> parse_detection_label(std::string_view s);

struct ClassMetrics {
  double precision = 0;  // percent
  double recall = 0;
  double f1 = 0;
  std::size_t support = 0;    // gold count
  std::size_t predicted = 0;  // predicted count
  bool in_gold = false;

  bool operator==(const ClassMetrics&) const = default;
};

struct MetricsReport {
  std::map<std::string, ClassMetrics> per_class;
  /// Detection only: the fallacy class, which is the headline figure.
  std::optional<ClassMetrics> positive;
  double macro_precision = 0;
  double macro_recall = 0;
  double macro_f1 = 0;
  double accuracy = 0;
  std::size_t total = 0;
  std::vector<std::string> diagnostics;

  std::string to_text() const;
};

/// P/R/F1 of the fallacy class plus accuracy. 0/0 ratios are 0.
MetricsReport detection_metrics(const std::vector<DetectionLabel>& preds,
                                const std::vector<DetectionLabel>& golds);

/// Labels are unified through `map` first. Macro averages run over classes
/// present in gold, in lexicographic class order; predicted-only classes are
/// reported but excluded.
MetricsReport classification_metrics(const std::vector<std::string>& preds,
                                     const std::vector<std::string>& golds, const LabelMap& map);

}  // namespace logictree
