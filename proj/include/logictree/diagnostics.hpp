#pragma once

#include <string>
#include <utility>
#include <vector>

namespace logictree {

/// Collects non-fatal warnings (OOV tokens, unknown labels, unparsed answers).
struct Diagnostics {
  std::vector<std::string> messages;

  void warn(std::string message) { messages.push_back(std::move(message)); }
  bool empty() const noexcept { return messages.empty(); }
};

/// Forwards to `sink` when present.
inline void warn(Diagnostics* sink, std::string message) {
  if (sink != nullptr) sink->warn(std::move(message));
}

}  // namespace logictree
