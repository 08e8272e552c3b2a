#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <semaphore>
#include <string>
#include <string_view>
#include <vector>

#include "logictree/catalog.hpp"
#include "logictree/diagnostics.hpp"
#include "logictree/error.hpp"
#include "logictree/eval_metrics.hpp"

namespace logictree {

/// Settings for an OpenAI-compatible chat-completions endpoint.
struct GatewayConfig {
  /// Full URL of the chat-completions route, e.g.
  /// "https://api.openai.com/v1/chat/completions". A URL without a path gets
  /// "/v1/chat/completions".
  std::string endpoint;
  std::string model = "gpt-3.5-turbo";
  /// Environment variable holding the bearer token; empty sends no auth header.
  std::string auth_env = "OPENAI_API_KEY";
  double temperature = 0.0;
  int max_tokens = 256;
  std::chrono::milliseconds timeout{60000};
  std::size_t max_concurrent = 4;
  /// Retries after the first attempt for transport errors, 429 and 5xx.
  int retry_limit = 3;
  std::chrono::milliseconds backoff_base{500};

  /// Throws ValidationError when temperature < 0, concurrency < 1 or the URL is unusable.
  void validate() const;
};

enum class GatewayErrorKind { Config, Transport, Timeout, Status, Malformed };

std::string_view to_string(GatewayErrorKind k) noexcept;

class GatewayError : public Error {
 public:
  GatewayError(GatewayErrorKind kind, const std::string& what, int status = 0, int attempts = 0)
      : Error(what), kind_(kind), status_(status), attempts_(attempts) {}

  GatewayErrorKind kind() const noexcept { return kind_; }
  int status() const noexcept { return status_; }
  int attempts() const noexcept { return attempts_; }

 private:
  GatewayErrorKind kind_;
  int status_;
  int attempts_;
};

/// Shareable across threads. At most `max_concurrent` requests are in flight
/// at once no matter how many threads call complete().
class ChatClient {
 public:
  explicit ChatClient(GatewayConfig config);

  ChatClient(const ChatClient&) = delete;
  ChatClient& operator=(const ChatClient&) = delete;

  /// First choice's message content. Retries transient failures with
  /// exponential backoff; throws GatewayError once retries are spent.
  std::string complete(std::string_view prompt) const;

  const GatewayConfig& config() const noexcept { return config_; }
  std::size_t requests_sent() const noexcept { return requests_.load(); }

 private:
  struct Target {
    std::string origin;  // scheme://host[:port]
    std::string path;
  };

  std::string attempt(std::string_view prompt, const Target& target) const;

  GatewayConfig config_;
  Target target_;
  mutable std::counting_semaphore<1024> slots_;
  mutable std::atomic<std::size_t> requests_{0};
};

/// One-shot form of ChatClient::complete.
std::string complete(std::string_view prompt, const GatewayConfig& config);

/// Serializes the request body sent to the endpoint.
std::string chat_request_body(std::string_view prompt, const GatewayConfig& config);
/// Extracts choices[0].message.content; throws GatewayError(Malformed).
std::string parse_chat_response(std::string_view body);

struct DetectionAnswer {
  DetectionLabel label = DetectionLabel::NoFallacy;
  bool parsed = false;
};

/// Reads a leading yes/no, after the last "Answer:" when one is present.
/// Anything else is a parse failure scored as no_fallacy, with a diagnostic.
DetectionAnswer parse_detection(std::string_view answer, Diagnostics* diagnostics = nullptr);

inline constexpr std::string_view kUnparsedLabel = "unparsed";

/// Longest case-insensitive catalog name or alias occurring as a whole-word
/// substring, unified to its canonical name; kUnparsedLabel when nothing
/// matches. With `dataset`, candidates are limited to that dataset's fallacies.
std::string parse_classification(std::string_view answer, const FallacyCatalog& catalog,
                                 const LabelMap& map, std::string_view dataset = {},
                                 Diagnostics* diagnostics = nullptr);

struct PromptJob {
  std::string id;
  std::string prompt;
};

struct CompletionRecord {
  std::string id;
  std::string prompt;
  std::optional<std::string> response;
  std::string error;  // empty on success
};

/// Sends every job, `workers` at a time, and returns one record per job in
/// input order. Failures are captured per record, never thrown.
std::vector<CompletionRecord> run_batch(const std::vector<PromptJob>& jobs,
                                        const ChatClient& client, std::size_t workers);

/// JSON Lines audit log: {id, prompt, response, error} per record.
void write_completion_log(const std::filesystem::path& path,
                          const std::vector<CompletionRecord>& records);
std::map<std::string, CompletionRecord> read_completion_log(const std::filesystem::path& path);

}  // namespace logictree
