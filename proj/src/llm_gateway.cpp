#include "logictree/llm_gateway.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "logictree/parallel.hpp"
#include "logictree/taxonomy.hpp"

namespace logictree {

namespace {

struct ParsedUrl {
  std::string origin;
  std::string path;
};

std::optional<ParsedUrl> split_url(std::string_view url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos) return std::nullopt;
  const auto scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") return std::nullopt;
  const auto host_begin = scheme_end + 3;
  const auto slash = url.find('/', host_begin);
  ParsedUrl out;
  out.origin = std::string(url.substr(0, slash));
  out.path = slash == std::string_view::npos ? "/v1/chat/completions"
                                             : std::string(url.substr(slash));
  if (out.origin.size() <= host_begin) return std::nullopt;
  return out;
}

bool transient_status(int status) { return status == 429 || status >= 500; }

}  // namespace

std::string_view to_string(GatewayErrorKind k) noexcept {
  switch (k) {
    case GatewayErrorKind::Config: return "config";
    case GatewayErrorKind::Transport: return "transport";
    case GatewayErrorKind::Timeout: return "timeout";
    case GatewayErrorKind::Status: return "status";
    case GatewayErrorKind::Malformed: return "malformed";
  }
  return "unknown";
}

void GatewayConfig::validate() const {
  if (temperature < 0) throw ValidationError("temperature must be >= 0");
  if (max_concurrent < 1) throw ValidationError("max_concurrent must be >= 1");
  if (max_concurrent > 1024) throw ValidationError("max_concurrent must be <= 1024");
  if (retry_limit < 0) throw ValidationError("retry_limit must be >= 0");
  if (timeout.count() <= 0) throw ValidationError("timeout must be positive");
  if (!split_url(endpoint)) throw ValidationError("endpoint must be an http(s) URL: " + endpoint);
}

std::string chat_request_body(std::string_view prompt, const GatewayConfig& config) {
  nlohmann::ordered_json body;
  body["model"] = config.model;
  body["messages"] = nlohmann::ordered_json::array(
      {nlohmann::ordered_json{{"role", "user"}, {"content", std::string(prompt)}}});
  body["temperature"] = config.temperature;
  body["max_tokens"] = config.max_tokens;
  return body.dump();
}

std::string parse_chat_response(std::string_view body) {
  try {
    const auto j = nlohmann::json::parse(body);
    const auto& content = j.at("choices").at(0).at("message").at("content");
    if (!content.is_string()) {
      throw GatewayError(GatewayErrorKind::Malformed, "message content is not a string");
    }
    return content.get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw GatewayError(GatewayErrorKind::Malformed,
                       std::string("malformed chat-completions response: ") + e.what());
  }
}

ChatClient::ChatClient(GatewayConfig config)
    : config_(std::move(config)), slots_(static_cast<std::ptrdiff_t>(config_.max_concurrent)) {
  config_.validate();
  const auto url = split_url(config_.endpoint);
  target_ = {url->origin, url->path};
}

std::string ChatClient::attempt(std::string_view prompt, const Target& target) const {
  httplib::Client cli(target.origin);
  cli.set_connection_timeout(config_.timeout);
  cli.set_read_timeout(config_.timeout);
  cli.set_write_timeout(config_.timeout);

  httplib::Headers headers;
  if (!config_.auth_env.empty()) {
    const char* token = std::getenv(config_.auth_env.c_str());
    if (token == nullptr || *token == '\0') {
      throw GatewayError(GatewayErrorKind::Config,
                         "auth token variable " + config_.auth_env + " is not set");
    }
    headers.emplace("Authorization", std::string("Bearer ") + token);
  }

  const auto body = chat_request_body(prompt, config_);
  const auto started = std::chrono::steady_clock::now();
  slots_.acquire();
  ++requests_;
  auto res = cli.Post(target.path, headers, body, "application/json");
  slots_.release();

  if (!res) {
    const auto elapsed = std::chrono::steady_clock::now() - started;
    const bool timed_out = res.error() == httplib::Error::ConnectionTimeout ||
                           (res.error() == httplib::Error::Read && elapsed >= config_.timeout);
    throw GatewayError(timed_out ? GatewayErrorKind::Timeout : GatewayErrorKind::Transport,
                       "request to " + config_.endpoint + " failed: " +
                           httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw GatewayError(GatewayErrorKind::Status,
                       "endpoint returned HTTP " + std::to_string(res->status), res->status);
  }
  return parse_chat_response(res->body);
}

std::string ChatClient::complete(std::string_view prompt) const {
  for (int tries = 0;; ++tries) {
    try {
      return attempt(prompt, target_);
    } catch (const GatewayError& e) {
      const bool transient =
          e.kind() == GatewayErrorKind::Transport || e.kind() == GatewayErrorKind::Timeout ||
          (e.kind() == GatewayErrorKind::Status && transient_status(e.status()));
      if (!transient || tries >= config_.retry_limit) {
        // A retryable status that never cleared is reported as a transport failure.
        const auto kind = e.kind() == GatewayErrorKind::Status && transient
                              ? GatewayErrorKind::Transport
                              : e.kind();
        throw GatewayError(kind,
                           std::string(e.what()) + " (after " + std::to_string(tries + 1) +
                               " attempt" + (tries == 0 ? "" : "s") + ")",
                           e.status(), tries + 1);
      }
      std::this_thread::sleep_for(config_.backoff_base * (1 << std::min(tries, 16)));
    }
  }
}

std::string complete(std::string_view prompt, const GatewayConfig& config) {
  return ChatClient(config).complete(prompt);
}

DetectionAnswer parse_detection(std::string_view answer, Diagnostics* diagnostics) {
  auto lowered = to_lower(answer);
  std::string_view rest = lowered;
  if (const auto at = rest.rfind("answer:"); at != std::string_view::npos) {
    rest = rest.substr(at + 7);
  }
  const auto is_filler = [](char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == '"' || c == '\'' || c == '*' ||
           c == '`' || c == ':' || c == '-';
  };
  while (!rest.empty() && is_filler(rest.front())) rest.remove_prefix(1);
  std::size_t n = 0;
  while (n < rest.size() && std::isalpha(static_cast<unsigned char>(rest[n]))) ++n;
  const auto word = rest.substr(0, n);
  if (word == "yes") return {DetectionLabel::Fallacy, true};
  if (word == "no") return {DetectionLabel::NoFallacy, true};
  warn(diagnostics, "unparseable detection answer '" + std::string(answer) +
                        "'; scored as no_fallacy");
  return {DetectionLabel::NoFallacy, false};
}

std::string parse_classification(std::string_view answer, const FallacyCatalog& catalog,
                                 const LabelMap& map, std::string_view dataset,
                                 Diagnostics* diagnostics) {
  std::vector<std::pair<std::string, std::string>> candidates;  // normalized surface, canonical
  const auto allowed = [&](const FallacyEntry& e) {
    return dataset.empty() || e.datasets.contains(std::string(dataset));
  };
  for (const auto& e : catalog.entries()) {
    if (!allowed(e)) continue;
    candidates.emplace_back(normalize_label(e.name), e.name);
    for (const auto& a : e.aliases) candidates.emplace_back(normalize_label(a), e.name);
  }
  for (const auto& [alias, canonical] : map.entries()) {
    const auto* e = catalog.find(canonical);
    if (e != nullptr && allowed(*e)) candidates.emplace_back(alias, canonical);
  }

  const auto text = normalize_label(answer);
  const auto word_char = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; };
  const std::pair<std::string, std::string>* best = nullptr;
  for (const auto& c : candidates) {
    if (best != nullptr && c.first.size() <= best->first.size()) continue;
    for (auto pos = text.find(c.first); pos != std::string::npos;
         pos = text.find(c.first, pos + 1)) {
      const auto end = pos + c.first.size();
      const bool left_ok = pos == 0 || !word_char(text[pos - 1]);
      const bool right_ok = end == text.size() || !word_char(text[end]);
      if (left_ok && right_ok) {
        best = &c;
        break;
      }
    }
  }
  if (best == nullptr) {
    warn(diagnostics, "no fallacy name found in answer '" + std::string(answer) + "'");
    return std::string(kUnparsedLabel);
  }
  return map.unify(best->second, diagnostics);
}

std::vector<CompletionRecord> run_batch(const std::vector<PromptJob>& jobs,
                                        const ChatClient& client, std::size_t workers) {
  std::vector<CompletionRecord> out(jobs.size());
  parallel_for(jobs.size(), workers, [&](std::size_t i) {
    auto& rec = out[i];
    rec.id = jobs[i].id;
    rec.prompt = jobs[i].prompt;
    try {
      rec.response = client.complete(jobs[i].prompt);
    } catch (const GatewayError& e) {
      rec.error = std::string(to_string(e.kind())) + ": " + e.what();
    }
  });
  return out;
}

void write_completion_log(const std::filesystem::path& path,
                          const std::vector<CompletionRecord>& records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  for (const auto& r : records) {
    nlohmann::ordered_json j;
    j["id"] = r.id;
    j["prompt"] = r.prompt;
    j["response"] = r.response ? nlohmann::ordered_json(*r.response) : nlohmann::ordered_json();
    j["error"] = r.error;
    out << j.dump() << '\n';
  }
}

std::map<std::string, CompletionRecord> read_completion_log(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read completion log " + path.string());
  std::map<std::string, CompletionRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      CompletionRecord r;
      r.id = j.at("id").is_string() ? j.at("id").get<std::string>() : j.at("id").dump();
      r.prompt = j.value("prompt", "");
      if (j.contains("response") && j.at("response").is_string()) {
        r.response = j.at("response").get<std::string>();
      }
      r.error = j.value("error", "");
      out[r.id] = std::move(r);
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("completion log line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace logictree
