#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "visfactor/harness/prompts.hpp"

namespace visfactor::harness {

struct Reply {
  bool ok = false;
  std::string text;
  std::string error;
  double latency_ms = 0;
};

/// Where and how to send queries. The API key is never stored here; only the
/// name of the environment variable that holds it.
struct EndpointConfig {
  std::string name = "model";
  std::string transport = "openai";  // "openai" or "replay"
  std::string base_url;              // openai: e.g. https://api.openai.com/v1
  std::string model;
  std::string api_key_env = "OPENAI_API_KEY";
  std::filesystem::path replay;  // replay: canned responses file
  double temperature = 0;
  std::optional<double> top_p;
  std::string reasoning;  // reasoning-effort tag passed through when set
  int retries = 3;
  int timeout_s = 120;
  int concurrency = 4;

  nlohmann::json to_json() const;
  static EndpointConfig from_json(const nlohmann::json& j, const std::filesystem::path& base = {});
  /// A file holding one config, or {"endpoints": {name: config}} picked by `name`.
  static EndpointConfig load(const std::filesystem::path& path, const std::string& name = {});
};

/// Minimal chat-with-images contract. Implementations must be safe to call
/// from several threads at once.
class Endpoint {
 public:
  virtual ~Endpoint() = default;
  /// `attempt` counts from 1. Image parts are paths relative to `root`.
  virtual Reply complete(const std::string& query_id, const Message& msg, const std::filesystem::path& root,
                         int attempt) = 0;
};

/// Canned responses: {"responses": {query id: [entry, ...]}} where an entry
/// is a response string or {"error": "..."}; attempt k takes entry k, and
/// attempts past the end repeat the last entry.
class ReplayEndpoint : public Endpoint {
 public:
  static ReplayEndpoint load(const std::filesystem::path& path);
  static ReplayEndpoint from_json(const nlohmann::json& j);

  Reply complete(const std::string& query_id, const Message& msg, const std::filesystem::path& root,
                 int attempt) override;
  bool has(const std::string& query_id) const { return responses_.count(query_id) != 0; }
  std::vector<std::string> query_ids() const;

 private:
  struct Entry {
    bool ok;
    std::string text;
    double latency_ms;
  };
  std::map<std::string, std::vector<Entry>> responses_;
};

/// OpenAI-compatible chat completions over HTTP(S); images go inline as
/// base64 PNG data URLs.
class OpenAiEndpoint : public Endpoint {
 public:
  explicit OpenAiEndpoint(EndpointConfig cfg);
  Reply complete(const std::string& query_id, const Message& msg, const std::filesystem::path& root,
                 int attempt) override;
  /// Request body for a message; exposed for tests.
  nlohmann::json request_body(const Message& msg, const std::filesystem::path& root) const;

 private:
  EndpointConfig cfg_;
  std::string host_;    // scheme://host[:port]
  std::string prefix_;  // path before /chat/completions
};

std::unique_ptr<Endpoint> make_endpoint(const EndpointConfig& cfg);

}  // namespace visfactor::harness
