#include "visfactor/harness/endpoint.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>

#include <fmt/format.h>
#include <httplib.h>

#include "visfactor/error.hpp"
#include "visfactor/scene.hpp"

namespace visfactor::harness {

using nlohmann::json;

json EndpointConfig::to_json() const {
  json j = {{"name", name},         {"transport", transport},     {"base_url", base_url},
            {"model", model},       {"api_key_env", api_key_env}, {"temperature", temperature},
            {"reasoning", reasoning}, {"retries", retries},       {"timeout_s", timeout_s},
            {"concurrency", concurrency}};
  if (top_p) j["top_p"] = *top_p;
  if (!replay.empty()) j["replay"] = replay.string();
  return j;
}

EndpointConfig EndpointConfig::from_json(const json& j, const std::filesystem::path& base) {
  EndpointConfig c;
  c.name = j.value("name", c.name);
  c.transport = j.value("transport", c.transport);
  c.base_url = j.value("base_url", "");
  c.model = j.value("model", "");
  c.api_key_env = j.value("api_key_env", c.api_key_env);
  if (j.contains("replay")) c.replay = base / j.at("replay").get<std::string>();
  c.temperature = j.value("temperature", 0.0);
  if (j.contains("top_p") && !j.at("top_p").is_null()) c.top_p = j.at("top_p").get<double>();
  c.reasoning = j.value("reasoning", "");
  c.retries = j.value("retries", 3);
  c.timeout_s = j.value("timeout_s", 120);
  c.concurrency = j.value("concurrency", 4);
  if (j.contains("api_key")) throw ConfigError("endpoint configs must not hold keys; name an environment variable in api_key_env");
  if (c.transport != "openai" && c.transport != "replay") throw ConfigError("unknown transport '" + c.transport + "'");
  if (c.retries < 0 || c.concurrency < 1 || c.timeout_s < 1) throw ConfigError("endpoint " + c.name + ": bad limits");
  return c;
}

EndpointConfig EndpointConfig::load(const std::filesystem::path& path, const std::string& name) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open endpoint config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("bad endpoint config " + path.string() + ": " + e.what());
  }
  const auto base = path.parent_path();
  if (!j.contains("endpoints")) return from_json(j, base);
  const auto& all = j.at("endpoints");
  if (name.empty()) {
    if (all.size() != 1) throw ConfigError(path.string() + " lists several endpoints; pick one by name");
    json one = all.begin().value();
    one["name"] = all.begin().key();
    return from_json(one, base);
  }
  if (!all.contains(name)) throw ConfigError("no endpoint '" + name + "' in " + path.string());
  json one = all.at(name);
  one["name"] = name;
  return from_json(one, base);
}

// ---- replay ----

ReplayEndpoint ReplayEndpoint::from_json(const json& j) {
  ReplayEndpoint r;
  for (const auto& [id, list] : j.at("responses").items()) {
    auto& entries = r.responses_[id];
    const json items = list.is_array() ? list : json::array({list});
    for (const auto& e : items) {
      if (e.is_string()) {
        entries.push_back({true, e.get<std::string>(), 0});
      } else if (e.contains("error")) {
        entries.push_back({false, e.at("error").get<std::string>(), e.value("latency_ms", 0.0)});
      } else {
        entries.push_back({true, e.at("text").get<std::string>(), e.value("latency_ms", 0.0)});
      }
    }
    if (entries.empty()) throw ConfigError("replay entry for " + id + " is empty");
  }
  return r;
}

ReplayEndpoint ReplayEndpoint::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open replay file " + path.string());
  try {
    return from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw ConfigError("bad replay file " + path.string() + ": " + e.what());
  }
}

std::vector<std::string> ReplayEndpoint::query_ids() const {
  std::vector<std::string> out;
  for (const auto& [id, _] : responses_) out.push_back(id);
  return out;
}

Reply ReplayEndpoint::complete(const std::string& query_id, const Message&, const std::filesystem::path&, int attempt) {
  auto it = responses_.find(query_id);
  if (it == responses_.end()) return {false, "", "no canned response for " + query_id, 0};
  const auto& list = it->second;
  const auto& e = list[std::min<std::size_t>(static_cast<std::size_t>(std::max(attempt, 1) - 1), list.size() - 1)];
  if (!e.ok) return {false, "", e.text, e.latency_ms};
  return {true, e.text, "", e.latency_ms};
}

// ---- OpenAI-compatible ----

OpenAiEndpoint::OpenAiEndpoint(EndpointConfig cfg) : cfg_(std::move(cfg)) {
  if (cfg_.base_url.empty()) throw ConfigError("endpoint " + cfg_.name + " has no base_url");
  if (cfg_.model.empty()) throw ConfigError("endpoint " + cfg_.name + " has no model");
  const auto scheme = cfg_.base_url.find("://");
  if (scheme == std::string::npos) throw ConfigError("base_url needs a scheme: " + cfg_.base_url);
  const auto slash = cfg_.base_url.find('/', scheme + 3);
  host_ = cfg_.base_url.substr(0, slash);
  prefix_ = slash == std::string::npos ? "" : cfg_.base_url.substr(slash);
  while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
}

json OpenAiEndpoint::request_body(const Message& msg, const std::filesystem::path& root) const {
  json content = json::array();
  for (const auto& part : msg.parts) {
    if (!part.is_image) {
      content.push_back({{"type", "text"}, {"text", part.text}});
      continue;
    }
    std::ifstream in(root / part.text, std::ios::binary);
    if (!in) throw ConfigError("cannot read image " + (root / part.text).string());
    const std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    content.push_back({{"type", "image_url"}, {"image_url", {{"url", "data:image/png;base64," + base64_encode(bytes)}}}});
  }
  json body = {{"model", cfg_.model},
               {"temperature", cfg_.temperature},
               {"messages", json::array({{{"role", "user"}, {"content", content}}})}};
  if (cfg_.top_p) body["top_p"] = *cfg_.top_p;
  if (!cfg_.reasoning.empty()) body["reasoning_effort"] = cfg_.reasoning;
  return body;
}

Reply OpenAiEndpoint::complete(const std::string&, const Message& msg, const std::filesystem::path& root, int) {
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count(); };
  httplib::Client cli(host_);
  cli.set_connection_timeout(cfg_.timeout_s, 0);
  cli.set_read_timeout(cfg_.timeout_s, 0);
  cli.set_write_timeout(cfg_.timeout_s, 0);
  httplib::Headers headers;
  if (!cfg_.api_key_env.empty()) {
    const char* key = std::getenv(cfg_.api_key_env.c_str());
    if (key && *key) headers.emplace("Authorization", std::string("Bearer ") + key);
  }
  const auto res = cli.Post(prefix_ + "/chat/completions", headers, request_body(msg, root).dump(), "application/json");
  if (!res) return {false, "", "transport error: " + httplib::to_string(res.error()), elapsed()};
  if (res->status != 200) return {false, "", fmt::format("HTTP {}: {}", res->status, res->body.substr(0, 300)), elapsed()};
  try {
    const json j = json::parse(res->body);
    const auto& content = j.at("choices").at(0).at("message").at("content");
    if (content.is_string()) return {true, content.get<std::string>(), "", elapsed()};
    std::string text;
    for (const auto& part : content)
      if (part.value("type", "") == "text") text += part.value("text", "");
    return {true, text, "", elapsed()};
  } catch (const json::exception& e) {
    return {false, "", std::string("malformed response: ") + e.what(), elapsed()};
  }
}

std::unique_ptr<Endpoint> make_endpoint(const EndpointConfig& cfg) {
  if (cfg.transport == "replay") {
    if (cfg.replay.empty()) throw ConfigError("replay endpoint " + cfg.name + " names no replay file");
    return std::make_unique<ReplayEndpoint>(ReplayEndpoint::load(cfg.replay));
  }
  return std::make_unique<OpenAiEndpoint>(cfg);
}

}  // namespace visfactor::harness
