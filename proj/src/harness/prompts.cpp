#include "visfactor/harness/prompts.hpp"

#include <fstream>

#include "visfactor/data.hpp"
#include "visfactor/error.hpp"

namespace visfactor::harness {

std::string Message::text() const {
  std::string out;
  for (const auto& p : parts) out += p.is_image ? "<image>" : p.text;
  return out;
}

std::vector<std::string> Message::images() const {
  std::vector<std::string> out;
  for (const auto& p : parts)
    if (p.is_image) out.push_back(p.text);
  return out;
}

PromptBook PromptBook::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open prompt templates " + path.string());
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("bad prompt templates " + path.string() + ": " + e.what());
  }
}

PromptBook PromptBook::from_json(const nlohmann::json& j) {
  PromptBook book;
  for (const auto& [id, t] : j.at("templates").items()) book.templates_[id] = t.at("text").get<std::string>();
  if (j.contains("statements"))
    for (const auto& [id, list] : j.at("statements").items()) book.statements_[id] = list.get<std::vector<std::string>>();
  return book;
}

const PromptBook& PromptBook::builtin() {
  static const PromptBook book = load(data_path("prompts.json"));
  return book;
}

const std::string& PromptBook::text(const std::string& id) const {
  auto it = templates_.find(id);
  if (it == templates_.end()) throw TemplateError("no prompt template '" + id + "'");
  return it->second;
}

const std::vector<std::string>& PromptBook::statements(const std::string& id) const {
  auto it = statements_.find(id);
  if (it == statements_.end()) throw TemplateError("no statement variants for '" + id + "'");
  return it->second;
}

Message PromptBook::assemble(const std::string& id, const Slots& slots, const std::vector<std::string>& images) const {
  const std::string& t = text(id);
  Message msg;
  std::string pending;
  std::size_t next_image = 0;
  std::size_t pos = 0;
  while (pos < t.size()) {
    const std::size_t open = t.find("{{", pos);
    if (open == std::string::npos) {
      pending += t.substr(pos);
      break;
    }
    pending += t.substr(pos, open - pos);
    const std::size_t close = t.find("}}", open);
    if (close == std::string::npos) throw TemplateError("unclosed slot in template '" + id + "'");
    const std::string name = t.substr(open + 2, close - open - 2);
    pos = close + 2;
    if (name == "image") {
      if (next_image >= images.size()) throw TemplateError("template '" + id + "' needs more images than supplied");
      if (!pending.empty()) msg.parts.push_back({false, std::move(pending)});
      pending.clear();
      msg.parts.push_back({true, images[next_image++]});
      continue;
    }
    auto it = slots.find(name);
    if (it == slots.end()) throw TemplateError("template '" + id + "' is missing slot '" + name + "'");
    pending += it->second;
  }
  if (!pending.empty()) msg.parts.push_back({false, std::move(pending)});
  if (next_image != images.size()) throw TemplateError("template '" + id + "' takes fewer images than supplied");
  return msg;
}

}  // namespace visfactor::harness
