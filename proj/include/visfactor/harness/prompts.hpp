#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace visfactor::harness {

/// One piece of a multimodal user message.
struct Part {
  bool is_image = false;
  std::string text;  // text, or the image path relative to the corpus root
};

struct Message {
  std::vector<Part> parts;

  /// Text with every image replaced by "<image>".
  std::string text() const;
  std::vector<std::string> images() const;
};

using Slots = std::map<std::string, std::string>;

/// Instruction templates with {{name}} slots and {{image}} markers.
class PromptBook {
 public:
  static PromptBook load(const std::filesystem::path& path);
  static PromptBook from_json(const nlohmann::json& j);
  static const PromptBook& builtin();

  bool has(const std::string& id) const { return templates_.count(id) != 0; }
  const std::string& text(const std::string& id) const;
  /// Statement variants for match/differ groups, in group order.
  const std::vector<std::string>& statements(const std::string& id) const;

  /// Fills the template. Throws TemplateError on an unknown template, a
  /// missing slot, or an image count that differs from the markers.
  Message assemble(const std::string& id, const Slots& slots, const std::vector<std::string>& images) const;

 private:
  std::map<std::string, std::string> templates_;
  std::map<std::string, std::vector<std::string>> statements_;
};

}  // namespace visfactor::harness
