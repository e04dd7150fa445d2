#include <doctest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "visfactor/error.hpp"
#include "visfactor/harness/prompts.hpp"
#include "visfactor/scoring.hpp"

using namespace visfactor;
using namespace visfactor::harness;

namespace {

std::string read_golden(const std::string& id) {
  std::ifstream in(std::string(VISFACTOR_TEST_DIR) + "/golden/prompts/" + id + ".txt");
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count_markers(const std::string& text) {
  std::size_t n = 0;
  for (std::size_t pos = text.find("{{image}}"); pos != std::string::npos; pos = text.find("{{image}}", pos + 1)) ++n;
  return n;
}

Slots example_slots(const std::string& id, const PromptBook& book) {
  if (id == "CF3") return {{"rows", "5"}, {"cols", "5"}};
  if (id == "MA1") return {{"pairs", "21"}};
  if (id == "MV1") return {{"statement", book.statements("MV1")[1]}};
  if (id == "MV3" || id == "S2") return {{"statement", book.statements(id)[0]}};
  if (id == "MV2") return {{"block", "E"}};
  if (id == "SS2") return {{"box", "E"}};
  if (id == "RL2") return {{"groups", "Desks, furniture, pencils"}};
  if (id == "SS3") return {{"start", "F"}, {"end", "T"}};
  if (id == "VZ1") return {{"piece", "Fifth"}};
  if (id == "VZ3") return {{"edge", "5"}};
  if (id == "VZ3-pair") return {{"pair", "(5, H)"}};
  return {};
}

}  // namespace

TEST_CASE("templates reproduce the reference wording") {
  const PromptBook& book = PromptBook::builtin();
  std::vector<std::string> ids;
  for (const auto& s : scoring::subtests()) ids.push_back(s.id);
  ids.push_back("VZ3-pair");
  for (const auto& id : ids) {
    CAPTURE(id);
    REQUIRE(book.has(id));
    const std::size_t n = count_markers(book.text(id));
    std::vector<std::string> images;
    for (std::size_t i = 0; i < n; ++i) images.push_back("img" + std::to_string(i) + ".png");
    const Message msg = book.assemble(id, example_slots(id, book), images);
    CHECK(msg.text() + "\n" == read_golden(id));
    CHECK(msg.images() == images);
  }
}

TEST_CASE("statement variants") {
  const PromptBook& book = PromptBook::builtin();
  for (const char* id : {"MV1", "MV3", "S2"}) {
    const auto& st = book.statements(id);
    CHECK(st.size() == 4);
    std::set<std::string> distinct(st.begin(), st.end());
    CHECK(distinct.size() == 4);
  }
  CHECK_THROWS_AS(book.statements("CF1"), TemplateError);
}

TEST_CASE("assembly errors") {
  const PromptBook book = PromptBook::from_json(nlohmann::json::parse(R"({
    "templates": {"A": {"text": "x {{image}} {{who}} y"}, "B": {"text": "open {{slot"}}
  })"));
  const Message m = book.assemble("A", {{"who", "Z"}}, {"p.png"});
  REQUIRE(m.parts.size() == 3);
  CHECK(m.parts[0].text == "x ");
  CHECK(m.parts[1].is_image);
  CHECK(m.parts[2].text == " Z y");
  CHECK_THROWS_AS(book.assemble("A", {}, {"p.png"}), TemplateError);
  CHECK_THROWS_AS(book.assemble("A", {{"who", "Z"}}, {}), TemplateError);
  CHECK_THROWS_AS(book.assemble("A", {{"who", "Z"}}, {"p.png", "q.png"}), TemplateError);
  CHECK_THROWS_AS(book.assemble("B", {}, {}), TemplateError);
  CHECK_THROWS_AS(book.assemble("C", {}, {}), TemplateError);
}
