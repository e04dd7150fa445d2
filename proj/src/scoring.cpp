#include "visfactor/scoring.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <regex>

#include <fmt/format.h>

#include "visfactor/error.hpp"

namespace visfactor::scoring {

QuestionFormat QuestionFormat::mcq(int n) {
  if (n < 2) throw InvalidArgument("multiple choice needs at least two options");
  QuestionFormat f;
  f.kind = FormatKind::mcq;
  f.options = n;
  return f;
}

QuestionFormat QuestionFormat::fill(int space) {
  if (space < 0) throw InvalidArgument("answer space must be non-negative");
  QuestionFormat f;
  f.kind = FormatKind::fill_blank;
  f.space = space;
  return f;
}

QuestionFormat QuestionFormat::all_of(std::vector<QuestionFormat> parts) {
  if (parts.empty()) throw InvalidArgument("composite format needs parts");
  QuestionFormat f;
  f.kind = FormatKind::composite;
  f.parts = std::move(parts);
  return f;
}

QuestionFormat QuestionFormat::repeat(const QuestionFormat& f, int n) {
  return all_of(std::vector<QuestionFormat>(static_cast<std::size_t>(n), f));
}

QuestionFormat QuestionFormat::constant(double p) {
  if (!(p >= 0 && p <= 1)) throw InvalidArgument("chance must lie in [0, 1]");
  QuestionFormat f;
  f.kind = FormatKind::composite;
  f.fixed = p;
  return f;
}

double chance(const QuestionFormat& f) {
  if (f.fixed) return *f.fixed;
  switch (f.kind) {
    case FormatKind::yesno: return 0.5;
    case FormatKind::mcq: return 1.0 / f.options;
    case FormatKind::fill_blank: return f.space > 0 ? 1.0 / f.space : 0.0;
    case FormatKind::composite: {
      double p = 1;
      for (const auto& part : f.parts) p *= chance(part);
      return p;
    }
  }
  throw InvalidArgument("unknown question format");
}

nlohmann::json to_json(const QuestionFormat& f) {
  nlohmann::json j;
  switch (f.kind) {
    case FormatKind::yesno: j["kind"] = "yesno"; break;
    case FormatKind::mcq: j = {{"kind", "mcq"}, {"options", f.options}}; break;
    case FormatKind::fill_blank: j = {{"kind", "fill_blank"}, {"space", f.space}}; break;
    case FormatKind::composite:
      j["kind"] = "composite";
      j["parts"] = nlohmann::json::array();
      for (const auto& p : f.parts) j["parts"].push_back(to_json(p));
  }
  if (f.fixed) j["chance"] = *f.fixed;
  return j;
}

QuestionFormat format_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind");
  QuestionFormat f;
  if (kind == "yesno") {
    f = QuestionFormat::yesno();
  } else if (kind == "mcq") {
    f = QuestionFormat::mcq(j.at("options"));
  } else if (kind == "fill_blank") {
    f = QuestionFormat::fill(j.value("space", 0));
  } else if (kind == "composite") {
    f.kind = FormatKind::composite;
    for (const auto& p : j.value("parts", nlohmann::json::array())) f.parts.push_back(format_from_json(p));
  } else {
    throw InvalidArgument("unknown question format '" + kind + "'");
  }
  if (j.contains("chance")) f.fixed = j.at("chance").get<double>();
  if (f.kind == FormatKind::composite && f.parts.empty() && !f.fixed) throw InvalidArgument("composite format needs parts");
  return f;
}

const std::vector<SubtestSpec>& subtests() {
  using F = QuestionFormat;
  static const std::vector<SubtestSpec> all{
      {"CF1", "Hidden Figures Test", F::repeat(F::yesno(), 5), true},
      {"CF2", "Hidden Patterns Test", F::repeat(F::yesno(), 5), true},
      {"CF3", "Copying Test", F::fill(25), true},
      {"CS1", "Gestalt Completion Test", F::fill(0), true},
      {"CS2", "Concealed Words Test", F::fill(0), true},
      {"CS3", "Snowy Pictures", F::fill(0), true},
      {"P3", "Identical Pictures Test", F::repeat(F::yesno(), 5), false},
      // Grouped chance for I3 is published, not derivable from its format.
      {"I3", "Figure Classification", F::constant(0.0023), false},
      {"RL2", "Diagramming Relationships", F::repeat(F::yesno(), 5), false},
      {"MA1", "Picture-Number Test", F::fill(21), true},
      {"MV1", "Shape Memory Test", F::repeat(F::yesno(), 4), false},
      {"MV2", "Building Memory", F::repeat(F::yesno(), 5), false},
      {"MV3", "Map Memory", F::repeat(F::yesno(), 4), false},
      {"S1", "Card Rotations Test", F::repeat(F::yesno(), 8), true},
      {"S2", "Cube Comparisons Test", F::repeat(F::yesno(), 4), true},
      {"SS2", "Choosing A Path", F::repeat(F::yesno(), 5), false},
      {"SS3", "Map Planning Test", F::repeat(F::fill(10), 2), true},
      {"VZ1", "Form Board Test", F::repeat(F::yesno(), 5), true},
      {"VZ2", "Paper Folding Test", F::repeat(F::yesno(), 5), true},
      // Published as 14.6 / 4 without a derivation; consumed as given.
      {"VZ3", "Surface Development Test", F::constant(0.0365), false},
  };
  return all;
}

const SubtestSpec& subtest(std::string_view id) {
  for (const auto& s : subtests())
    if (s.id == id) return s;
  throw InvalidArgument("unknown subtest '" + std::string(id) + "'");
}

double mean_chance() {
  double sum = 0;
  for (const auto& s : subtests()) sum += chance(s.group);
  return sum / static_cast<double>(subtests().size());
}

std::vector<bool> decompose_mcq(const std::vector<bool>& option_correct) {
  if (std::count(option_correct.begin(), option_correct.end(), true) != 1)
    throw ItemDefinitionError("multiple choice item must have exactly one correct option");
  return option_correct;
}

std::vector<bool> symmetry_variants(bool match) { return {match, !match, match, !match}; }

std::string to_string(AnswerKind k) {
  switch (k) {
    case AnswerKind::yesno: return "yesno";
    case AnswerKind::letter: return "letter";
    case AnswerKind::number: return "number";
    case AnswerKind::point: return "point";
    case AnswerKind::word: return "word";
    case AnswerKind::name: return "name";
  }
  return "yesno";
}

AnswerKind answer_kind_from_string(std::string_view s) {
  for (auto k : {AnswerKind::yesno, AnswerKind::letter, AnswerKind::number, AnswerKind::point, AnswerKind::word, AnswerKind::name})
    if (to_string(k) == s) return k;
  throw InvalidArgument("unknown answer kind '" + std::string(s) + "'");
}

nlohmann::json to_json(const Gold& g) {
  nlohmann::json j{{"kind", to_string(g.kind)}, {"value", g.value}};
  if (!g.aliases.empty()) j["aliases"] = g.aliases;
  return j;
}

Gold gold_from_json(const nlohmann::json& j) {
  Gold g{answer_kind_from_string(j.at("kind").get<std::string>()), j.at("value"), {}};
  if (j.contains("aliases")) g.aliases = j.at("aliases").get<std::vector<std::string>>();
  return g;
}

namespace {

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// Trims whitespace, quotes, backticks and trailing sentence punctuation.
std::string strip(std::string_view s) {
  auto junk = [](char c) { return std::isspace(static_cast<unsigned char>(c)) || c == '"' || c == '\'' || c == '`'; };
  while (!s.empty() && junk(s.front())) s.remove_prefix(1);
  while (!s.empty() && (junk(s.back()) || s.back() == '.' || s.back() == '!' || s.back() == ',')) s.remove_suffix(1);
  return std::string(s);
}

std::optional<long long> parse_int(std::string s) {
  s = strip(s);
  if (!s.empty() && s.front() == '+') s.erase(0, 1);
  long long v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec == std::errc() && end == s.data() + s.size() && !s.empty()) return v;
  // "4.0" is the number 4; "4.5" is not an integer answer.
  try {
    std::size_t used = 0;
    const double d = std::stod(s, &used);
    if (used == s.size() && std::isfinite(d) && d == std::floor(d) && std::abs(d) < 1e15) return static_cast<long long>(d);
  } catch (const std::exception&) {
  }
  return std::nullopt;
}

std::string collapse(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!out.empty() && out.back() != ' ') out += ' ';
    } else {
      out += c;
    }
  }
  if (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

std::string canonical_name(const std::string& s) {
  std::string n = collapse(lower(strip(s)));
  for (const char* article : {"a ", "an ", "the "})
    if (n.rfind(article, 0) == 0) n = n.substr(std::string_view(article).size());
  return n;
}

}  // namespace

std::string extract_envelope(std::string_view raw) {
  static const std::regex envelope(R"re(\{\s*"answer"\s*:\s*([\s\S]*?)\s*\})re");
  const std::string text(raw);
  std::string body = text;
  // The last envelope wins: models sometimes restate the format first.
  for (auto it = std::sregex_iterator(text.begin(), text.end(), envelope); it != std::sregex_iterator(); ++it) body = (*it)[1];
  return strip(body);
}

std::optional<std::string> normalize_answer(std::string_view raw, AnswerKind kind) {
  const std::string body = extract_envelope(raw);
  switch (kind) {
    case AnswerKind::yesno: {
      const std::string v = lower(body);
      for (const char* t : {"t", "y", "1", "true", "yes"})
        if (v == t) return "TRUE";
      for (const char* f : {"f", "n", "0", "false", "no"})
        if (v == f) return "FALSE";
      return std::nullopt;
    }
    case AnswerKind::letter: {
      std::string v = strip(body);
      if (v.size() == 3 && v.front() == '(' && v.back() == ')') v = v.substr(1, 1);
      if (v.size() == 2 && v.back() == ')') v.pop_back();
      if (v.size() == 1 && std::isalpha(static_cast<unsigned char>(v[0]))) return std::string(1, static_cast<char>(std::toupper(v[0])));
      return std::nullopt;
    }
    case AnswerKind::number: {
      if (auto n = parse_int(body)) return std::to_string(*n);
      return std::nullopt;
    }
    case AnswerKind::point: {
      static const std::regex pair(R"(^[\(\[]?\s*([+-]?[0-9]+(?:\.0*)?)\s*,\s*([+-]?[0-9]+(?:\.0*)?)\s*[\)\]]?$)");
      std::smatch m;
      const std::string v = strip(body);
      if (!std::regex_match(v, m, pair)) return std::nullopt;
      const auto a = parse_int(m[1]), b = parse_int(m[2]);
      if (!a || !b) return std::nullopt;
      return fmt::format("({}, {})", *a, *b);
    }
    case AnswerKind::word: {
      const std::string v = lower(strip(body));
      if (v.empty()) return std::nullopt;
      return v;
    }
    case AnswerKind::name: {
      const std::string v = canonical_name(body);
      if (v.empty()) return std::nullopt;
      return v;
    }
  }
  return std::nullopt;
}

bool is_correct(const std::optional<std::string>& answer, const Gold& gold) {
  if (!answer) return false;
  if (gold.kind == AnswerKind::name) {
    if (*answer == canonical_name(gold.value)) return true;
    return std::any_of(gold.aliases.begin(), gold.aliases.end(), [&](const std::string& a) { return canonical_name(a) == *answer; });
  }
  if (gold.kind == AnswerKind::word) return *answer == gold.value;
  const auto g = normalize_answer(gold.value, gold.kind);
  return g && *g == *answer;
}

std::vector<Gold> ss3_bidirectional(int building) {
  const Gold g{AnswerKind::number, std::to_string(building), {}};
  return {g, g};
}

std::vector<Gold> vz3_bundle(const std::optional<std::string>& letter, const std::optional<bool>& true_pair,
                             const std::optional<bool>& false_pair) {
  if (!letter || !true_pair || !false_pair) throw ItemDefinitionError("VZ3 bundle needs a letter and both pair queries");
  const auto canon = normalize_answer(*letter, AnswerKind::letter);
  if (!canon) throw ItemDefinitionError("VZ3 answer must be a single letter");
  return {{AnswerKind::letter, *canon, {}}, Gold::truth(*true_pair), Gold::truth(*false_pair)};
}

std::vector<GroupOutcome> group_credit(const std::vector<QueryOutcome>& queries) {
  std::map<std::pair<std::string, std::string>, bool> credit;
  for (const auto& q : queries) {
    auto [it, fresh] = credit.emplace(std::make_pair(q.subtest, q.group), q.correct);
    if (!fresh) it->second = it->second && q.correct;
  }
  std::vector<GroupOutcome> out;
  for (const auto& [key, c] : credit) out.push_back({key.first, key.second, c});
  return out;
}

const SubtestScore* ScoreTable::find(std::string_view id) const {
  for (const auto& r : rows)
    if (r.id == id) return &r;
  return nullptr;
}

namespace {

ScoreTable finish(std::vector<SubtestScore> rows, bool partial) {
  ScoreTable t;
  t.partial = partial;
  double sum = 0;
  for (const auto& r : rows) sum += r.accuracy;
  t.total = rows.empty() ? 0 : sum / static_cast<double>(rows.size());
  t.rows = std::move(rows);
  return t;
}

}  // namespace

ScoreTable aggregate(const std::vector<GroupOutcome>& groups, bool partial) {
  std::map<std::string, SubtestScore> by_id;
  for (const auto& g : groups) {
    subtest(g.subtest);  // rejects unknown ids
    auto& s = by_id[g.subtest];
    s.id = g.subtest;
    ++s.groups;
    s.credited += g.credit;
  }
  std::vector<SubtestScore> rows;
  for (const auto& spec : subtests()) {
    auto it = by_id.find(spec.id);
    if (it == by_id.end()) {
      if (!partial) throw AggregationError("no scored groups for " + spec.id + " (pass the partial-run flag to exclude it)");
      continue;
    }
    it->second.accuracy = 100.0 * it->second.credited / it->second.groups;
    rows.push_back(it->second);
  }
  return finish(std::move(rows), partial);
}

ScoreTable best_of(const std::vector<ScoreTable>& tables) {
  std::vector<SubtestScore> rows;
  bool partial = false;
  for (const auto& spec : subtests()) {
    std::optional<SubtestScore> best;
    for (const auto& t : tables) {
      partial = partial || t.partial;
      if (const auto* r = t.find(spec.id); r && (!best || r->accuracy > best->accuracy)) best = *r;
    }
    if (best) rows.push_back(*best);
  }
  return finish(std::move(rows), partial);
}

std::string format_table(const std::vector<std::pair<std::string, ScoreTable>>& named) {
  std::vector<std::string> ids;
  for (const auto& spec : subtests())
    for (const auto& [name, t] : named)
      if (t.find(spec.id)) {
        ids.push_back(spec.id);
        break;
      }
  std::size_t width = 5;
  for (const auto& [name, t] : named) width = std::max(width, name.size());
  std::string out = fmt::format("{:<{}}", "Model", width);
  for (const auto& id : ids) out += fmt::format(" {:>6}", id);
  out += fmt::format(" {:>6}\n", "Total");
  for (const auto& [name, t] : named) {
    out += fmt::format("{:<{}}", name, width);
    for (const auto& id : ids) {
      const auto* r = t.find(id);
      out += r ? fmt::format(" {:>6.2f}", r->accuracy) : fmt::format(" {:>6}", "-");
    }
    out += fmt::format(" {:>6.2f}\n", t.total);
  }
  return out;
}

nlohmann::json to_json(const ScoreTable& t) {
  nlohmann::json j{{"total", t.total}, {"partial", t.partial}};
  j["subtests"] = nlohmann::json::object();
  for (const auto& r : t.rows) j["subtests"][r.id] = {{"accuracy", r.accuracy}, {"groups", r.groups}, {"credited", r.credited}};
  return j;
}

}  // namespace visfactor::scoring
