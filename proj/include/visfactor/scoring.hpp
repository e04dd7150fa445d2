#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace visfactor::scoring {

enum class FormatKind { yesno, mcq, fill_blank, composite };

/// Answer format of one query or, for composites, of a whole variant group.
struct QuestionFormat {
  FormatKind kind = FormatKind::yesno;
  int options = 0;                  // mcq
  int space = 0;                    // fill_blank; 0 means open-ended
  std::vector<QuestionFormat> parts;  // composite, credited all-correct
  std::optional<double> fixed;      // chance supplied from outside, not derived

  static QuestionFormat yesno() { return {}; }
  static QuestionFormat mcq(int n);
  static QuestionFormat fill(int space);
  static QuestionFormat all_of(std::vector<QuestionFormat> parts);
  static QuestionFormat repeat(const QuestionFormat& f, int n);
  static QuestionFormat constant(double p);
};

/// Probability that a uniform random responder earns credit.
double chance(const QuestionFormat& f);

nlohmann::json to_json(const QuestionFormat& f);
QuestionFormat format_from_json(const nlohmann::json& j);

struct SubtestSpec {
  std::string id;
  std::string name;
  QuestionFormat group;  // format of one variant group
  bool generated = false;
};

/// The twenty subtests in report order.
const std::vector<SubtestSpec>& subtests();
const SubtestSpec& subtest(std::string_view id);
/// Unweighted mean of per-subtest chance.
double mean_chance();

// Variant constructions. Each returns the ground truths of one group.

/// One yes/no query per option; throws ItemDefinitionError unless exactly one
/// option is correct.
std::vector<bool> decompose_mcq(const std::vector<bool>& option_correct);
/// Statements "A matches B", "A differs from B", "B matches A", "B differs from A".
std::vector<bool> symmetry_variants(bool match);

enum class AnswerKind { yesno, letter, number, point, word, name };
std::string to_string(AnswerKind k);
AnswerKind answer_kind_from_string(std::string_view s);

struct Gold {
  AnswerKind kind = AnswerKind::yesno;
  std::string value;                 // canonical
  std::vector<std::string> aliases;  // name answers: every accepted spelling

  static Gold truth(bool t) { return {AnswerKind::yesno, t ? "TRUE" : "FALSE", {}}; }
};
nlohmann::json to_json(const Gold& g);
Gold gold_from_json(const nlohmann::json& j);

/// Body of an {"answer": ...} envelope when one is present, else the text.
std::string extract_envelope(std::string_view raw);
/// Canonical answer, or nullopt when the text does not parse as `kind`.
/// Canonical answers normalize to themselves.
std::optional<std::string> normalize_answer(std::string_view raw, AnswerKind kind);
bool is_correct(const std::optional<std::string>& answer, const Gold& gold);

/// SS3: the same building number is the truth in both directions.
std::vector<Gold> ss3_bidirectional(int building);
/// VZ3: fill-in letter plus a TRUE pair and a cyclically permuted FALSE pair.
std::vector<Gold> vz3_bundle(const std::optional<std::string>& letter, const std::optional<bool>& true_pair,
                             const std::optional<bool>& false_pair);

struct QueryOutcome {
  std::string subtest;
  std::string group;
  bool correct = false;
};

struct GroupOutcome {
  std::string subtest;
  std::string group;
  bool credit = false;
};

/// All-correct credit per (subtest, group); order of the queries is irrelevant.
std::vector<GroupOutcome> group_credit(const std::vector<QueryOutcome>& queries);

struct SubtestScore {
  std::string id;
  int groups = 0;
  int credited = 0;
  double accuracy = 0;  // percent
};

struct ScoreTable {
  std::vector<SubtestScore> rows;  // report order, present subtests only
  double total = 0;                // percent, unweighted over rows
  bool partial = false;

  const SubtestScore* find(std::string_view id) const;
};

/// Throws AggregationError when a subtest has no groups and `partial` is off.
ScoreTable aggregate(const std::vector<GroupOutcome>& groups, bool partial);
/// Per-subtest maximum across tables; the total is the mean of those maxima.
ScoreTable best_of(const std::vector<ScoreTable>& tables);

std::string format_table(const std::vector<std::pair<std::string, ScoreTable>>& named);
nlohmann::json to_json(const ScoreTable& t);

}  // namespace visfactor::scoring
