#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "visfactor/harness/prompts.hpp"
#include "visfactor/image.hpp"
#include "visfactor/rng.hpp"
#include "visfactor/scoring.hpp"

namespace visfactor::harness {

/// One prompt sent to a respondent. Image paths are relative to the corpus root.
struct QueryRecord {
  std::string id;
  std::string template_id;
  Slots slots;
  std::vector<std::string> images;
  scoring::QuestionFormat format;
  scoring::Gold gold;
};

/// One question; its queries form one variant group credited all-correct.
struct QuestionRecord {
  std::string id;
  std::string subtest;
  std::string preset;
  int index = 0;
  std::uint64_t seed = 0;
  nlohmann::json params = nlohmann::json::object();
  nlohmann::json data;  // generator output the oracle re-checks; null for external items
  std::vector<QueryRecord> queries;
};

struct Manifest {
  static constexpr int kSchema = 1;

  std::uint64_t master_seed = 0;
  std::string preset;
  std::vector<QuestionRecord> questions;

  std::size_t query_count() const;
  /// Questions and queries per subtest, in report order.
  std::vector<std::tuple<std::string, std::size_t, std::size_t>> counts() const;

  nlohmann::json to_json() const;
  static Manifest from_json(const nlohmann::json& j);
  /// Two-space indented JSON with a trailing newline.
  std::string dump() const;
  void write(const std::filesystem::path& path) const;
  static Manifest read(const std::filesystem::path& path);
};

nlohmann::json to_json(const QueryRecord& q);
QueryRecord query_from_json(const nlohmann::json& j);
nlohmann::json to_json(const QuestionRecord& q);
QuestionRecord question_from_json(const nlohmann::json& j);

/// Per-subtest entry of a corpus plan. `items` names a JSON file of
/// externally authored question records for subtests with no generator.
struct PlanEntry {
  std::string subtest;
  int count = 0;
  nlohmann::json params = nlohmann::json::object();
  std::filesystem::path items;
};

struct Plan {
  std::string preset;
  std::vector<PlanEntry> entries;

  /// Named preset from a presets file (data/presets.json by default).
  static Plan from_preset(const std::string& name, const std::filesystem::path& presets = {});
  /// {"preset": ..., "subtests": {"CF1": {"count": .., "params": {..}, "items": ..}}}
  static Plan from_json(const nlohmann::json& j, const std::filesystem::path& base = {});
  static Plan load(const std::filesystem::path& path);
  nlohmann::json to_json() const;
};

/// Generator output for one question before it is laid out on disk. Query
/// image lists hold image names, resolved to paths by the corpus builder.
struct Generated {
  nlohmann::json data;
  std::vector<std::pair<std::string, Image>> images;
  std::vector<QueryRecord> queries;
};

struct BuildContext {
  std::uint64_t master_seed = 0;
  int index = 0;
};

using Builder = std::function<Generated(const nlohmann::json& params, SeededRng& rng, const BuildContext& ctx)>;
/// Re-derives every gold of a question from its stored data and images.
/// Returns one message per disagreement.
using Oracle = std::function<std::vector<std::string>(const QuestionRecord& q, const std::filesystem::path& root)>;

struct Generator {
  std::string subtest;
  nlohmann::json defaults;
  Builder build;
  Oracle check;
};

/// Registered generators, one per generatable subtest.
const std::vector<Generator>& generators();
const Generator* find_generator(const std::string& subtest);

/// Question seed for (master, subtest, index).
std::uint64_t question_seed(std::uint64_t master, const std::string& subtest, int index);
std::string question_id(const std::string& subtest, int index);

/// Generates every planned question, writes images under `out_dir/images`
/// and the manifest to `out_dir/manifest.json`. A generator failure is
/// rethrown as GenerationFailed naming the subtest and seed.
Manifest build_corpus(const Plan& plan, std::uint64_t master_seed, const std::filesystem::path& out_dir,
                      unsigned threads = 0);

struct ValidationReport {
  std::size_t questions = 0;
  std::size_t queries = 0;
  std::size_t images = 0;
  std::vector<std::string> mismatches;
  bool ok() const { return mismatches.empty(); }
};

/// Oracle re-check of every gold, regeneration of every generated question
/// from its seed with byte comparison of data and images, and format checks.
ValidationReport validate_corpus(const Manifest& manifest, const std::filesystem::path& root, unsigned threads = 0);

/// Runs f(i) for i in [0, n) on up to `threads` workers (0 = hardware).
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& f);

}  // namespace visfactor::harness
