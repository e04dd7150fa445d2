#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "visfactor/harness/corpus.hpp"
#include "visfactor/harness/endpoint.hpp"
#include "visfactor/scoring.hpp"

namespace visfactor::harness {

/// One answer to one query by one respondent (a model or a participant).
struct TranscriptRow {
  std::string query;
  std::string subtest;
  std::string group;
  std::string participant;
  std::string prompt;
  std::string raw;
  std::optional<std::string> answer;  // normalized; empty when unparseable or failed
  std::string status = "ok";          // "ok" or "failed"
  int attempts = 0;
  double latency_ms = 0;
  std::string error;
  std::string timestamp;  // human answers only

  nlohmann::json to_json() const;
  static TranscriptRow from_json(const nlohmann::json& j);
  friend bool operator==(const TranscriptRow&, const TranscriptRow&) = default;
};

/// JSON Lines: a header object, then one row per line.
struct Transcript {
  static constexpr int kSchema = 1;

  nlohmann::json header = nlohmann::json::object();
  std::vector<TranscriptRow> rows;

  std::string dump() const;
  void write(const std::filesystem::path& path) const;
  static Transcript parse(const std::string& text);
  static Transcript read(const std::filesystem::path& path);
};

/// Stable 64-bit FNV-1a digest of the manifest text, as 16 hex digits.
std::string manifest_digest(const Manifest& m);

/// Header tying a transcript to its manifest and respondent.
nlohmann::json transcript_header(const Manifest& m, const std::string& kind, const nlohmann::json& respondent);

struct RunOptions {
  /// Concurrency cap override; 0 keeps the endpoint's.
  int concurrency = 0;
  /// Stop after this many new queries (0 = all); used to exercise resume.
  std::size_t limit = 0;
};

/// Sends every query not yet in the transcript file, retrying transport
/// failures and unparseable answers up to cfg.retries times. Rows are
/// appended as they finish; on completion the file is rewritten in manifest
/// order. A transcript from another manifest or endpoint is a ConfigError.
Transcript run_suite(const Manifest& manifest, const std::filesystem::path& root, Endpoint& endpoint,
                     const EndpointConfig& cfg, const std::filesystem::path& transcript_path, const RunOptions& opts = {});

/// Replay files must answer every manifest query.
void check_replay_covers(const ReplayEndpoint& replay, const Manifest& manifest);

enum class Reduction {
  per_response,  // every respondent's group counts separately
  majority,      // a query is correct when most of its answers are
};

struct ScoreOptions {
  bool partial = false;
  Reduction reduction = Reduction::per_response;
};

/// Per-subtest accuracy of a transcript against its manifest. Answers are
/// re-normalized from the raw text; failed rows score incorrect. Without
/// `partial` every manifest query needs a row.
scoring::ScoreTable score_transcript(const Manifest& manifest, const Transcript& t, const ScoreOptions& opts = {});

struct Report {
  std::vector<std::pair<std::string, scoring::ScoreTable>> rows;  // includes "Best" when asked
  nlohmann::json results;                                         // model x subtest x total
  std::string text;
};

/// Scores each named transcript. Human logs get one row per reduction, each
/// labeled; model transcripts get one row. `best_of` appends the per-subtest
/// maximum over the model rows.
Report make_report(const Manifest& manifest, const std::vector<std::pair<std::string, Transcript>>& transcripts,
                   bool partial, bool best_of);

std::string to_string(Reduction r);
Reduction reduction_from_string(const std::string& s);

}  // namespace visfactor::harness
