#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "visfactor/harness/corpus.hpp"
#include "visfactor/harness/runner.hpp"
#include "visfactor/rng.hpp"

namespace visfactor::harness {

/// Query id -> the participants answering it. Every query of a question goes
/// to the same participants so each of them can earn group credit.
struct AssignmentPlan {
  std::vector<std::string> participants;
  std::map<std::string, std::vector<std::string>> slots;

  /// Assigned queries of one participant, in manifest order.
  std::vector<std::string> queries_for(const std::string& participant, const Manifest& m) const;
  std::map<std::string, std::size_t> loads() const;

  nlohmann::json to_json() const;
  static AssignmentPlan from_json(const nlohmann::json& j);
};

/// Questions are placed largest first on the `per_query` least-loaded
/// participants (ties broken by a seeded ranking). Throws ConfigError when
/// the pool is smaller than `per_query`.
AssignmentPlan plan_assignments(const Manifest& m, const std::vector<std::string>& participants, SeededRng& rng,
                                int per_query = 3);

/// Pseudonymous participant tokens.
std::vector<std::string> participant_tokens(std::size_t n, SeededRng& rng);

enum class SubmitStatus { stored, already_answered, unassigned, unknown };

/// Live study state. Answers are appended to a JSON Lines log as they
/// arrive; reopening the same log restores them.
class Study {
 public:
  using Clock = std::function<std::string()>;

  Study(Manifest manifest, std::filesystem::path root, AssignmentPlan plan, std::filesystem::path log_path,
        Clock clock = {});

  const Manifest& manifest() const { return manifest_; }
  const AssignmentPlan& plan() const { return plan_; }
  const std::filesystem::path& root() const { return root_; }

  bool knows(const std::string& participant) const;
  bool has_query(const std::string& query) const { return queries_.count(query) != 0; }
  bool assigned(const std::string& participant, const std::string& query) const;
  /// {participant, queries, answered, complete}
  nlohmann::json assignment(const std::string& participant) const;
  /// Instruction text, parts with image URLs, and the answer format.
  nlohmann::json item(const std::string& query) const;
  /// Stores the raw answer verbatim; the scorer normalizes it later.
  SubmitStatus submit(const std::string& participant, const std::string& query, const std::string& answer);
  bool complete() const;
  /// Transcript rows in manifest order, one per participant per query.
  /// Throws ConfigError when answers are missing and `partial` is off.
  Transcript export_log(bool partial) const;

 private:
  Manifest manifest_;
  std::filesystem::path root_;
  AssignmentPlan plan_;
  std::filesystem::path log_path_;
  Clock clock_;
  std::map<std::string, std::pair<const QuestionRecord*, const QueryRecord*>> queries_;
  std::map<std::pair<std::string, std::string>, TranscriptRow> answers_;  // (participant, query)
  mutable std::mutex mu_;
};

std::string to_string(SubmitStatus s);

/// HTTP front of a study:
///   GET  /api/assignment/<participant>
///   GET  /api/item/<query>?participant=<id>
///   POST /api/answer      {"participant", "query", "answer"}
///   GET  /api/log[?partial=1]
///   GET  /images/...      corpus images
/// plus static files from `static_dir` when given.
class StudyServer {
 public:
  explicit StudyServer(Study& study, const std::filesystem::path& static_dir = {});
  ~StudyServer();
  StudyServer(const StudyServer&) = delete;
  StudyServer& operator=(const StudyServer&) = delete;

  /// Binds and returns the port; port 0 picks a free one.
  int bind(const std::string& host, int port);
  /// Serves until stop() is called.
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace visfactor::harness
