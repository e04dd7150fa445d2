#include "visfactor/harness/runner.hpp"

#include <atomic>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "visfactor/error.hpp"

namespace visfactor::harness {

using nlohmann::json;

// ---- transcript ----

json TranscriptRow::to_json() const {
  json j = {{"query", query},
            {"subtest", subtest},
            {"group", group},
            {"participant", participant},
            {"prompt", prompt},
            {"raw", raw},
            {"answer", answer ? json(*answer) : json()},
            {"status", status},
            {"attempts", attempts},
            {"latency_ms", latency_ms},
            {"error", error}};
  if (!timestamp.empty()) j["timestamp"] = timestamp;
  return j;
}

TranscriptRow TranscriptRow::from_json(const json& j) {
  TranscriptRow r;
  r.query = j.at("query");
  r.subtest = j.value("subtest", "");
  r.group = j.value("group", "");
  r.participant = j.value("participant", "");
  r.prompt = j.value("prompt", "");
  r.raw = j.value("raw", "");
  if (j.contains("answer") && !j.at("answer").is_null()) r.answer = j.at("answer").get<std::string>();
  r.status = j.value("status", "ok");
  r.attempts = j.value("attempts", 0);
  r.latency_ms = j.value("latency_ms", 0.0);
  r.error = j.value("error", "");
  r.timestamp = j.value("timestamp", "");
  if (r.status != "ok" && r.status != "failed") throw ConfigError("row " + r.query + " has unknown status " + r.status);
  return r;
}

std::string Transcript::dump() const {
  json h = header;
  h["type"] = "header";
  h["schema"] = kSchema;
  std::string out = h.dump() + "\n";
  for (const auto& r : rows) out += r.to_json().dump() + "\n";
  return out;
}

void Transcript::write(const std::filesystem::path& path) const {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + tmp);
    out << dump();
  }
  std::filesystem::rename(tmp, path);
}

Transcript Transcript::parse(const std::string& text) {
  Transcript t;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception&) {
      // A crash can leave one torn line at the end; anything else is corrupt.
      if (in.peek() == EOF && text.back() != '\n') break;
      throw ConfigError("malformed transcript line: " + line.substr(0, 80));
    }
    if (first) {
      if (j.value("type", "") != "header") throw ConfigError("transcript does not start with a header");
      if (j.value("schema", 0) != kSchema) throw ConfigError("unsupported transcript schema");
      j.erase("type");
      j.erase("schema");
      t.header = j;
      first = false;
      continue;
    }
    t.rows.push_back(TranscriptRow::from_json(j));
  }
  if (first) throw ConfigError("empty transcript");
  return t;
}

Transcript Transcript::read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open transcript " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string manifest_digest(const Manifest& m) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : m.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

json transcript_header(const Manifest& m, const std::string& kind, const json& respondent) {
  return {{"kind", kind},
          {"manifest_digest", manifest_digest(m)},
          {"master_seed", m.master_seed},
          {"preset", m.preset},
          {"queries", m.query_count()},
          {"respondent", respondent}};
}

// ---- runner ----

namespace {

struct QueryRef {
  const QuestionRecord* question;
  const QueryRecord* query;
};

std::map<std::string, QueryRef> index_queries(const Manifest& m) {
  std::map<std::string, QueryRef> out;
  for (const auto& q : m.questions)
    for (const auto& qr : q.queries) out.emplace(qr.id, QueryRef{&q, &qr});
  return out;
}

json respondent_of(const EndpointConfig& cfg) {
  json r = {{"name", cfg.name},       {"transport", cfg.transport}, {"model", cfg.model},
            {"temperature", cfg.temperature}, {"reasoning", cfg.reasoning}, {"retries", cfg.retries}};
  r["top_p"] = cfg.top_p ? json(*cfg.top_p) : json();
  return r;
}

TranscriptRow ask(const QueryRef& ref, const std::filesystem::path& root, Endpoint& endpoint, const EndpointConfig& cfg) {
  const QueryRecord& q = *ref.query;
  const Message msg = PromptBook::builtin().assemble(q.template_id, q.slots, q.images);
  TranscriptRow row;
  row.query = q.id;
  row.subtest = ref.question->subtest;
  row.group = ref.question->id;
  row.participant = cfg.name;
  row.prompt = msg.text();
  row.status = "failed";
  for (int attempt = 1; attempt <= 1 + cfg.retries; ++attempt) {
    const Reply reply = endpoint.complete(q.id, msg, root, attempt);
    row.attempts = attempt;
    row.latency_ms += reply.latency_ms;
    if (!reply.ok) {
      row.error = reply.error;
      continue;
    }
    row.raw = reply.text;
    const auto answer = scoring::normalize_answer(reply.text, q.gold.kind);
    if (!answer) {
      row.error = "unparseable answer";
      continue;
    }
    row.answer = answer;
    row.status = "ok";
    row.error.clear();
    break;
  }
  return row;
}

}  // namespace

void check_replay_covers(const ReplayEndpoint& replay, const Manifest& manifest) {
  for (const auto& q : manifest.questions)
    for (const auto& qr : q.queries)
      if (!replay.has(qr.id)) throw ConfigError("replay file has no response for " + qr.id);
}

Transcript run_suite(const Manifest& manifest, const std::filesystem::path& root, Endpoint& endpoint,
                     const EndpointConfig& cfg, const std::filesystem::path& transcript_path, const RunOptions& opts) {
  const auto refs = index_queries(manifest);
  Transcript t;
  t.header = transcript_header(manifest, "model", respondent_of(cfg));

  std::set<std::string> done;
  if (std::filesystem::exists(transcript_path) && std::filesystem::file_size(transcript_path) > 0) {
    Transcript old = Transcript::read(transcript_path);
    if (old.header != t.header)
      throw ConfigError(transcript_path.string() + " belongs to another manifest or endpoint; refusing to resume");
    for (auto& r : old.rows) {
      if (!refs.count(r.query)) throw ConfigError("transcript row " + r.query + " is not in the manifest");
      if (!done.insert(r.query).second) throw ConfigError("transcript repeats " + r.query);
      t.rows.push_back(std::move(r));
    }
  }
  // Start the file afresh from what survived so a torn tail is dropped.
  t.write(transcript_path);

  std::vector<QueryRef> pending;
  for (const auto& q : manifest.questions)
    for (const auto& qr : q.queries)
      if (!done.count(qr.id)) pending.push_back({&q, &qr});
  if (opts.limit && pending.size() > opts.limit) pending.resize(opts.limit);

  std::mutex mu;
  std::ofstream log(transcript_path, std::ios::binary | std::ios::app);
  if (!log) throw ConfigError("cannot append to " + transcript_path.string());
  const int workers = std::max(1, opts.concurrency > 0 ? opts.concurrency : cfg.concurrency);
  parallel_for(pending.size(), static_cast<unsigned>(workers), [&](std::size_t i) {
    TranscriptRow row = ask(pending[i], root, endpoint, cfg);
    std::lock_guard lock(mu);
    log << row.to_json().dump() << "\n";
    log.flush();
    t.rows.push_back(std::move(row));
  });
  log.close();

  std::map<std::string, std::size_t> order;
  for (const auto& q : manifest.questions)
    for (const auto& qr : q.queries) order.emplace(qr.id, order.size());
  std::sort(t.rows.begin(), t.rows.end(), [&](const auto& a, const auto& b) { return order.at(a.query) < order.at(b.query); });
  t.write(transcript_path);
  return t;
}

// ---- scoring ----

std::string to_string(Reduction r) { return r == Reduction::majority ? "majority" : "per-response"; }

Reduction reduction_from_string(const std::string& s) {
  if (s == "majority") return Reduction::majority;
  if (s == "per-response") return Reduction::per_response;
  throw ConfigError("unknown reduction '" + s + "' (per-response or majority)");
}

scoring::ScoreTable score_transcript(const Manifest& manifest, const Transcript& t, const ScoreOptions& opts) {
  if (t.header.contains("manifest_digest") && t.header.at("manifest_digest") != manifest_digest(manifest))
    throw ConfigError("transcript was recorded against a different manifest");
  const auto refs = index_queries(manifest);

  // query -> participant -> correct
  std::map<std::string, std::map<std::string, bool>> marks;
  for (const auto& r : t.rows) {
    auto it = refs.find(r.query);
    if (it == refs.end()) throw ConfigError("transcript row " + r.query + " is not in the manifest");
    const auto& gold = it->second.query->gold;
    const bool correct = r.status == "ok" && scoring::is_correct(scoring::normalize_answer(r.raw, gold.kind), gold);
    if (!marks[r.query].emplace(r.participant, correct).second)
      throw ConfigError(fmt::format("{} answered {} twice", r.participant, r.query));
  }

  std::vector<scoring::GroupOutcome> groups;
  for (const auto& q : manifest.questions) {
    bool missing = false;
    for (const auto& qr : q.queries) missing |= !marks.count(qr.id);
    if (missing) {
      if (!opts.partial) throw AggregationError("no answer for some queries of " + q.id + "; pass the partial flag to score anyway");
      continue;
    }
    if (opts.reduction == Reduction::majority) {
      bool credit = true;
      for (const auto& qr : q.queries) {
        const auto& m = marks.at(qr.id);
        std::size_t right = 0;
        for (const auto& [_, ok] : m) right += ok;
        credit &= 2 * right > m.size();
      }
      groups.push_back({q.subtest, q.id, credit});
      continue;
    }
    // Per response: each respondent who answered the whole group counts once.
    std::set<std::string> people;
    for (const auto& qr : q.queries)
      for (const auto& [p, _] : marks.at(qr.id)) people.insert(p);
    for (const auto& p : people) {
      bool complete = true, credit = true;
      for (const auto& qr : q.queries) {
        const auto& m = marks.at(qr.id);
        auto it = m.find(p);
        if (it == m.end()) {
          complete = false;
          break;
        }
        credit &= it->second;
      }
      if (!complete) {
        if (!opts.partial) throw AggregationError(p + " answered only part of " + q.id);
        continue;
      }
      groups.push_back({q.subtest, q.id + "/" + p, credit});
    }
  }
  return scoring::aggregate(groups, opts.partial);
}

Report make_report(const Manifest& manifest, const std::vector<std::pair<std::string, Transcript>>& transcripts,
                   bool partial, bool best_of) {
  Report r;
  std::vector<scoring::ScoreTable> models;
  for (const auto& [name, t] : transcripts) {
    if (t.header.value("kind", "model") == "human") {
      for (auto red : {Reduction::per_response, Reduction::majority})
        r.rows.emplace_back(fmt::format("{} ({})", name, to_string(red)), score_transcript(manifest, t, {partial, red}));
      continue;
    }
    r.rows.emplace_back(name, score_transcript(manifest, t, {partial, Reduction::per_response}));
    models.push_back(r.rows.back().second);
  }
  if (best_of && !models.empty()) r.rows.emplace_back("Best", scoring::best_of(models));
  r.results = {{"schema", 1}, {"manifest_digest", manifest_digest(manifest)}, {"partial", partial}, {"rows", json::array()}};
  for (const auto& [name, table] : r.rows) {
    json row = scoring::to_json(table);
    row["name"] = name;
    r.results["rows"].push_back(row);
  }
  r.text = scoring::format_table(r.rows);
  return r;
}

}  // namespace visfactor::harness
