#include "visfactor/harness/study.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>

#include <fmt/format.h>
#include <httplib.h>

#include "visfactor/error.hpp"

namespace visfactor::harness {

using nlohmann::json;

// ---- assignments ----

std::vector<std::string> AssignmentPlan::queries_for(const std::string& participant, const Manifest& m) const {
  std::vector<std::string> out;
  for (const auto& q : m.questions)
    for (const auto& qr : q.queries) {
      auto it = slots.find(qr.id);
      if (it != slots.end() && std::find(it->second.begin(), it->second.end(), participant) != it->second.end())
        out.push_back(qr.id);
    }
  return out;
}

std::map<std::string, std::size_t> AssignmentPlan::loads() const {
  std::map<std::string, std::size_t> out;
  for (const auto& p : participants) out[p] = 0;
  for (const auto& [_, who] : slots)
    for (const auto& p : who) ++out[p];
  return out;
}

json AssignmentPlan::to_json() const { return {{"participants", participants}, {"slots", slots}}; }

AssignmentPlan AssignmentPlan::from_json(const json& j) {
  AssignmentPlan p;
  p.participants = j.at("participants").get<std::vector<std::string>>();
  p.slots = j.at("slots").get<std::map<std::string, std::vector<std::string>>>();
  return p;
}

AssignmentPlan plan_assignments(const Manifest& m, const std::vector<std::string>& participants, SeededRng& rng,
                                int per_query) {
  if (per_query < 1) throw InvalidArgument("each query needs at least one participant");
  if (participants.size() < static_cast<std::size_t>(per_query))
    throw ConfigError(fmt::format("a pool of {} cannot give every query {} participants", participants.size(), per_query));
  if (std::set<std::string>(participants.begin(), participants.end()).size() != participants.size())
    throw ConfigError("participant ids must be distinct");

  std::vector<std::size_t> rank(participants.size());
  for (std::size_t i = 0; i < rank.size(); ++i) rank[i] = i;
  rng.shuffle(rank);
  std::vector<std::size_t> load(participants.size(), 0);

  std::vector<const QuestionRecord*> order;
  for (const auto& q : m.questions) order.push_back(&q);
  std::stable_sort(order.begin(), order.end(), [](auto a, auto b) { return a->queries.size() > b->queries.size(); });

  AssignmentPlan plan;
  plan.participants = participants;
  std::vector<std::size_t> idx(participants.size());
  for (const QuestionRecord* q : order) {
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::partial_sort(idx.begin(), idx.begin() + per_query, idx.end(), [&](std::size_t a, std::size_t b) {
      return load[a] != load[b] ? load[a] < load[b] : rank[a] < rank[b];
    });
    std::vector<std::string> who;
    for (int k = 0; k < per_query; ++k) {
      const std::size_t p = idx[static_cast<std::size_t>(k)];
      load[p] += q->queries.size();
      who.push_back(participants[p]);
    }
    for (const auto& qr : q->queries) plan.slots[qr.id] = who;
  }
  return plan;
}

std::vector<std::string> participant_tokens(std::size_t n, SeededRng& rng) {
  std::set<std::string> seen;
  std::vector<std::string> out;
  while (out.size() < n) {
    std::string t = fmt::format("p{:012x}", rng.next_u64() & 0xffffffffffffULL);
    if (seen.insert(t).second) out.push_back(std::move(t));
  }
  return out;
}

// ---- study ----

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json study_header(const Manifest& m) { return transcript_header(m, "human", {{"name", "human study"}}); }

}  // namespace

std::string to_string(SubmitStatus s) {
  switch (s) {
    case SubmitStatus::stored: return "stored";
    case SubmitStatus::already_answered: return "already-answered";
    case SubmitStatus::unassigned: return "unassigned";
    case SubmitStatus::unknown: return "unknown";
  }
  return "unknown";
}

Study::Study(Manifest manifest, std::filesystem::path root, AssignmentPlan plan, std::filesystem::path log_path, Clock clock)
    : manifest_(std::move(manifest)),
      root_(std::move(root)),
      plan_(std::move(plan)),
      log_path_(std::move(log_path)),
      clock_(clock ? std::move(clock) : Clock(utc_now)) {
  for (const auto& q : manifest_.questions)
    for (const auto& qr : q.queries) queries_.emplace(qr.id, std::make_pair(&q, &qr));
  for (const auto& [qid, who] : plan_.slots) {
    if (!queries_.count(qid)) throw ConfigError("assignment plan names unknown query " + qid);
    for (const auto& p : who)
      if (!knows(p)) throw ConfigError("assignment plan names unknown participant " + p);
  }

  if (std::filesystem::exists(log_path_) && std::filesystem::file_size(log_path_) > 0) {
    Transcript old = Transcript::read(log_path_);
    if (old.header != study_header(manifest_)) throw ConfigError(log_path_.string() + " belongs to another manifest");
    for (auto& r : old.rows) {
      if (!assigned(r.participant, r.query)) throw ConfigError("logged answer to " + r.query + " was never assigned");
      answers_[{r.participant, r.query}] = std::move(r);
    }
  } else {
    if (log_path_.has_parent_path()) std::filesystem::create_directories(log_path_.parent_path());
    Transcript empty;
    empty.header = study_header(manifest_);
    std::ofstream out(log_path_, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + log_path_.string());
    out << empty.dump();
  }
}

bool Study::knows(const std::string& participant) const {
  return std::find(plan_.participants.begin(), plan_.participants.end(), participant) != plan_.participants.end();
}

bool Study::assigned(const std::string& participant, const std::string& query) const {
  auto it = plan_.slots.find(query);
  return it != plan_.slots.end() && std::find(it->second.begin(), it->second.end(), participant) != it->second.end();
}

json Study::assignment(const std::string& participant) const {
  std::lock_guard lock(mu_);
  const auto queries = plan_.queries_for(participant, manifest_);
  json answered = json::array();
  for (const auto& q : queries)
    if (answers_.count({participant, q})) answered.push_back(q);
  return {{"participant", participant},
          {"queries", queries},
          {"answered", answered},
          {"complete", answered.size() == queries.size()}};
}

json Study::item(const std::string& query) const {
  auto it = queries_.find(query);
  if (it == queries_.end()) throw ConfigError("unknown query " + query);
  const auto& [q, qr] = it->second;
  const Message msg = PromptBook::builtin().assemble(qr->template_id, qr->slots, qr->images);
  json parts = json::array();
  for (const auto& p : msg.parts) {
    if (p.is_image)
      parts.push_back({{"type", "image"}, {"url", "/" + p.text}});
    else
      parts.push_back({{"type", "text"}, {"text", p.text}});
  }
  return {{"query", qr->id},
          {"subtest", q->subtest},
          {"group", q->id},
          {"text", msg.text()},
          {"parts", parts},
          {"format", scoring::to_json(qr->format)},
          {"answer_kind", scoring::to_string(qr->gold.kind)}};
}

SubmitStatus Study::submit(const std::string& participant, const std::string& query, const std::string& answer) {
  auto it = queries_.find(query);
  if (it == queries_.end() || !knows(participant)) return SubmitStatus::unknown;
  if (!assigned(participant, query)) return SubmitStatus::unassigned;
  const auto& [q, qr] = it->second;
  std::lock_guard lock(mu_);
  if (answers_.count({participant, query})) return SubmitStatus::already_answered;
  TranscriptRow row;
  row.query = query;
  row.subtest = q->subtest;
  row.group = q->id;
  row.participant = participant;
  row.prompt = PromptBook::builtin().assemble(qr->template_id, qr->slots, qr->images).text();
  row.raw = answer;
  row.answer = scoring::normalize_answer(answer, qr->gold.kind);
  row.status = "ok";
  row.attempts = 1;
  row.timestamp = clock_();
  std::ofstream out(log_path_, std::ios::binary | std::ios::app);
  if (!out) throw ConfigError("cannot append to " + log_path_.string());
  out << row.to_json().dump() << "\n";
  out.flush();
  answers_[{participant, query}] = std::move(row);
  return SubmitStatus::stored;
}

bool Study::complete() const {
  std::lock_guard lock(mu_);
  std::size_t slots = 0;
  for (const auto& [_, who] : plan_.slots) slots += who.size();
  return answers_.size() == slots;
}

Transcript Study::export_log(bool partial) const {
  if (!partial && !complete()) throw ConfigError("the study is not complete; export with the partial flag");
  std::lock_guard lock(mu_);
  Transcript t;
  t.header = study_header(manifest_);
  for (const auto& q : manifest_.questions)
    for (const auto& qr : q.queries) {
      auto slot = plan_.slots.find(qr.id);
      if (slot == plan_.slots.end()) continue;
      for (const auto& p : slot->second) {
        auto a = answers_.find({p, qr.id});
        if (a != answers_.end()) t.rows.push_back(a->second);
      }
    }
  return t;
}

// ---- HTTP ----

struct StudyServer::Impl {
  Study& study;
  httplib::Server srv;
  explicit Impl(Study& s) : study(s) {}
};

namespace {

void reply_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void reply_error(httplib::Response& res, int status, const std::string& code, const std::string& message) {
  reply_json(res, status, {{"error", code}, {"message", message}});
}

}  // namespace

StudyServer::StudyServer(Study& study, const std::filesystem::path& static_dir) : impl_(std::make_unique<Impl>(study)) {
  auto& srv = impl_->srv;
  Study* s = &study;

  srv.Get(R"(/api/assignment/([^/]+))", [s](const httplib::Request& req, httplib::Response& res) {
    const std::string p = req.matches[1];
    if (!s->knows(p)) return reply_error(res, 404, "unknown-participant", "no participant " + p);
    reply_json(res, 200, s->assignment(p));
  });

  srv.Get(R"(/api/item/([^/]+))", [s](const httplib::Request& req, httplib::Response& res) {
    const std::string q = req.matches[1];
    const std::string p = req.get_param_value("participant");
    if (!s->knows(p)) return reply_error(res, 404, "unknown-participant", "no participant " + p);
    if (!s->has_query(q)) return reply_error(res, 404, "unknown-query", "no query " + q);
    if (!s->assigned(p, q)) return reply_error(res, 403, "unassigned", q + " is not assigned to " + p);
    reply_json(res, 200, s->item(q));
  });

  srv.Post("/api/answer", [s](const httplib::Request& req, httplib::Response& res) {
    json body;
    try {
      body = json::parse(req.body);
    } catch (const json::exception&) {
      return reply_error(res, 400, "bad-request", "body is not JSON");
    }
    if (!body.is_object() || !body.contains("participant") || !body.contains("query") || !body.contains("answer") ||
        !body.at("answer").is_string())
      return reply_error(res, 400, "bad-request", "need participant, query and a string answer");
    const std::string p = body.at("participant"), q = body.at("query");
    switch (s->submit(p, q, body.at("answer"))) {
      case SubmitStatus::stored: return reply_json(res, 200, {{"status", "stored"}, {"query", q}});
      case SubmitStatus::already_answered:
        return reply_error(res, 409, "already-answered", q + " was already answered; the first answer stands");
      case SubmitStatus::unassigned: return reply_error(res, 403, "unassigned", q + " is not assigned to " + p);
      case SubmitStatus::unknown: return reply_error(res, 404, "unknown", "unknown participant or query");
    }
  });

  srv.Get("/api/log", [s](const httplib::Request& req, httplib::Response& res) {
    const bool partial = req.has_param("partial") && req.get_param_value("partial") != "0";
    if (!partial && !s->complete()) return reply_error(res, 409, "incomplete", "study incomplete; add ?partial=1");
    res.set_content(s->export_log(partial).dump(), "application/x-ndjson");
  });

  srv.set_mount_point("/images", (study.root() / "images").string());
  if (!static_dir.empty()) srv.set_mount_point("/", static_dir.string());
  srv.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      reply_error(res, 500, "internal", e.what());
    }
  });
}

StudyServer::~StudyServer() { stop(); }

int StudyServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int p = impl_->srv.bind_to_any_port(host);
    if (p < 0) throw ConfigError("cannot bind " + host);
    return p;
  }
  if (!impl_->srv.bind_to_port(host, port)) throw ConfigError(fmt::format("cannot bind {}:{}", host, port));
  return port;
}

void StudyServer::listen() { impl_->srv.listen_after_bind(); }

void StudyServer::stop() {
  if (impl_) impl_->srv.stop();
}

}  // namespace visfactor::harness
