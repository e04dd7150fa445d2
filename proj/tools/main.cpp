#include <csignal>
#include <fstream>
#include <iostream>
#include <random>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "visfactor/error.hpp"
#include "visfactor/harness/corpus.hpp"
#include "visfactor/harness/endpoint.hpp"
#include "visfactor/harness/runner.hpp"
#include "visfactor/harness/study.hpp"
#include "visfactor/scoring.hpp"

namespace fs = std::filesystem;
using namespace visfactor;
using namespace visfactor::harness;
using nlohmann::json;

namespace {

StudyServer* g_server = nullptr;

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

Manifest load_corpus(const fs::path& dir) { return Manifest::read(dir / "manifest.json"); }

int cmd_gen(const std::string& preset, const fs::path& plan_file, const fs::path& presets, std::uint64_t seed,
            const fs::path& out, const std::vector<std::string>& counts, const std::vector<std::string>& only,
            unsigned threads) {
  Plan plan = plan_file.empty() ? Plan::from_preset(preset, presets) : Plan::load(plan_file);
  for (const auto& c : counts) {
    const auto eq = c.find('=');
    if (eq == std::string::npos) throw ConfigError("--count takes SUBTEST=N, got " + c);
    const std::string sub = c.substr(0, eq);
    bool found = false;
    for (auto& e : plan.entries)
      if (e.subtest == sub) {
        e.count = std::stoi(c.substr(eq + 1));
        found = true;
      }
    if (!found) throw ConfigError("the plan has no entry for " + sub);
  }
  if (!only.empty())
    std::erase_if(plan.entries, [&](const PlanEntry& e) { return std::find(only.begin(), only.end(), e.subtest) == only.end(); });
  const Manifest m = build_corpus(plan, seed, out, threads);
  fmt::print("{:<6} {:>9} {:>8}\n", "Test", "Questions", "Queries");
  for (const auto& [sub, questions, queries] : m.counts()) fmt::print("{:<6} {:>9} {:>8}\n", sub, questions, queries);
  fmt::print("{:<6} {:>9} {:>8}\n", "All", m.questions.size(), m.query_count());
  fmt::print("manifest: {}\n", (out / "manifest.json").string());
  return 0;
}

int cmd_validate(const fs::path& dir, unsigned threads) {
  const Manifest m = load_corpus(dir);
  const auto r = validate_corpus(m, dir, threads);
  for (const auto& s : r.mismatches) fmt::print("MISMATCH {}\n", s);
  fmt::print("{} questions, {} queries, {} images checked; {} mismatches\n", r.questions, r.queries, r.images,
             r.mismatches.size());
  return r.ok() ? 0 : 1;
}

int cmd_chance(bool as_json) {
  if (as_json) {
    json j = {{"subtests", json::object()}, {"mean", scoring::mean_chance() * 100}};
    for (const auto& s : scoring::subtests()) j["subtests"][s.id] = scoring::chance(s.group) * 100;
    fmt::print("{}\n", j.dump(2));
    return 0;
  }
  fmt::print("{:<6} {:<32} {:>8}\n", "Test", "Name", "Chance%");
  for (const auto& s : scoring::subtests())
    fmt::print("{:<6} {:<32} {:>8.3f}\n", s.id, s.name, scoring::chance(s.group) * 100);
  fmt::print("{:<6} {:<32} {:>8.3f}\n", "All", "unweighted mean", scoring::mean_chance() * 100);
  return 0;
}

int cmd_run(const fs::path& dir, const fs::path& endpoint_file, const std::string& name, const fs::path& replay,
            const fs::path& out, int concurrency, std::size_t limit) {
  const Manifest m = load_corpus(dir);
  EndpointConfig cfg;
  std::unique_ptr<Endpoint> endpoint;
  if (!replay.empty()) {
    cfg.name = name.empty() ? "replay" : name;
    cfg.transport = "replay";
    cfg.replay = replay;
  } else if (!endpoint_file.empty()) {
    cfg = EndpointConfig::load(endpoint_file, name);
  } else {
    throw ConfigError("run needs --endpoint or --replay");
  }
  if (cfg.transport == "replay") {
    auto r = std::make_unique<ReplayEndpoint>(ReplayEndpoint::load(cfg.replay));
    check_replay_covers(*r, m);
    endpoint = std::move(r);
  } else {
    endpoint = make_endpoint(cfg);
  }
  const Transcript t = run_suite(m, dir, *endpoint, cfg, out, {concurrency, limit});
  std::size_t failed = 0;
  for (const auto& r : t.rows) failed += r.status != "ok";
  fmt::print("{} of {} queries answered, {} failed; transcript: {}\n", t.rows.size(), m.query_count(), failed, out.string());
  return 0;
}

std::pair<std::string, Transcript> named_transcript(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq != std::string::npos) return {spec.substr(0, eq), Transcript::read(spec.substr(eq + 1))};
  Transcript t = Transcript::read(spec);
  std::string name = t.header.contains("respondent") ? t.header["respondent"].value("name", "") : "";
  if (name.empty()) name = fs::path(spec).stem().string();
  return {name, std::move(t)};
}

int cmd_score(const fs::path& dir, const std::string& transcript, bool partial, const std::string& reduction,
              const fs::path& out) {
  const Manifest m = load_corpus(dir);
  auto [name, t] = named_transcript(transcript);
  const auto table = score_transcript(m, t, {partial, reduction_from_string(reduction)});
  fmt::print("{}", scoring::format_table({{name, table}}));
  json j = scoring::to_json(table);
  j["name"] = name;
  j["reduction"] = reduction;
  if (!out.empty()) write_text(out, j.dump(2) + "\n");
  return 0;
}

int cmd_report(const fs::path& dir, const std::vector<std::string>& transcripts, bool partial, bool best,
               const fs::path& out) {
  const Manifest m = load_corpus(dir);
  std::vector<std::pair<std::string, Transcript>> named;
  for (const auto& spec : transcripts) named.push_back(named_transcript(spec));
  const Report r = make_report(m, named, partial, best);
  fmt::print("{}", r.text);
  if (!out.empty()) write_text(out, r.results.dump(2) + "\n");
  return 0;
}

int cmd_serve(const fs::path& dir, const std::string& host, int port, std::size_t participants, fs::path plan_file,
              fs::path log, const fs::path& static_dir, std::uint64_t seed) {
  Manifest m = load_corpus(dir);
  if (plan_file.empty()) plan_file = dir / "study" / "plan.json";
  if (log.empty()) log = dir / "study" / "log.jsonl";
  AssignmentPlan plan;
  if (fs::exists(plan_file)) {
    std::ifstream in(plan_file);
    plan = AssignmentPlan::from_json(json::parse(in));
  } else {
    if (participants == 0) throw ConfigError("no plan at " + plan_file.string() + "; pass --participants to create one");
    // Tokens are random so they reveal nothing; the seed only orders the slots.
    SeededRng token_rng((static_cast<std::uint64_t>(std::random_device{}()) << 32) ^ std::random_device{}());
    SeededRng rng(seed);
    plan = plan_assignments(m, participant_tokens(participants, token_rng), rng);
    write_text(plan_file, plan.to_json().dump(2) + "\n");
  }
  Study study(std::move(m), dir, plan, log);
  StudyServer server(study, static_dir);
  const int bound = server.bind(host, port);
  fmt::print("serving {} on http://{}:{} ({} participants, log {})\n", dir.string(), host, bound, plan.participants.size(),
             log.string());
  for (const auto& p : plan.participants) fmt::print("  participant {}\n", p);
  std::fflush(stdout);
  g_server = &server;
  std::signal(SIGINT, [](int) {
    if (g_server) g_server->stop();
  });
  server.listen();
  g_server = nullptr;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"VisFactor benchmark generator and evaluator"};
  app.require_subcommand(1);

  std::string preset = "normal", name, reduction = "per-response", host = "127.0.0.1";
  fs::path plan_file, presets, out, corpus = "corpus", endpoint_file, replay, transcript_out = "transcript.jsonl";
  fs::path results, log, static_dir;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::vector<std::string> counts, only, transcripts;
  bool as_json = false, partial = false, best = false;
  int concurrency = 0, port = 8080;
  std::size_t limit = 0, participants = 0;

  auto* gen = app.add_subcommand("gen", "Generate a corpus from a difficulty preset or plan file");
  gen->add_option("--preset", preset, "easy, normal or hard")->capture_default_str();
  gen->add_option("--plan", plan_file, "Plan file overriding --preset");
  gen->add_option("--presets", presets, "Presets file (default: bundled)");
  gen->add_option("--seed", seed, "Master seed")->capture_default_str();
  gen->add_option("--out", corpus, "Output directory")->capture_default_str();
  gen->add_option("--count", counts, "Override a count, SUBTEST=N (repeatable)");
  gen->add_option("--only", only, "Keep only these subtests");
  gen->add_option("--threads", threads, "Worker threads (0 = all cores)");

  auto* validate = app.add_subcommand("validate", "Re-check every gold answer and regenerate every item");
  validate->add_option("--corpus", corpus, "Corpus directory")->capture_default_str();
  validate->add_option("--threads", threads, "Worker threads (0 = all cores)");

  auto* chance = app.add_subcommand("chance", "Print the chance-accuracy table");
  chance->add_flag("--json", as_json, "Machine-readable output");

  auto* run = app.add_subcommand("run", "Send every query to an endpoint or replay file");
  run->add_option("--corpus", corpus, "Corpus directory")->capture_default_str();
  run->add_option("--endpoint", endpoint_file, "Endpoint config file");
  run->add_option("--name", name, "Endpoint name within the config file");
  run->add_option("--replay", replay, "Canned responses file");
  run->add_option("--out", transcript_out, "Transcript file (resumed when present)")->capture_default_str();
  run->add_option("--concurrency", concurrency, "In-flight request cap override");
  run->add_option("--limit", limit, "Stop after this many new queries");

  auto* score = app.add_subcommand("score", "Score one transcript or answer log");
  score->add_option("--corpus", corpus, "Corpus directory")->capture_default_str();
  score->add_option("--transcript", name, "Transcript file, optionally NAME=PATH")->required();
  score->add_flag("--partial", partial, "Allow missing queries and subtests");
  score->add_option("--reduction", reduction, "per-response or majority")->capture_default_str();
  score->add_option("--out", results, "Write the scores as JSON");

  auto* report = app.add_subcommand("report", "Score several transcripts into one table");
  report->add_option("--corpus", corpus, "Corpus directory")->capture_default_str();
  report->add_option("--transcript", transcripts, "Transcript file, optionally NAME=PATH (repeatable)")->required();
  report->add_flag("--partial", partial, "Allow missing queries and subtests");
  report->add_flag("--best-of", best, "Add a row of per-subtest maxima");
  report->add_option("--out", results, "Write the results file");

  auto* serve = app.add_subcommand("serve", "Serve a human study over HTTP");
  serve->add_option("--corpus", corpus, "Corpus directory")->capture_default_str();
  serve->add_option("--host", host)->capture_default_str();
  serve->add_option("--port", port)->capture_default_str();
  serve->add_option("--participants", participants, "Pool size when creating a new plan");
  serve->add_option("--plan", plan_file, "Assignment plan (default: <corpus>/study/plan.json)");
  serve->add_option("--log", log, "Answer log (default: <corpus>/study/log.jsonl)");
  serve->add_option("--static", static_dir, "Directory of UI files served at /");
  serve->add_option("--seed", seed, "Seed for slot ordering")->capture_default_str();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*gen) return cmd_gen(preset, plan_file, presets, seed, corpus, counts, only, threads);
    if (*validate) return cmd_validate(corpus, threads);
    if (*chance) return cmd_chance(as_json);
    if (*run) return cmd_run(corpus, endpoint_file, name, replay, transcript_out, concurrency, limit);
    if (*score) return cmd_score(corpus, name, partial, reduction, results);
    if (*report) return cmd_report(corpus, transcripts, partial, best, results);
    if (*serve) return cmd_serve(corpus, host, port, participants, plan_file, log, static_dir, seed);
  } catch (const GenerationFailed& e) {
    fmt::print(stderr, "generation failed: {}\n", e.what());
    return 3;
  } catch (const Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 2;
  }
  return 0;
}
