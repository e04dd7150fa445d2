#include "visfactor/harness/corpus.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "visfactor/data.hpp"
#include "visfactor/error.hpp"

namespace visfactor::harness {

using nlohmann::json;

namespace {

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("bad JSON in " + path.string() + ": " + e.what());
  }
}

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Defaults overlaid with the plan's values; unknown keys are rejected so a
// typo cannot silently fall back to a default.
json effective_params(const Generator& g, const json& given) {
  json out = g.defaults;
  for (const auto& [k, v] : given.items()) {
    if (!out.contains(k)) throw ConfigError(fmt::format("{}: unknown parameter '{}'", g.subtest, k));
    out[k] = v;
  }
  return out;
}

std::string image_path(const std::string& subtest, const std::string& qid, const std::string& name) {
  return fmt::format("images/{}/{}-{}.png", subtest, qid, name);
}

// Lays a generated question out as a record with resolved image paths.
QuestionRecord record(const std::string& subtest, const std::string& preset, int index, std::uint64_t seed,
                      const json& params, Generated& g) {
  QuestionRecord q{question_id(subtest, index), subtest, preset, index, seed, params, std::move(g.data), {}};
  for (std::size_t k = 0; k < g.queries.size(); ++k) {
    QueryRecord qr = std::move(g.queries[k]);
    qr.id = fmt::format("{}-{}", q.id, k + 1);
    for (auto& img : qr.images) img = image_path(subtest, q.id, img);
    q.queries.push_back(std::move(qr));
  }
  return q;
}

bool same_query(const QueryRecord& a, const QueryRecord& b) { return to_json(a) == to_json(b); }

// Answer kinds that fit each format; external items are held to this too.
bool format_fits(const QueryRecord& q) {
  using scoring::AnswerKind;
  using scoring::FormatKind;
  switch (q.format.kind) {
    case FormatKind::yesno: return q.gold.kind == AnswerKind::yesno && (q.gold.value == "TRUE" || q.gold.value == "FALSE");
    case FormatKind::mcq: return q.gold.kind == AnswerKind::letter;
    case FormatKind::fill_blank: return q.gold.kind != AnswerKind::yesno && q.gold.kind != AnswerKind::letter;
    case FormatKind::composite: return false;
  }
  return false;
}

}  // namespace

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& f) {
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first;
  std::size_t first_index = n;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          f(i);
        } catch (...) {
          // Keep the lowest failing index so the reported error is stable.
          std::lock_guard lock(mu);
          if (i < first_index) {
            first_index = i;
            first = std::current_exception();
          }
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first) std::rethrow_exception(first);
}

// ---- records ----

json to_json(const QueryRecord& q) {
  return {{"id", q.id},
          {"template", q.template_id},
          {"slots", q.slots},
          {"images", q.images},
          {"format", scoring::to_json(q.format)},
          {"gold", scoring::to_json(q.gold)}};
}

QueryRecord query_from_json(const json& j) {
  QueryRecord q;
  q.id = j.at("id");
  q.template_id = j.at("template");
  q.slots = j.value("slots", Slots{});
  q.images = j.value("images", std::vector<std::string>{});
  q.format = scoring::format_from_json(j.at("format"));
  q.gold = scoring::gold_from_json(j.at("gold"));
  return q;
}

json to_json(const QuestionRecord& q) {
  json queries = json::array();
  for (const auto& qr : q.queries) queries.push_back(to_json(qr));
  return {{"id", q.id},     {"subtest", q.subtest}, {"preset", q.preset}, {"index", q.index},
          {"seed", q.seed}, {"params", q.params},   {"data", q.data},     {"queries", queries}};
}

QuestionRecord question_from_json(const json& j) {
  QuestionRecord q;
  q.id = j.at("id");
  q.subtest = j.at("subtest");
  q.preset = j.value("preset", "");
  q.index = j.value("index", 0);
  q.seed = j.value("seed", std::uint64_t{0});
  q.params = j.value("params", json::object());
  q.data = j.contains("data") ? j.at("data") : json();
  for (const auto& qj : j.at("queries")) q.queries.push_back(query_from_json(qj));
  return q;
}

std::size_t Manifest::query_count() const {
  std::size_t n = 0;
  for (const auto& q : questions) n += q.queries.size();
  return n;
}

std::vector<std::tuple<std::string, std::size_t, std::size_t>> Manifest::counts() const {
  std::map<std::string, std::pair<std::size_t, std::size_t>> by;
  for (const auto& q : questions) {
    auto& c = by[q.subtest];
    ++c.first;
    c.second += q.queries.size();
  }
  std::vector<std::tuple<std::string, std::size_t, std::size_t>> out;
  for (const auto& s : scoring::subtests()) {
    auto it = by.find(s.id);
    if (it != by.end()) out.emplace_back(s.id, it->second.first, it->second.second);
  }
  return out;
}

json Manifest::to_json() const {
  json qs = json::array();
  for (const auto& q : questions) qs.push_back(harness::to_json(q));
  return {{"schema", kSchema}, {"master_seed", master_seed}, {"preset", preset}, {"questions", qs}};
}

Manifest Manifest::from_json(const json& j) {
  const int schema = j.value("schema", 0);
  if (schema != kSchema) throw ConfigError(fmt::format("manifest schema {} is not supported (expected {})", schema, kSchema));
  Manifest m;
  m.master_seed = j.at("master_seed");
  m.preset = j.value("preset", "");
  for (const auto& q : j.at("questions")) m.questions.push_back(question_from_json(q));
  return m;
}

std::string Manifest::dump() const { return to_json().dump(2) + "\n"; }

void Manifest::write(const std::filesystem::path& path) const {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << dump();
}

Manifest Manifest::read(const std::filesystem::path& path) {
  try {
    return from_json(read_json(path));
  } catch (const json::exception& e) {
    throw ConfigError("bad manifest " + path.string() + ": " + e.what());
  }
}

// ---- plans ----

Plan Plan::from_json(const json& j, const std::filesystem::path& base) {
  Plan p;
  p.preset = j.value("preset", "custom");
  for (const auto& [sub, e] : j.at("subtests").items()) {
    try {
      scoring::subtest(sub);
    } catch (const InvalidArgument& e) {
      throw ConfigError(std::string("plan: ") + e.what());
    }
    PlanEntry entry{sub, e.value("count", 0), e.value("params", json::object()), {}};
    if (e.contains("items")) entry.items = base / e.at("items").get<std::string>();
    if (entry.count < 0) throw ConfigError(sub + ": negative question count");
    p.entries.push_back(std::move(entry));
  }
  // Report order, whatever order the file lists them in.
  std::vector<PlanEntry> ordered;
  for (const auto& s : scoring::subtests())
    for (auto& e : p.entries)
      if (e.subtest == s.id) ordered.push_back(std::move(e));
  p.entries = std::move(ordered);
  return p;
}

Plan Plan::from_preset(const std::string& name, const std::filesystem::path& presets) {
  const json all = read_json(presets.empty() ? data_path("presets.json") : presets);
  const auto& table = all.at("presets");
  if (!table.contains(name)) throw ConfigError("no difficulty preset '" + name + "'");
  Plan p = from_json({{"preset", name}, {"subtests", table.at(name)}});
  return p;
}

Plan Plan::load(const std::filesystem::path& path) { return from_json(read_json(path), path.parent_path()); }

json Plan::to_json() const {
  json subs = json::object();
  for (const auto& e : entries) {
    json j = {{"count", e.count}, {"params", e.params}};
    if (!e.items.empty()) j["items"] = e.items.string();
    subs[e.subtest] = j;
  }
  return {{"preset", preset}, {"subtests", subs}};
}

// ---- build ----

std::uint64_t question_seed(std::uint64_t master, const std::string& subtest, int index) {
  return SeededRng::derive(master, subtest, static_cast<std::uint64_t>(index));
}

std::string question_id(const std::string& subtest, int index) { return fmt::format("{}-{:04d}", subtest, index); }

namespace {

// External question records with their images copied under the corpus root.
std::vector<QuestionRecord> import_items(const PlanEntry& e, const std::string& preset, const std::filesystem::path& out_dir) {
  const json j = read_json(e.items);
  const json& list = j.is_array() ? j : j.at("questions");
  if (static_cast<int>(list.size()) < e.count)
    throw ConfigError(fmt::format("{}: {} requested but {} holds {}", e.subtest, e.count, e.items.string(), list.size()));
  const auto base = e.items.parent_path();
  std::vector<QuestionRecord> out;
  for (int i = 0; i < e.count; ++i) {
    QuestionRecord q = question_from_json(list[static_cast<std::size_t>(i)]);
    if (q.subtest != e.subtest) throw ConfigError(q.id + ": listed under " + e.subtest + " but belongs to " + q.subtest);
    const std::string source_id = q.id;
    q.id = question_id(e.subtest, i);
    q.preset = preset;
    q.index = i;
    q.seed = 0;
    q.data = json();
    for (std::size_t k = 0; k < q.queries.size(); ++k) {
      auto& qr = q.queries[k];
      qr.id = fmt::format("{}-{}", q.id, k + 1);
      for (auto& img : qr.images) {
        const auto src = base / img;
        if (!std::filesystem::exists(src)) throw ConfigError(source_id + ": missing image " + src.string());
        const std::string rel = fmt::format("images/{}/{}-{}", e.subtest, q.id, std::filesystem::path(img).filename().string());
        std::filesystem::create_directories((out_dir / rel).parent_path());
        std::filesystem::copy_file(src, out_dir / rel, std::filesystem::copy_options::overwrite_existing);
        img = rel;
      }
    }
    out.push_back(std::move(q));
  }
  return out;
}

}  // namespace

Manifest build_corpus(const Plan& plan, std::uint64_t master_seed, const std::filesystem::path& out_dir, unsigned threads) {
  Manifest m;
  m.master_seed = master_seed;
  m.preset = plan.preset;
  std::filesystem::create_directories(out_dir);

  struct Job {
    const Generator* gen;
    const PlanEntry* entry;
    json params;
    int index;
  };
  std::vector<Job> jobs;
  std::vector<std::pair<std::size_t, std::vector<QuestionRecord>>> external;  // position in jobs, records
  for (const auto& e : plan.entries) {
    if (!e.items.empty()) {
      external.emplace_back(jobs.size(), import_items(e, plan.preset, out_dir));
      continue;
    }
    if (e.count == 0) continue;
    const Generator* g = find_generator(e.subtest);
    if (!g) throw ConfigError(e.subtest + " has no generator; supply its items from a file");
    const json params = effective_params(*g, e.params);
    for (int i = 0; i < e.count; ++i) jobs.push_back({g, &e, params, i});
  }

  std::vector<QuestionRecord> built(jobs.size());
  parallel_for(jobs.size(), threads, [&](std::size_t k) {
    const Job& job = jobs[k];
    const std::string& sub = job.gen->subtest;
    const std::uint64_t seed = question_seed(master_seed, sub, job.index);
    SeededRng rng(seed);
    Generated g;
    try {
      g = job.gen->build(job.params, rng, {master_seed, job.index});
    } catch (const GenerationFailed& e) {
      throw GenerationFailed(fmt::format("{} question {}: {}", sub, job.index, e.what()), seed);
    } catch (const Error& e) {
      throw GenerationFailed(fmt::format("{} question {}: {}", sub, job.index, e.what()), seed);
    }
    QuestionRecord q = record(sub, plan.preset, job.index, seed, job.params, g);
    for (const auto& [name, img] : g.images) {
      const auto path = out_dir / image_path(sub, q.id, name);
      std::filesystem::create_directories(path.parent_path());
      write_png(img, path);
    }
    const auto problems = job.gen->check(q, out_dir);
    if (!problems.empty()) throw ItemDefinitionError(problems.front());
    built[k] = std::move(q);
  });

  // Merge generated and external questions back into plan order.
  std::size_t next_external = 0;
  for (std::size_t k = 0; k <= built.size(); ++k) {
    while (next_external < external.size() && external[next_external].first == k) {
      for (auto& q : external[next_external].second) m.questions.push_back(std::move(q));
      ++next_external;
    }
    if (k < built.size()) m.questions.push_back(std::move(built[k]));
  }
  m.write(out_dir / "manifest.json");
  return m;
}

// ---- validate ----

ValidationReport validate_corpus(const Manifest& manifest, const std::filesystem::path& root, unsigned threads) {
  ValidationReport report;
  report.questions = manifest.questions.size();
  report.queries = manifest.query_count();
  std::vector<std::vector<std::string>> found(manifest.questions.size());
  std::atomic<std::size_t> images{0};

  std::set<std::string> ids;
  for (const auto& q : manifest.questions) {
    if (!ids.insert(q.id).second) report.mismatches.push_back(q.id + ": duplicate question id");
    for (const auto& qr : q.queries)
      if (!ids.insert(qr.id).second) report.mismatches.push_back(qr.id + ": duplicate query id");
  }

  parallel_for(manifest.questions.size(), threads, [&](std::size_t k) {
    const QuestionRecord& q = manifest.questions[k];
    auto& out = found[k];
    try {
      if (q.queries.empty()) out.push_back(q.id + ": no queries");
      for (const auto& qr : q.queries) {
        if (!format_fits(qr)) out.push_back(qr.id + ": gold does not fit the answer format");
        if (!PromptBook::builtin().has(qr.template_id)) out.push_back(qr.id + ": unknown template " + qr.template_id);
        for (const auto& img : qr.images) {
          ++images;
          if (!std::filesystem::exists(root / img)) out.push_back(qr.id + ": missing image " + img);
        }
        if (out.empty()) PromptBook::builtin().assemble(qr.template_id, qr.slots, qr.images);
      }
      const Generator* g = find_generator(q.subtest);
      if (q.data.is_null() || !g) return;
      if (q.seed != question_seed(manifest.master_seed, q.subtest, q.index))
        out.push_back(q.id + ": seed is not derived from the master seed");
      for (auto& p : g->check(q, root)) out.push_back(std::move(p));

      SeededRng rng(q.seed);
      Generated again = g->build(q.params, rng, {manifest.master_seed, q.index});
      std::vector<std::pair<std::string, Image>> imgs = std::move(again.images);
      const QuestionRecord redo = record(q.subtest, q.preset, q.index, q.seed, q.params, again);
      if (redo.data != q.data) out.push_back(q.id + ": regenerated data differs");
      if (redo.queries.size() != q.queries.size()) {
        out.push_back(q.id + ": regenerated query count differs");
      } else {
        for (std::size_t i = 0; i < q.queries.size(); ++i)
          if (!same_query(redo.queries[i], q.queries[i])) out.push_back(q.queries[i].id + ": regenerated query differs");
      }
      for (const auto& [name, img] : imgs) {
        const auto path = root / image_path(q.subtest, q.id, name);
        if (read_bytes(path) != encode_png(img)) out.push_back(q.id + ": image " + name + " is not byte-identical");
      }
    } catch (const std::exception& e) {
      out.push_back(q.id + ": " + e.what());
    }
  });
  report.images = images;
  for (auto& f : found)
    for (auto& s : f) report.mismatches.push_back(std::move(s));
  return report;
}

}  // namespace visfactor::harness
