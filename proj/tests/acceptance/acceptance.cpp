// Acceptance checks: one PASS or FAIL line per criterion with its runtime.
// Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "../oracles.hpp"
#include "../scratch.hpp"
#include "visfactor/harness/corpus.hpp"
#include "visfactor/harness/runner.hpp"
#include "visfactor/scoring.hpp"

using namespace visfactor;
using nlohmann::json;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
  std::vector<std::string> problems;

  void expect(bool cond, const std::string& what) {
    if (cond) return;
    ok = false;
    if (problems.size() < 5) problems.push_back(what);
  }
};

struct Criterion {
  std::string name;
  double limit_s;
  std::function<Outcome()> run;
};

// ---- chance table ----

Outcome chance_table() {
  // Reference guess accuracies, percent, two decimals.
  const std::map<std::string, double> reference{
      {"CF1", 3.13}, {"CF2", 3.13}, {"CF3", 4.00}, {"CS1", 0.00}, {"CS2", 0.00}, {"CS3", 0.00}, {"P3", 3.13},
      {"I3", 0.23},  {"RL2", 3.13}, {"MA1", 4.76}, {"MV1", 6.25}, {"MV2", 3.13}, {"MV3", 6.25}, {"S1", 0.39},
      {"S2", 6.25},  {"SS2", 3.13}, {"SS3", 1.00}, {"VZ1", 3.13}, {"VZ2", 3.13}, {"VZ3", 3.65}};
  Outcome out;
  out.expect(scoring::subtests().size() == reference.size(), "subtest count");
  double worst = 0;
  for (const auto& s : scoring::subtests()) {
    const double got = 100 * scoring::chance(s.group);
    const double want = reference.at(s.id);
    // Two-decimal rounding of the exact value can sit 0.005 away.
    const double tol = s.group.fixed ? 1e-9 : 0.005 + 1e-9;
    worst = std::max(worst, std::abs(got - want));
    out.expect(std::abs(got - want) <= tol, fmt::format("{} {:.4f} vs {:.2f}", s.id, got, want));
  }
  const double mean = 100 * scoring::mean_chance();
  out.expect(std::abs(mean - 2.89) <= 0.01, fmt::format("mean {:.4f}", mean));
  out.detail = fmt::format("20 subtests, max |diff| {:.4f} pp, mean {:.3f}%", worst, mean);
  return out;
}

// ---- random responder ----

// One random answer and gold pair for a query format; returns credit.
bool random_query(const scoring::QuestionFormat& f, SeededRng& rng) {
  using scoring::AnswerKind;
  using scoring::FormatKind;
  switch (f.kind) {
    case FormatKind::yesno: {
      const auto gold = scoring::Gold::truth(rng.bernoulli(0.5));
      return scoring::is_correct(scoring::normalize_answer(rng.bernoulli(0.5) ? "yes" : "no", AnswerKind::yesno), gold);
    }
    case FormatKind::mcq: {
      const auto letter = [&] { return std::string(1, static_cast<char>('A' + rng.below(static_cast<std::uint64_t>(f.options)))); };
      const scoring::Gold gold{AnswerKind::letter, letter(), {}};
      return scoring::is_correct(scoring::normalize_answer(letter(), AnswerKind::letter), gold);
    }
    case FormatKind::fill_blank: {
      if (f.space == 0) {
        // Open answers: a guess drawn blind from a huge vocabulary never lands.
        const scoring::Gold gold{AnswerKind::word, fmt::format("w{}", rng.below(1000)), {}};
        return scoring::is_correct(scoring::normalize_answer(fmt::format("guess{}", rng.below(1000)), AnswerKind::word), gold);
      }
      const auto pick = [&] { return std::to_string(1 + rng.below(static_cast<std::uint64_t>(f.space))); };
      const scoring::Gold gold{AnswerKind::number, pick(), {}};
      return scoring::is_correct(scoring::normalize_answer(pick(), AnswerKind::number), gold);
    }
    case FormatKind::composite: {
      bool all = true;
      for (const auto& p : f.parts) all = random_query(p, rng) && all;
      return all;
    }
  }
  return false;
}

Outcome random_responder() {
  Outcome out;
  const int n = 100000;
  int formats = 0;
  double worst_z = 0;
  for (const auto& s : scoring::subtests()) {
    if (s.group.fixed) continue;  // chance supplied from outside, nothing to simulate
    ++formats;
    SeededRng rng(SeededRng::derive(20240, s.id, 0));
    int credited = 0;
    for (int g = 0; g < n; ++g) credited += random_query(s.group, rng);
    const double p = scoring::chance(s.group), rate = credited / static_cast<double>(n);
    const double sigma = std::sqrt(p * (1 - p) / n);
    const double z = sigma > 0 ? std::abs(rate - p) / sigma : (rate == p ? 0 : INFINITY);
    worst_z = std::max(worst_z, z);
    out.expect(z <= 3, fmt::format("{} rate {:.5f} vs {:.5f}", s.id, rate, p));
  }
  out.detail = fmt::format("{} formats x {} groups, max |z| {:.2f}", formats, n, worst_z);
  return out;
}

// ---- oracle equivalence ----

Outcome oracle_equivalence() {
  Outcome out;
  int cube = 0, paths = 0, contain = 0;
  {
    SeededRng rng(2024);
    for (int i = 0; i < 500; ++i) {
      spatial::CubeView a, b;
      if (i % 3 == 0) {
        const auto item = spatial::gen_s2_item(rng.bernoulli(0.5), rng);
        a = item.first;
        b = item.second;
      } else {
        a = oracle::random_view(rng, 4);
        b = oracle::random_view(rng, 4);
      }
      const bool agree = spatial::cube_same(a, b) == oracle::cube_same(a, b);
      cube += agree;
      out.expect(agree, fmt::format("cube pair {}", i));
    }
  }
  for (int s = 0; s < 300; ++s) {
    SeededRng rng(static_cast<std::uint64_t>(s) + 900);
    const int rows = 2 + static_cast<int>(rng.below(4)), cols = 2 + static_cast<int>(rng.below(4));
    const auto g = oracle::random_map(rng, rows, cols).graph();
    const int a = static_cast<int>(rng.below(static_cast<std::uint64_t>(rows * cols)));
    const int b = static_cast<int>(rng.below(static_cast<std::uint64_t>(rows * cols)));
    const auto pc = mapplan::count_shortest_paths(g, a, b);
    const auto [dist, all] = oracle::dfs_shortest(g, a, b);
    bool agree = all.empty() ? !pc : pc && pc->distance == dist && pc->count == mapplan::BigInt(all.size());
    if (agree && all.size() == 1) agree = pc->geodesic == all[0];
    paths += agree;
    out.expect(agree, fmt::format("graph seed {}", s));
  }
  {
    SeededRng rng(11);
    for (int i = 0; i < 200; ++i) {
      const auto p = closure::gen_cf2(4, 4, 0.45, 0.1, rng);
      const auto m = rng.bernoulli(0.5) ? closure::extract_model(p, 1, 4, rng) : oracle::random_model(rng, 3);
      const bool agree = closure::contains_model(m, p) == oracle::contains(m, p);
      contain += agree;
      out.expect(agree, fmt::format("containment pair {}", i));
    }
  }
  out.detail = fmt::format("cube {}/500, paths {}/300, containment {}/200", cube, paths, contain);
  return out;
}

// ---- paper folding ----

Outcome vz2_refold() {
  Outcome out;
  std::size_t holes_total = 0;
  for (int s = 0; s < 200; ++s) {
    SeededRng rng(static_cast<std::uint64_t>(s) + 7000);
    const int folds = 1 + s % 5;
    folding::FoldState state = folding::FoldState::flat();
    for (int k = 0; k < folds; ++k) state = folding::fold(state, folding::random_axis(state, rng));
    const auto sites = folding::punch_sites(state);
    if (sites.empty()) {
      out.expect(false, fmt::format("seed {}: no punch sites", s));
      continue;
    }
    const std::size_t want = 1 + static_cast<std::size_t>(s / 5 % 3);
    std::vector<RPoint> punches;
    for (auto i : rng.sample_indices(sites.size(), std::min(sites.size(), want))) punches.push_back(sites[i]);

    const auto holes = folding::punch_and_unfold(state, punches);
    out.expect(holes == oracle::holes(state, punches), fmt::format("seed {}: hole set", s));

    std::vector<RPoint> landed, expected;
    std::size_t layers = 0;
    for (const auto& h : holes) landed.push_back(folding::refold(state, h));
    for (const auto& p : punches) {
      const int n = oracle::layer_count(state, p);
      layers += static_cast<std::size_t>(n);
      expected.insert(expected.end(), static_cast<std::size_t>(n), p);
    }
    std::sort(landed.begin(), landed.end());
    std::sort(expected.begin(), expected.end());
    out.expect(landed == expected, fmt::format("seed {}: refold", s));
    out.expect(holes.size() == layers, fmt::format("seed {}: {} holes, {} layers", s, holes.size(), layers));
    holes_total += holes.size();
  }
  out.detail = fmt::format("200 seeds, {} holes", holes_total);
  return out;
}

// ---- form board ----

Outcome vz1_validity() {
  Outcome out;
  for (int s = 0; s < 200; ++s) {
    SeededRng rng(static_cast<std::uint64_t>(s) + 3000);
    formboard::Vz1Params p;
    p.grid = 4 + s % 3;
    const auto item = formboard::gen_vz1(p, rng);
    std::vector<RPolygon> all, chosen;
    unsigned mask = 0;
    for (const auto& pc : item.pieces) all.push_back(pc.shape);
    for (int i : item.solution) {
      chosen.push_back(item.pieces[static_cast<std::size_t>(i)].shape);
      mask |= 1u << i;
    }
    const auto tiling = formboard::verify_tiling(chosen, item.target);
    out.expect(tiling.has_value(), fmt::format("seed {}: no tiling", s));
    if (tiling) {
      std::vector<RPolygon> placed;
      for (const auto& pl : *tiling) placed.push_back(pl.placed);
      out.expect(oracle::cover_defects(placed, item.target, item.grid) == 0, fmt::format("seed {}: tiling leaves gaps", s));
    }
    std::set<Rational> areas;
    for (const auto& a : all) areas.insert(oracle::area(a));
    out.expect(areas.size() == all.size(), fmt::format("seed {}: repeated piece area", s));
    out.expect(oracle::area_subsets(all, item.target) == std::vector<unsigned>{mask}, fmt::format("seed {}: other subsets match", s));
  }
  out.detail = "200 seeds, grids 4 to 6";
  return out;
}

// ---- corpus reproduction ----

std::map<std::string, std::string> tree(const std::filesystem::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : std::filesystem::recursive_directory_iterator(root))
    if (e.is_regular_file()) out[std::filesystem::relative(e.path(), root).string()] = slurp(e.path());
  return out;
}

Outcome corpus_reproduction() {
  using namespace visfactor::harness;
  Outcome out;
  const std::map<std::string, std::pair<std::size_t, std::size_t>> reference{
      {"CF1", {32, 160}}, {"CF2", {80, 400}}, {"CF3", {64, 64}},  {"CS1", {20, 20}},   {"CS2", {50, 50}},  {"CS3", {24, 24}},
      {"MA1", {42, 42}},  {"S1", {20, 160}},  {"S2", {42, 168}},  {"SS3", {40, 80}},   {"VZ1", {48, 240}}, {"VZ2", {20, 100}}};
  Scratch a("accept-a"), b("accept-b");
  const Plan plan = Plan::from_preset("normal");
  const Manifest m = build_corpus(plan, 20240, a.path());
  std::map<std::string, std::pair<std::size_t, std::size_t>> got;
  for (const auto& [sub, qs, qr] : m.counts()) got[sub] = {qs, qr};
  for (const auto& [sub, want] : reference)
    out.expect(got.count(sub) && got.at(sub) == want,
               fmt::format("{}: {}/{}", sub, got.count(sub) ? got.at(sub).first : 0, got.count(sub) ? got.at(sub).second : 0));
  out.expect(got.size() == reference.size(), "unexpected subtests in the Normal plan");

  const auto report = validate_corpus(Manifest::read(a / "manifest.json"), a.path());
  out.expect(report.ok(), fmt::format("{} validation mismatches, first: {}", report.mismatches.size(),
                                      report.mismatches.empty() ? "" : report.mismatches.front()));
  build_corpus(plan, 20240, b.path());
  const auto ta = tree(a.path()), tb = tree(b.path());
  std::size_t differ = ta.size() == tb.size() ? 0 : 1;
  for (const auto& [path, bytes] : ta) differ += !tb.count(path) || tb.at(path) != bytes;
  out.expect(differ == 0, fmt::format("{} files differ on regeneration", differ));
  out.detail = fmt::format("{} questions, {} queries, {} images checked, {} files identical", m.questions.size(),
                           m.query_count(), report.images, ta.size());
  return out;
}

// ---- scoring fixtures ----

Outcome scoring_fixtures() {
  using namespace visfactor::harness;
  Outcome out;
  const auto dir = std::filesystem::path(VISFACTOR_TEST_DIR) / "fixtures" / "scoring";
  const Manifest m = Manifest::read(dir / "manifest.json");
  const json expected = json::parse(slurp(dir / "expected.json"));
  std::vector<std::string> totals;
  for (const auto& [name, want] : expected.items()) {
    const auto table = score_transcript(m, Transcript::read(dir / (name + ".jsonl")), {true, Reduction::per_response});
    out.expect(table.total == want.at("total").get<double>(), fmt::format("{} total {}", name, table.total));
    out.expect(table.rows.size() == want.at("subtests").size(), name + ": subtest count");
    for (const auto& [sub, w] : want.at("subtests").items()) {
      const auto* s = table.find(sub);
      out.expect(s && s->accuracy == w.at("accuracy").get<double>() && s->credited == w.at("credited").get<int>() &&
                     s->groups == w.at("groups").get<int>(),
                 fmt::format("{} {}", name, sub));
    }
    totals.push_back(fmt::format("{} {:g}", name, table.total));
  }
  // Symmetry-variant groups defeat a constant responder outright.
  const auto yes = score_transcript(m, Transcript::read(dir / "constant_yes.jsonl"), {true, Reduction::per_response});
  for (const char* sub : {"S2", "MV1"}) out.expect(yes.find(sub) && yes.find(sub)->credited == 0, std::string("constant yes on ") + sub);
  out.detail = fmt::format("{}", fmt::join(totals, ", "));
  return out;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"chance-table", 1, chance_table},
      {"random-responder", 30, random_responder},
      {"oracle-equivalence", 60, oracle_equivalence},
      {"vz2-refold", 60, vz2_refold},
      {"vz1-validity", 300, vz1_validity},
      {"corpus-reproduction", 300, corpus_reproduction},
      {"scoring-fixtures", 1, scoring_fixtures},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.problems.push_back(std::string("threw: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.limit_s) {
      o.ok = false;
      o.problems.push_back(fmt::format("took {:.1f} s, limit {:g} s", secs, c.limit_s));
    }
    failures += !o.ok;
    fmt::print("{} {:<20} {:7.2f}s / {:g}s  {}\n", o.ok ? "PASS" : "FAIL", c.name, secs, c.limit_s, o.detail);
    for (const auto& p : o.problems) fmt::print("     - {}\n", p);
    std::fflush(stdout);
  }
  return failures;
}
