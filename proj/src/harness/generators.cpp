#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "visfactor/closure.hpp"
#include "visfactor/error.hpp"
#include "visfactor/folding.hpp"
#include "visfactor/formboard.hpp"
#include "visfactor/harness/corpus.hpp"
#include "visfactor/mapplan.hpp"
#include "visfactor/memory.hpp"
#include "visfactor/occlusion.hpp"
#include "visfactor/spatial.hpp"

namespace visfactor::harness {
namespace {

using nlohmann::json;
using scoring::AnswerKind;
using scoring::Gold;
using scoring::QuestionFormat;
using Problems = std::vector<std::string>;

QueryRecord query(const std::string& tpl, std::vector<std::string> images, QuestionFormat format, Gold gold,
                  Slots slots = {}) {
  return {"", tpl, std::move(slots), std::move(images), std::move(format), std::move(gold)};
}

QueryRecord yesno(const std::string& tpl, std::vector<std::string> images, bool truth, Slots slots = {}) {
  return query(tpl, std::move(images), QuestionFormat::yesno(), Gold::truth(truth), std::move(slots));
}

std::string point_text(int row, int col) { return fmt::format("({}, {})", row, col); }

// Compares the stored golds against the truths the oracle derived.
void expect_golds(const QuestionRecord& q, const std::vector<Gold>& want, Problems& out) {
  if (q.queries.size() != want.size()) {
    out.push_back(fmt::format("{}: {} queries, oracle derives {}", q.id, q.queries.size(), want.size()));
    return;
  }
  for (std::size_t i = 0; i < want.size(); ++i) {
    const Gold& have = q.queries[i].gold;
    if (have.kind != want[i].kind || have.value != want[i].value || have.aliases != want[i].aliases)
      out.push_back(fmt::format("{}: gold '{}' but oracle derives '{}'", q.queries[i].id, have.value, want[i].value));
  }
}

void expect_truths(const QuestionRecord& q, const std::vector<bool>& truths, Problems& out) {
  std::vector<Gold> want;
  for (bool t : truths) want.push_back(Gold::truth(t));
  expect_golds(q, want, out);
}

std::vector<std::size_t> permutation(std::size_t n, std::uint64_t master, const std::string& tag) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  SeededRng rng(question_seed(master, tag, 0));
  rng.shuffle(p);
  return p;
}

// ---- CF1 / CF2 ----

Generated build_cf1(const json& p, SeededRng& rng, const BuildContext&) {
  const int rows = p.at("rows"), cols = p.at("cols");
  const auto q = closure::gen_cf1_question(rows, cols, p.at("rho"), p.at("rho_std"), rng);
  const double unit = closure::pattern_unit(rows, cols);
  Generated g;
  g.data = {{"pattern", closure::to_json(q.pattern)}, {"models", json::array()}};
  g.images.emplace_back("pattern", render(closure::pattern_scene(q.pattern, unit)));
  std::vector<bool> options;
  for (std::size_t i = 0; i < q.models.size(); ++i) options.push_back(static_cast<int>(i) == q.correct);
  const auto truths = scoring::decompose_mcq(options);
  for (std::size_t i = 0; i < q.models.size(); ++i) {
    const std::string name = fmt::format("shape-{}", i + 1);
    g.data["models"].push_back(closure::edges_to_json(q.models[i]));
    g.images.emplace_back(name, render(closure::model_scene(q.models[i], unit)));
    g.queries.push_back(yesno("CF1", {name, "pattern"}, truths[i]));
  }
  return g;
}

Problems check_cf1(const QuestionRecord& q, const std::filesystem::path&) {
  Problems out;
  const auto pattern = closure::pattern_from_json(q.data.at("pattern"));
  std::vector<bool> truths;
  for (const auto& m : q.data.at("models")) truths.push_back(closure::contains_model(closure::edges_from_json(m), pattern));
  if (std::count(truths.begin(), truths.end(), true) != 1) out.push_back(q.id + ": shapes present in the pattern != 1");
  expect_truths(q, truths, out);
  return out;
}

Generated build_cf2(const json& p, SeededRng& rng, const BuildContext&) {
  const int rows = p.at("rows"), cols = p.at("cols");
  const auto q = closure::gen_cf2_question(rows, cols, p.at("rho"), p.at("rho_std"), rng);
  const double unit = closure::pattern_unit(rows, cols);
  Generated g;
  g.data = {{"model", closure::edges_to_json(q.model)}, {"patterns", json::array()}};
  g.images.emplace_back("model", render(closure::model_scene(q.model, unit)));
  for (std::size_t i = 0; i < q.patterns.size(); ++i) {
    const std::string name = fmt::format("pattern-{}", i + 1);
    g.data["patterns"].push_back(closure::to_json(q.patterns[i]));
    g.images.emplace_back(name, render(closure::pattern_scene(q.patterns[i], unit)));
    g.queries.push_back(yesno("CF2", {"model", name}, q.truths[i]));
  }
  return g;
}

Problems check_cf2(const QuestionRecord& q, const std::filesystem::path&) {
  Problems out;
  const auto model = closure::edges_from_json(q.data.at("model"));
  std::vector<bool> truths;
  for (const auto& pj : q.data.at("patterns")) {
    const auto pattern = closure::pattern_from_json(pj);
    if (!closure::is_connected(pattern)) out.push_back(q.id + ": disconnected pattern");
    truths.push_back(closure::contains_model(model, pattern));
  }
  expect_truths(q, truths, out);
  return out;
}

// ---- CF3 ----

json grid_point(const geom::GridPoint& p) { return json::array({p.row, p.col}); }
geom::GridPoint grid_point(const json& j) { return {j.at(0).get<int>(), j.at(1).get<int>()}; }

Generated build_cf3(const json& p, SeededRng& rng, const BuildContext&) {
  const int rows = p.at("rows"), cols = p.at("cols");
  const auto item = closure::gen_cf3(rows, cols, p.at("min_steps"), p.at("max_steps"), rng);
  Generated g;
  g.data = {{"rows", rows}, {"cols", cols}, {"start", grid_point(item.walk.start)}, {"visited", json::array()}};
  for (const auto& v : item.walk.visited) g.data["visited"].push_back(grid_point(v));
  g.images.emplace_back("shape", render(closure::cf3_shape_scene(item)));
  g.images.emplace_back("grid", render(closure::cf3_grid_scene(item)));
  g.queries.push_back(query("CF3", {"shape", "grid"}, QuestionFormat::fill(rows * cols),
                            {AnswerKind::point, point_text(item.answer.row, item.answer.col), {}},
                            {{"rows", std::to_string(rows)}, {"cols", std::to_string(cols)}}));
  return g;
}

Problems check_cf3(const QuestionRecord& q, const std::filesystem::path&) {
  Problems out;
  closure::WalkPath walk;
  walk.start = grid_point(q.data.at("start"));
  for (const auto& v : q.data.at("visited")) walk.visited.push_back(grid_point(v));
  const int rows = q.data.at("rows"), cols = q.data.at("cols");
  if (walk.visited.empty() || !(walk.visited.front() == walk.start) || !closure::walk_valid(rows, cols, walk)) {
    out.push_back(q.id + ": walk is not valid");
    return out;
  }
  std::vector<geom::GridPoint> moves;
  for (std::size_t i = 1; i < walk.visited.size(); ++i)
    moves.push_back({walk.visited[i].row - walk.visited[i - 1].row, walk.visited[i].col - walk.visited[i - 1].col});
  const auto end = closure::replay_answer(walk.start, moves);
  expect_golds(q, {{AnswerKind::point, point_text(end.row, end.col), {}}}, out);
  return out;
}

// ---- CS1 / CS2 / CS3 ----

Gold asset_gold(const occlusion::Asset& a) { return {AnswerKind::name, a.label, a.aliases}; }

template <class Gen>
Generated build_asset_item(const std::string& sub, const json& p, SeededRng& rng, const BuildContext& ctx, Gen gen) {
  const auto& lib = occlusion::AssetLibrary::builtin();
  const auto perm = permutation(lib.size(), ctx.master_seed, sub + "-assets");
  const std::size_t asset = perm[static_cast<std::size_t>(ctx.index) % perm.size()];
  const double s = p.at("severity");
  Generated g;
  g.data = {{"asset", asset}, {"label", lib.at(asset).label}, {"severity", s}};
  g.images.emplace_back("drawing", gen(lib, asset, s, rng).image);
  g.queries.push_back(query(sub, {"drawing"}, QuestionFormat::fill(0), asset_gold(lib.at(asset))));
  return g;
}

Problems check_asset_item(const QuestionRecord& q, const std::filesystem::path& root) {
  Problems out;
  const auto& lib = occlusion::AssetLibrary::builtin();
  const std::size_t asset = q.data.at("asset");
  if (asset >= lib.size() || lib.at(asset).label != q.data.at("label").get<std::string>()) {
    out.push_back(q.id + ": asset index does not match its label");
    return out;
  }
  expect_golds(q, {asset_gold(lib.at(asset))}, out);
  if (!q.queries.empty() && count_dark(read_png(root / q.queries[0].images.at(0))) == 0)
    out.push_back(q.id + ": stimulus has no ink");
  return out;
}

std::vector<std::string> eligible_words(int min_len, int max_len) {
  std::vector<std::string> out;
  for (const auto& w : occlusion::WordList::builtin().words())
    if (static_cast<int>(w.size()) >= min_len && static_cast<int>(w.size()) <= max_len) out.push_back(w);
  return out;
}

Generated build_cs2(const json& p, SeededRng& rng, const BuildContext& ctx) {
  const int lo = p.at("min_len"), hi = p.at("max_len");
  const auto words = eligible_words(lo, hi);
  if (words.empty()) throw InvalidArgument("no words within the CS2 length bounds");
  const auto perm = permutation(words.size(), ctx.master_seed, "CS2-words");
  const std::string word = words[perm[static_cast<std::size_t>(ctx.index) % perm.size()]];
  const double s = p.at("severity");
  Generated g;
  g.data = {{"word", word}, {"severity", s}};
  g.images.emplace_back("word", occlusion::gen_cs2(occlusion::WordList({word}), lo, hi, s, rng).image);
  g.queries.push_back(query("CS2", {"word"}, QuestionFormat::fill(0), {AnswerKind::word, word, {}}));
  return g;
}

Problems check_cs2(const QuestionRecord& q, const std::filesystem::path& root) {
  Problems out;
  const std::string word = q.data.at("word");
  const auto& all = occlusion::WordList::builtin().words();
  if (std::find(all.begin(), all.end(), word) == all.end()) out.push_back(q.id + ": word is not in the word list");
  expect_golds(q, {{AnswerKind::word, word, {}}}, out);
  if (!q.queries.empty() && count_dark(read_png(root / q.queries[0].images.at(0))) == 0)
    out.push_back(q.id + ": stimulus has no ink");
  return out;
}

// ---- MA1 ----

Generated build_ma1(const json& p, SeededRng& rng, const BuildContext&) {
  const int n = p.at("pairs");
  const auto source = memory::parse_tile_source(p.at("source"));
  const auto item = memory::gen_ma1(n, source, rng);
  Generated g;
  g.data = {{"rows", item.sheet.rows}, {"cols", item.sheet.cols}, {"tile_ids", item.sheet.tile_ids},
            {"numbers", item.sheet.numbers}, {"probe", item.probe}};
  g.images.emplace_back("study", render(memory::study_scene(item.sheet)));
  g.images.emplace_back("probe", memory::probe_image(item));
  g.queries.push_back(query("MA1", {"study", "probe"}, QuestionFormat::fill(n),
                            {AnswerKind::number, std::to_string(item.answer), {}}, {{"pairs", std::to_string(n)}}));
  return g;
}

// The gold is whichever number sits beside the one study cell that is pixel
// identical to the probe.
Problems check_ma1(const QuestionRecord& q, const std::filesystem::path& root) {
  Problems out;
  if (q.queries.size() != 1) return {q.id + ": MA1 needs one query"};
  const Image study = read_png(root / q.queries[0].images.at(0));
  const Image probe = read_png(root / q.queries[0].images.at(1));
  memory::PairSheet sheet;
  sheet.rows = q.data.at("rows");
  sheet.cols = q.data.at("cols");
  const auto numbers = q.data.at("numbers").get<std::vector<int>>();
  std::vector<std::size_t> hits;
  for (std::size_t i = 0; i < numbers.size(); ++i) {
    const auto r = memory::tile_rect(sheet, i);
    if (r.x + r.w > study.width || r.y + r.h > study.height) return {q.id + ": tile outside the study image"};
    if (study.crop(r.x, r.y, r.w, r.h) == probe) hits.push_back(i);
  }
  if (hits.size() != 1) return {fmt::format("{}: probe matches {} study cells", q.id, hits.size())};
  if (std::set<int>(numbers.begin(), numbers.end()).size() != numbers.size()) out.push_back(q.id + ": repeated numbers");
  if (q.queries[0].format.space != static_cast<int>(numbers.size())) out.push_back(q.id + ": answer space != pair count");
  expect_golds(q, {{AnswerKind::number, std::to_string(numbers[hits[0]]), {}}}, out);
  return out;
}

// ---- S1 ----

Generated build_s1(const json& p, SeededRng& rng, const BuildContext&) {
  const auto q = spatial::gen_s1_question(spatial::PolygonParams{}, p.at("views"), rng);
  Generated g;
  g.data = {{"base", spatial::points_to_json(q.base)}, {"views", json::array()}};
  g.images.emplace_back("target", render(spatial::polygon_scene(q.base)));
  for (std::size_t i = 0; i < q.views.size(); ++i) {
    const auto& v = q.views[i];
    const std::string name = fmt::format("test-{}", i + 1);
    g.data["views"].push_back({{"mirrored", v.mirrored}, {"angle_deg", v.angle_deg}, {"vertices", spatial::points_to_json(v.vertices)}});
    g.images.emplace_back(name, render(spatial::polygon_scene(v.vertices)));
    g.queries.push_back(yesno("S1", {"target", name}, v.truth()));
  }
  return g;
}

// Same shape up to a rotation about the centroid: some cyclic relabeling, in
// either traversal direction, maps every vertex under one rotation.
bool rotation_congruent(const std::vector<geom::Point>& a, std::vector<geom::Point> b) {
  if (a.size() != b.size() || a.empty()) return false;
  const std::size_t n = a.size();
  for (int dir = 0; dir < 2; ++dir) {
    for (std::size_t k = 0; k < n; ++k) {
      const double theta = std::atan2(b[k].y, b[k].x) - std::atan2(a[0].y, a[0].x);
      const double c = std::cos(theta), s = std::sin(theta);
      bool ok = true;
      for (std::size_t i = 0; i < n && ok; ++i) {
        const auto& p = a[i];
        const auto& w = b[(i + k) % n];
        ok = std::hypot(c * p.x - s * p.y - w.x, s * p.x + c * p.y - w.y) < 1e-6;
      }
      if (ok) return true;
    }
    std::reverse(b.begin(), b.end());
  }
  return false;
}

Problems check_s1(const QuestionRecord& q, const std::filesystem::path&) {
  Problems out;
  const auto base = spatial::points_from_json(q.data.at("base"));
  std::vector<bool> truths;
  for (const auto& v : q.data.at("views")) truths.push_back(rotation_congruent(base, spatial::points_from_json(v.at("vertices"))));
  expect_truths(q, truths, out);
  return out;
}

// ---- S2 ----

Generated build_s2(const json&, SeededRng& rng, const BuildContext&) {
  const auto item = spatial::gen_s2_item(rng.bernoulli(0.5), rng);
  const auto& statements = PromptBook::builtin().statements("S2");
  Generated g;
  g.data = {{"first", spatial::to_json(item.first)}, {"second", spatial::to_json(item.second)}};
  g.images.emplace_back("first", render(spatial::cube_scene(item.first)));
  g.images.emplace_back("second", render(spatial::cube_scene(item.second)));
  const auto truths = scoring::symmetry_variants(item.truth);
  for (std::size_t i = 0; i < truths.size(); ++i)
    g.queries.push_back(yesno("S2", {"first", "second"}, truths[i], {{"statement", statements.at(i)}}));
  return g;
}

Problems check_s2(const QuestionRecord& q, const std::filesystem::path&) {
  Problems out;
  const bool same = spatial::cube_same(spatial::cube_view_from_json(q.data.at("first")),
                                       spatial::cube_view_from_json(q.data.at("second")));
  expect_truths(q, scoring::symmetry_variants(same), out);
  const auto& statements = PromptBook::builtin().statements("S2");
  for (std::size_t i = 0; i < q.queries.size() && i < statements.size(); ++i)
    if (q.queries[i].slots.at("statement") != statements[i]) out.push_back(q.queries[i].id + ": statement out of order");
  return out;
}

// ---- SS3 ----

Generated build_ss3(const json& p, SeededRng& rng, const BuildContext&) {
  mapplan::MapParams mp{p.at("rows"), p.at("cols"), p.at("removal"), p.at("buildings"), p.at("min_distance")};
  const auto m = mapplan::gen_ss3(mp, rng);
  const std::string s = m.label(m.start), t = m.label(m.end);
  Generated g;
  g.data = mapplan::to_json(m);
  g.images.emplace_back("map", render(mapplan::map_scene(m)));
  const auto golds = scoring::ss3_bidirectional(m.answer);
  const auto format = QuestionFormat::fill(static_cast<int>(m.buildings.size()));
  g.queries.push_back(query("SS3", {"map"}, format, golds[0], {{"start", s}, {"end", t}}));
  g.queries.push_back(query("SS3", {"map"}, format, golds[1], {{"start", t}, {"end", s}}));
  return g;
}

Problems check_ss3(const QuestionRecord& q, const std::filesystem::path&) {
  const auto m = mapplan::map_from_json(q.data);
  const auto graph = m.graph();
  std::vector<Gold> want;
  for (const auto& qr : q.queries) {
    int s = -1, t = -1;
    for (int node : m.perimeter()) {
      if (m.label(node) == qr.slots.at("start")) s = node;
      if (m.label(node) == qr.slots.at("end")) t = node;
    }
    if (s < 0 || t < 0) return {qr.id + ": terminal label not on the map"};
    const auto pc = mapplan::count_shortest_paths(graph, s, t);
    if (!pc || pc->count != 1) return {qr.id + ": shortest route is not unique"};
    const auto touched = mapplan::buildings_touched(pc->geodesic, m);
    if (touched.size() != 1) return {fmt::format("{}: route touches {} buildings", qr.id, touched.size())};
    want.push_back({AnswerKind::number, std::to_string(touched[0]), {}});
  }
  Problems out;
  if (q.queries.size() != 2 || q.queries[0].slots.at("start") != q.queries[1].slots.at("end"))
    out.push_back(q.id + ": SS3 needs a forward and a reversed query");
  expect_golds(q, want, out);
  return out;
}

// ---- VZ1 ----

const std::vector<std::string>& ordinals() {
  static const std::vector<std::string> names{"First", "Second", "Third", "Fourth", "Fifth", "Sixth", "Seventh", "Eighth"};
  return names;
}

Generated build_vz1(const json& p, SeededRng& rng, const BuildContext&) {
  formboard::Vz1Params vp;
  vp.grid = p.at("grid");
  vp.min_solution = p.at("min_solution");
  vp.max_solution = p.at("max_solution");
  vp.min_area = parse_rational(p.at("min_area").get<std::string>());
  const auto item = formboard::gen_vz1(vp, rng);
  Generated g;
  g.data = formboard::to_json(item);
  g.images.emplace_back("figure", render(formboard::target_scene(item)));
  g.images.emplace_back("pieces", render(formboard::pieces_scene(item)));
  const auto truths = item.truths();
  for (std::size_t i = 0; i < truths.size(); ++i)
    g.queries.push_back(yesno("VZ1", {"figure", "pieces"}, truths[i], {{"piece", ordinals().at(i)}}));
  return g;
}

// The unique area-matching subset must tile the figure; membership in it is
// the truth for each piece.
Problems check_vz1(const QuestionRecord& q, const std::filesystem::path&) {
  const auto item = formboard::vz1_from_json(q.data);
  std::vector<RPolygon> shapes;
  for (const auto& piece : item.pieces) shapes.push_back(piece.shape);
  const auto subsets = formboard::area_matching_subsets(shapes, item.target);
  if (subsets.size() != 1) return {fmt::format("{}: {} piece subsets match the figure area", q.id, subsets.size())};
  std::vector<RPolygon> chosen;
  std::vector<bool> truths;
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    const bool in = (subsets[0] >> i) & 1U;
    truths.push_back(in);
    if (in) chosen.push_back(shapes[i]);
  }
  if (!formboard::verify_tiling(chosen, item.target)) return {q.id + ": area-matching pieces do not tile the figure"};
  Problems out;
  for (std::size_t i = 0; i < shapes.size(); ++i)
    for (std::size_t j = i + 1; j < shapes.size(); ++j)
      if (exact::signed_area(exact::ccw(shapes[i])) == exact::signed_area(exact::ccw(shapes[j])))
        out.push_back(q.id + ": two pieces share an area");
  for (std::size_t i = 0; i < q.queries.size() && i < ordinals().size(); ++i)
    if (q.queries[i].slots.at("piece") != ordinals()[i]) out.push_back(q.queries[i].id + ": piece ordinal out of order");
  expect_truths(q, truths, out);
  return out;
}

// ---- VZ2 ----

Generated build_vz2(const json& p, SeededRng& rng, const BuildContext&) {
  folding::Vz2Params vp;
  vp.min_folds = p.at("min_folds");
  vp.max_folds = p.at("max_folds");
  vp.min_punches = p.at("min_punches");
  vp.max_punches = p.at("max_punches");
  vp.candidates = p.at("candidates");
  const auto item = folding::gen_vz2(vp, rng);
  Generated g;
  g.data = folding::to_json(item);
  g.images.emplace_back("folds", render(folding::sequence_scene(item)));
  for (std::size_t i = 0; i < item.candidates.size(); ++i) {
    const std::string name = fmt::format("sheet-{}", i + 1);
    g.images.emplace_back(name, render(folding::candidate_scene(item.candidates[i])));
    g.queries.push_back(yesno("VZ2", {"folds", name}, item.candidates[i].truth()));
  }
  return g;
}

Problems check_vz2(const QuestionRecord& q, const std::filesystem::path&) {
  const auto item = folding::vz2_from_json(q.data);
  auto flat = folding::punch_and_unfold(folding::replay(item.axes), item.punches);
  std::sort(flat.begin(), flat.end());
  Problems out;
  if (flat != item.flat_holes) out.push_back(q.id + ": stored flat holes differ from the unfolded punches");
  std::vector<bool> truths;
  for (const auto& c : item.candidates) {
    auto holes = c.holes;
    std::sort(holes.begin(), holes.end());
    truths.push_back(holes == flat);
  }
  if (std::count(truths.begin(), truths.end(), true) != 1) out.push_back(q.id + ": true candidates != 1");
  expect_truths(q, truths, out);
  return out;
}

Generator make(const std::string& sub, json defaults, Builder b, Oracle c) {
  return {sub, std::move(defaults), std::move(b), std::move(c)};
}

}  // namespace

const std::vector<Generator>& generators() {
  static const std::vector<Generator> all{
      make("CF1", {{"rows", 5}, {"cols", 5}, {"rho", 0.45}, {"rho_std", 0.05}}, build_cf1, check_cf1),
      make("CF2", {{"rows", 4}, {"cols", 4}, {"rho", 0.45}, {"rho_std", 0.05}}, build_cf2, check_cf2),
      make("CF3", {{"rows", 5}, {"cols", 5}, {"min_steps", 4}, {"max_steps", 6}}, build_cf3, check_cf3),
      make("CS1", {{"severity", 0.45}},
           [](const json& p, SeededRng& rng, const BuildContext& ctx) {
             return build_asset_item("CS1", p, rng, ctx, [](const auto& lib, std::size_t a, double s, SeededRng& r) {
               return occlusion::gen_cs1(lib, a, s, r);
             });
           },
           check_asset_item),
      make("CS2", {{"severity", 0.45}, {"min_len", 4}, {"max_len", 8}}, build_cs2, check_cs2),
      make("CS3", {{"severity", 0.45}},
           [](const json& p, SeededRng& rng, const BuildContext& ctx) {
             return build_asset_item("CS3", p, rng, ctx, [](const auto& lib, std::size_t a, double s, SeededRng& r) {
               return occlusion::gen_cs3(lib, a, s, r);
             });
           },
           check_asset_item),
      make("MA1", {{"pairs", 21}, {"source", "semantic"}}, build_ma1, check_ma1),
      make("S1", {{"views", 8}}, build_s1, check_s1),
      make("S2", json::object(), build_s2, check_s2),
      make("SS3", {{"rows", 7}, {"cols", 7}, {"removal", 0.15}, {"buildings", 10}, {"min_distance", 3}}, build_ss3, check_ss3),
      make("VZ1", {{"grid", 5}, {"min_solution", 3}, {"max_solution", 5}, {"min_area", "1/2"}}, build_vz1, check_vz1),
      make("VZ2", {{"min_folds", 1}, {"max_folds", 3}, {"min_punches", 1}, {"max_punches", 2}, {"candidates", 5}}, build_vz2,
           check_vz2),
  };
  return all;
}

const Generator* find_generator(const std::string& subtest) {
  for (const auto& g : generators())
    if (g.subtest == subtest) return &g;
  return nullptr;
}

}  // namespace visfactor::harness
