#include "visfactor/folding.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "visfactor/error.hpp"

namespace visfactor::folding {
namespace {

using exact::orient;
using exact::sign;

int side_sign(const RPoint& p, const FoldAxis& a) { return sign(geom::axis_side(p, a)); }

// Two points on the axis, ordered along its direction.
std::pair<RPoint, RPoint> axis_points(const FoldAxis& a) {
  switch (a.kind) {
    case geom::AxisKind::horizontal: return {{Rational(0), a.offset}, {Rational(1), a.offset}};
    case geom::AxisKind::vertical: return {{a.offset, Rational(0)}, {a.offset, Rational(1)}};
    default: return {{Rational(0), a.offset}, {Rational(1), a.offset + a.slope_sign}};
  }
}

// Part of a convex polygon where sign(axis_side) is `keep` or zero.
RPolygon clip_side(const RPolygon& poly, const FoldAxis& axis, int keep) {
  RPolygon out;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const RPoint& cur = poly[i];
    const RPoint& nxt = poly[(i + 1) % poly.size()];
    const Rational sc = geom::axis_side(cur, axis) * keep, sn = geom::axis_side(nxt, axis) * keep;
    if (sc >= 0) out.push_back(cur);
    if ((sc > 0 && sn < 0) || (sc < 0 && sn > 0)) {
      const Rational t = sc / (sc - sn);
      out.push_back({cur.x + t * (nxt.x - cur.x), cur.y + t * (nxt.y - cur.y)});
    }
  }
  return exact::ccw(exact::simplify(out));
}

RPolygon reflected(const RPolygon& poly, const FoldAxis& axis) {
  RPolygon out;
  for (const auto& v : poly) out.push_back(geom::reflect_across(v, axis));
  return exact::ccw(out);
}

Rational param(const RPoint& p, const RPoint& a, const RPoint& b) {
  const RPoint d = b - a;
  return exact::dot(p - a, d) / exact::dot(d, d);
}

// Chord of the axis through a convex polygon, if it has positive length.
std::optional<RSegment> chord(const RPolygon& poly, const FoldAxis& axis) {
  std::vector<RPoint> hits;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const RPoint& a = poly[i];
    const RPoint& b = poly[(i + 1) % poly.size()];
    const int sa = side_sign(a, axis), sb = side_sign(b, axis);
    if (sa == 0) hits.push_back(a);
    if (sa * sb < 0) {
      const Rational fa = geom::axis_side(a, axis), fb = geom::axis_side(b, axis);
      const Rational t = fa / (fa - fb);
      hits.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
    }
  }
  if (hits.size() < 2) return std::nullopt;
  const auto [p, q] = axis_points(axis);
  auto by_param = [&](const RPoint& u, const RPoint& v) { return param(u, p, q) < param(v, p, q); };
  const auto [lo, hi] = std::minmax_element(hits.begin(), hits.end(), by_param);
  if (*lo == *hi) return std::nullopt;
  return RSegment{*lo, *hi};
}

}  // namespace

FoldState FoldState::flat() {
  FoldState s;
  s.layers.push_back({{{Rational(0), Rational(0)}, {Rational(1), Rational(0)}, {Rational(1), Rational(1)}, {Rational(0), Rational(1)}}, {}});
  return s;
}

RPolygon union_outline(const std::vector<RPolygon>& polys) {
  // Split every edge at every contact with other polygons, keep the pieces
  // that have paper on their left only, and chain them into loops.
  std::vector<RSegment> pieces;
  for (std::size_t i = 0; i < polys.size(); ++i) {
    const RPolygon& pi = polys[i];
    for (std::size_t e = 0; e < pi.size(); ++e) {
      const RPoint a = pi[e], b = pi[(e + 1) % pi.size()];
      std::vector<RPoint> cuts{a, b};
      for (std::size_t j = 0; j < polys.size(); ++j) {
        if (j == i) continue;
        const RPolygon& pj = polys[j];
        for (std::size_t f = 0; f < pj.size(); ++f) {
          const RPoint c = pj[f], d = pj[(f + 1) % pj.size()];
          if (!exact::segments_intersect(a, b, c, d)) continue;
          if (is_zero(orient(a, b, c)) && is_zero(orient(a, b, d))) {
            if (exact::on_segment(c, a, b)) cuts.push_back(c);
            if (exact::on_segment(d, a, b)) cuts.push_back(d);
          } else if (auto x = exact::line_intersection(a, b, c, d)) {
            cuts.push_back(*x);
          }
        }
      }
      std::sort(cuts.begin(), cuts.end(), [&](const RPoint& u, const RPoint& v) { return param(u, a, b) < param(v, a, b); });
      cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
      for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const RPoint p = cuts[k], q = cuts[k + 1];
        const RPoint m{(p.x + q.x) / 2, (p.y + q.y) / 2};
        bool keep = true;
        for (std::size_t j = 0; j < polys.size() && keep; ++j) {
          if (j == i) continue;
          const auto loc = exact::locate(m, polys[j]);
          if (loc == exact::Location::inside) keep = false;
          if (loc != exact::Location::boundary) continue;
          const RPolygon& pj = polys[j];
          for (std::size_t f = 0; f < pj.size(); ++f) {
            const RPoint c = pj[f], d = pj[(f + 1) % pj.size()];
            if (!exact::on_segment(m, c, d)) continue;
            // Same direction: a duplicate edge, kept once. Opposite: a seam.
            if (exact::dot(b - a, d - c) < 0 || j < i) keep = false;
            break;
          }
        }
        if (keep) pieces.push_back({p, q});
      }
    }
  }
  std::multimap<RPoint, std::size_t> from;
  for (std::size_t k = 0; k < pieces.size(); ++k) from.emplace(pieces[k].a, k);
  std::vector<bool> used(pieces.size(), false);
  RPolygon best;
  Rational best_area{0};
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    if (used[k]) continue;
    RPolygon loop;
    std::size_t cur = k;
    while (!used[cur]) {
      used[cur] = true;
      loop.push_back(pieces[cur].a);
      auto [lo, hi] = from.equal_range(pieces[cur].b);
      for (auto it = lo; it != hi; ++it)
        if (!used[it->second]) {
          cur = it->second;
          break;
        }
    }
    loop = exact::simplify(loop);
    if (loop.size() < 3) continue;
    const Rational a = exact::signed_area(loop);
    if (a > best_area) best = loop, best_area = a;
  }
  return best;
}

RPolygon FoldState::outline() const {
  std::vector<RPolygon> polys;
  for (const auto& l : layers) polys.push_back(l.poly);
  return union_outline(polys);
}

Rational FoldState::area() const {
  Rational total{0};
  for (const auto& l : layers) total += exact::signed_area(l.poly);
  return total;
}

RPoint FoldState::to_flat(std::size_t i, const RPoint& p) const {
  RPoint q = p;
  const auto& moved = layers.at(i).moved_at;
  for (auto it = moved.rbegin(); it != moved.rend(); ++it) q = geom::reflect_across(q, history.at(static_cast<std::size_t>(*it)).axis);
  return q;
}

FoldState fold(const FoldState& state, const FoldAxis& axis) {
  const RPolygon outline = state.outline();
  bool pos = false, neg = false;
  for (const auto& v : outline) {
    pos = pos || side_sign(v, axis) > 0;
    neg = neg || side_sign(v, axis) < 0;
  }
  if (!pos || !neg) throw InvalidArgument("fold axis does not cut the sheet");

  // The half holding the outline centroid stays; on a tie the half holding
  // the smallest vertex (x, then y) off the axis stays.
  int stay = side_sign(exact::centroid(outline), axis);
  if (stay == 0) {
    RPolygon sorted = outline;
    std::sort(sorted.begin(), sorted.end());
    for (const auto& v : sorted)
      if ((stay = side_sign(v, axis)) != 0) break;
  }

  FoldState out;
  out.history = state.history;
  const int index = static_cast<int>(out.history.size());
  for (const auto& l : state.layers) {
    RPolygon keep = clip_side(l.poly, axis, stay);
    RPolygon move = clip_side(l.poly, axis, -stay);
    if (keep.size() >= 3) out.layers.push_back({keep, l.moved_at});
    if (move.size() >= 3) {
      Layer m{reflected(move, axis), l.moved_at};
      m.moved_at.push_back(index);
      out.layers.push_back(std::move(m));
    }
  }

  for (const auto& c : state.creases) {
    const int sa = side_sign(c.a, axis), sb = side_sign(c.b, axis);
    auto flip = [&](const RSegment& s) { return RSegment{geom::reflect_across(s.a, axis), geom::reflect_across(s.b, axis)}; };
    if (sa * stay >= 0 && sb * stay >= 0) {
      out.creases.push_back(c);
    } else if (sa * stay <= 0 && sb * stay <= 0) {
      out.creases.push_back(flip(c));
    } else {
      const Rational fa = geom::axis_side(c.a, axis), fb = geom::axis_side(c.b, axis);
      const Rational t = fa / (fa - fb);
      const RPoint x{c.a.x + t * (c.b.x - c.a.x), c.a.y + t * (c.b.y - c.a.y)};
      const RSegment first{c.a, x}, second{x, c.b};
      out.creases.push_back(sa * stay > 0 ? first : second);
      out.creases.push_back(flip(sa * stay > 0 ? second : first));
    }
  }
  // The new crease is the axis clipped to the pre-fold sheet, merged per line.
  std::vector<RSegment> chords;
  for (const auto& l : state.layers)
    if (auto c = chord(l.poly, axis)) chords.push_back(*c);
  const auto [p, q] = axis_points(axis);
  std::sort(chords.begin(), chords.end(), [&](const RSegment& u, const RSegment& v) { return param(u.a, p, q) < param(v.a, p, q); });
  for (const auto& c : chords) {
    if (!out.creases.empty() && out.creases.size() > state.creases.size() && param(c.a, p, q) <= param(out.creases.back().b, p, q)) {
      if (param(c.b, p, q) > param(out.creases.back().b, p, q)) out.creases.back().b = c.b;
    } else {
      out.creases.push_back(c);
    }
  }

  FoldRecord rec{axis, stay, {}};
  for (std::size_t i = 0; i < state.holes.size(); ++i) {
    if (side_sign(state.holes[i], axis) == -stay) {
      out.holes.push_back(geom::reflect_across(state.holes[i], axis));
      rec.moved_holes.push_back(static_cast<int>(i));
    } else {
      out.holes.push_back(state.holes[i]);
    }
  }
  out.history.push_back(std::move(rec));
  return out;
}

FoldState unfold(const FoldState& state) {
  if (state.history.empty()) throw InvalidArgument("nothing to unfold");
  std::vector<FoldAxis> axes;
  for (std::size_t i = 0; i + 1 < state.history.size(); ++i) axes.push_back(state.history[i].axis);
  FoldState out = replay(axes);
  out.holes = state.holes;
  const FoldRecord& last = state.history.back();
  for (int i : last.moved_holes) out.holes[static_cast<std::size_t>(i)] = geom::reflect_across(out.holes[static_cast<std::size_t>(i)], last.axis);
  return out;
}

FoldState replay(const std::vector<FoldAxis>& axes) {
  FoldState s = FoldState::flat();
  for (const auto& a : axes) s = fold(s, a);
  return s;
}

int layers_at(const FoldState& state, const RPoint& p) {
  int n = 0;
  for (const auto& l : state.layers) {
    const auto loc = exact::locate(p, l.poly);
    if (loc == exact::Location::boundary) throw InvalidArgument("punch lies on a layer edge or crease");
    n += loc == exact::Location::inside;
  }
  for (const auto& c : state.creases)
    if (exact::on_segment(p, c.a, c.b)) throw InvalidArgument("punch lies on a crease");
  if (n == 0) throw InvalidArgument("punch lies outside the sheet");
  return n;
}

std::vector<RPoint> punch_and_unfold(const FoldState& state, const std::vector<RPoint>& punches) {
  std::vector<RPoint> holes;
  for (const auto& p : punches) {
    layers_at(state, p);
    for (std::size_t i = 0; i < state.layers.size(); ++i)
      if (exact::locate(p, state.layers[i].poly) == exact::Location::inside) holes.push_back(state.to_flat(i, p));
  }
  std::sort(holes.begin(), holes.end());
  return holes;
}

RPoint refold(const FoldState& state, RPoint p) {
  for (const auto& rec : state.history)
    if (side_sign(p, rec.axis) == -rec.stationary) p = geom::reflect_across(p, rec.axis);
  return p;
}

std::string to_string(Corruption c) {
  switch (c) {
    case Corruption::none: return "none";
    case Corruption::displaced: return "displaced";
    case Corruption::added: return "added";
    case Corruption::dropped: return "dropped";
  }
  return "none";
}

std::vector<bool> Vz2Item::truths() const {
  std::vector<bool> t;
  for (const auto& c : candidates) t.push_back(c.truth());
  return t;
}

FoldAxis random_axis(const FoldState& state, SeededRng& rng) {
  const RPolygon outline = state.outline();
  for (int attempt = 0; attempt < 1000; ++attempt) {
    FoldAxis a;
    switch (rng.below(4)) {
      case 0: a = FoldAxis::horizontal(Rational(rng.uniform_int(1, 7), 8)); break;
      case 1: a = FoldAxis::vertical(Rational(rng.uniform_int(1, 7), 8)); break;
      case 2: a = FoldAxis::diagonal(1, Rational(rng.uniform_int(-7, 7), 8)); break;
      default: a = FoldAxis::diagonal(-1, Rational(rng.uniform_int(1, 15), 8));
    }
    bool pos = false, neg = false;
    for (const auto& v : outline) {
      pos = pos || side_sign(v, a) > 0;
      neg = neg || side_sign(v, a) < 0;
    }
    if (pos && neg) return a;
  }
  throw GenerationFailed("no fold axis cuts the sheet", rng.seed());
}

std::vector<RPoint> punch_sites(const FoldState& state) {
  const RPolygon outline = state.outline();
  Rational x0 = outline[0].x, x1 = x0, y0 = outline[0].y, y1 = y0;
  for (const auto& v : outline) x0 = std::min(x0, v.x), x1 = std::max(x1, v.x), y0 = std::min(y0, v.y), y1 = std::max(y1, v.y);
  auto cell = [](const Rational& r) { return boost::rational_cast<std::int64_t>(r * 8); };
  std::vector<RPoint> sites;
  for (auto i = cell(x0) - 1; i <= cell(x1) + 1; ++i) {
    for (auto j = cell(y0) - 1; j <= cell(y1) + 1; ++j) {
      const RPoint p{Rational(2 * i + 1, 16), Rational(2 * j + 1, 16)};
      try {
        layers_at(state, p);
        sites.push_back(p);
      } catch (const InvalidArgument&) {
      }
    }
  }
  return sites;
}

namespace {

std::vector<RPoint> sheet_grid() {
  std::vector<RPoint> g;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) g.push_back({Rational(2 * i + 1, 16), Rational(2 * j + 1, 16)});
  return g;
}

bool in_set(const std::vector<RPoint>& set, const RPoint& p) { return std::find(set.begin(), set.end(), p) != set.end(); }

}  // namespace

Vz2Candidate corrupt(const std::vector<RPoint>& truth, SeededRng& rng) {
  const auto grid = sheet_grid();
  Vz2Candidate c;
  c.holes = truth;
  // Displace one hole to a nearby free grid position when one exists.
  std::vector<std::pair<std::size_t, RPoint>> moves;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    for (const auto& g : grid) {
      const Rational dx = g.x - truth[i].x, dy = g.y - truth[i].y;
      const Rational reach(1, 4);
      if (std::max(dx < 0 ? -dx : dx, dy < 0 ? -dy : dy) <= reach && !in_set(truth, g)) moves.emplace_back(i, g);
    }
  }
  if (!moves.empty()) {
    const auto& [i, g] = rng.pick(moves);
    c.holes[i] = g;
    c.corruption = Corruption::displaced;
  } else {
    std::vector<RPoint> free;
    for (const auto& g : grid)
      if (!in_set(truth, g)) free.push_back(g);
    if (truth.size() > 1 && (free.empty() || rng.bernoulli(0.5))) {
      c.holes.erase(c.holes.begin() + static_cast<std::ptrdiff_t>(rng.below(c.holes.size())));
      c.corruption = Corruption::dropped;
    } else if (!free.empty()) {
      c.holes.push_back(rng.pick(free));
      c.corruption = Corruption::added;
    } else {
      throw GenerationFailed("no corruption of the hole set exists", rng.seed());
    }
  }
  std::sort(c.holes.begin(), c.holes.end());
  return c;
}

Vz2Item gen_vz2(const Vz2Params& p, SeededRng& rng) {
  if (p.min_folds < 1 || p.max_folds > 5 || p.min_folds > p.max_folds) throw InvalidArgument("folds must lie within [1, 5]");
  if (p.min_punches < 1 || p.min_punches > p.max_punches) throw InvalidArgument("need at least one punch");
  if (p.candidates < 1) throw InvalidArgument("need at least one candidate");
  for (int attempt = 0; attempt < 200; ++attempt) {
    Vz2Item item;
    FoldState state = FoldState::flat();
    const int folds = static_cast<int>(rng.uniform_int(p.min_folds, p.max_folds));
    for (int k = 0; k < folds; ++k) {
      item.axes.push_back(random_axis(state, rng));
      state = fold(state, item.axes.back());
    }
    const auto sites = punch_sites(state);
    const auto punches = static_cast<std::size_t>(rng.uniform_int(p.min_punches, p.max_punches));
    if (sites.size() < punches) continue;
    for (auto i : rng.sample_indices(sites.size(), punches)) item.punches.push_back(sites[i]);
    item.flat_holes = punch_and_unfold(state, item.punches);

    item.candidates.push_back({item.flat_holes, Corruption::none});
    // Distinct corrupted sets; the displacement policy is retried before
    // falling back to add/drop through the exhausted-moves path.
    for (int tries = 0; tries < 200 && static_cast<int>(item.candidates.size()) < p.candidates; ++tries) {
      Vz2Candidate c = corrupt(item.flat_holes, rng);
      bool dup = false;
      for (const auto& prev : item.candidates) dup = dup || prev.holes == c.holes;
      if (!dup) item.candidates.push_back(std::move(c));
    }
    if (static_cast<int>(item.candidates.size()) < p.candidates) continue;
    rng.shuffle(item.candidates);
    return item;
  }
  throw GenerationFailed("VZ2 rejection cap reached", rng.seed());
}

namespace {

constexpr double kPanel = 300;

struct View {
  double scale, x0, y1;
  geom::Point at(const RPoint& p, double panel) const {
    return {panel * kPanel + 30 + scale * (to_double(p.x) - x0), 30 + scale * (y1 - to_double(p.y))};
  }
};

std::vector<geom::Point> screen(const RPolygon& poly, const View& v, double panel) {
  std::vector<geom::Point> out;
  for (const auto& p : poly) out.push_back(v.at(p, panel));
  return out;
}

}  // namespace

Scene sequence_scene(const Vz2Item& item) {
  std::vector<FoldState> states{FoldState::flat()};
  for (const auto& a : item.axes) states.push_back(fold(states.back(), a));
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  for (const auto& s : states)
    for (const auto& l : s.layers)
      for (const auto& v : l.poly) {
        x0 = std::min(x0, to_double(v.x)), x1 = std::max(x1, to_double(v.x));
        y0 = std::min(y0, to_double(v.y)), y1 = std::max(y1, to_double(v.y));
      }
  const View view{(kPanel - 60) / std::max(x1 - x0, y1 - y0), x0, y1};
  const std::size_t panels = item.axes.size();
  Scene sc(kPanel * static_cast<double>(panels), kPanel);
  for (std::size_t k = 1; k <= panels; ++k) {
    const double col = static_cast<double>(k - 1);
    // Ghost of the sheet before this fold, then the folded sheet on top.
    sc.add(LineShape{screen(states[k - 1].outline(), view, col), 2, 150, true, true});
    sc.add(PolygonShape{screen(states[k].outline(), view, col), std::uint8_t{255}, kStroke, 0}, 1);
    if (k == panels)
      for (const auto& p : item.punches) sc.add(CircleShape{view.at(p, col), view.scale * 0.03, 2, 0, std::uint8_t{255}}, 2);
    if (k < panels) sc.add(LineShape{{{kPanel * k, 20}, {kPanel * k, kPanel - 20}}, 1, 200}, 0);
  }
  return sc;
}

Scene candidate_scene(const Vz2Candidate& c) {
  Scene sc(kPanel, kPanel);
  const View view{kPanel - 60, 0, 1};
  const RPolygon sheet = FoldState::flat().layers[0].poly;
  sc.add(PolygonShape{screen(sheet, view, 0), std::uint8_t{255}, kStroke, 0});
  for (const auto& h : c.holes) sc.add(CircleShape{view.at(h, 0), view.scale * 0.03, 2, 0, std::uint8_t{255}}, 1);
  return sc;
}

nlohmann::json axis_to_json(const FoldAxis& a) {
  static const char* kinds[] = {"horizontal", "vertical", "diagonal"};
  return {{"kind", kinds[static_cast<int>(a.kind)]}, {"offset", visfactor::to_string(a.offset)}, {"slope", a.slope_sign}};
}

FoldAxis axis_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind");
  const Rational c = parse_rational(j.at("offset").get<std::string>());
  if (kind == "horizontal") return FoldAxis::horizontal(c);
  if (kind == "vertical") return FoldAxis::vertical(c);
  if (kind == "diagonal") return FoldAxis::diagonal(j.value("slope", 1), c);
  throw InvalidArgument("unknown fold axis kind '" + kind + "'");
}

namespace {

nlohmann::json points_json(const std::vector<RPoint>& pts) {
  auto j = nlohmann::json::array();
  for (const auto& p : pts) j.push_back({visfactor::to_string(p.x), visfactor::to_string(p.y)});
  return j;
}

std::vector<RPoint> points_of(const nlohmann::json& j) {
  std::vector<RPoint> pts;
  for (const auto& p : j) pts.push_back({parse_rational(p.at(0).get<std::string>()), parse_rational(p.at(1).get<std::string>())});
  return pts;
}

Corruption corruption_of(const std::string& s) {
  for (auto c : {Corruption::none, Corruption::displaced, Corruption::added, Corruption::dropped})
    if (to_string(c) == s) return c;
  throw InvalidArgument("unknown corruption '" + s + "'");
}

}  // namespace

nlohmann::json to_json(const Vz2Item& item) {
  nlohmann::json j{{"punches", points_json(item.punches)}, {"flat_holes", points_json(item.flat_holes)}};
  j["folds"] = nlohmann::json::array();
  for (const auto& a : item.axes) j["folds"].push_back(axis_to_json(a));
  j["candidates"] = nlohmann::json::array();
  for (const auto& c : item.candidates) j["candidates"].push_back({{"holes", points_json(c.holes)}, {"corruption", to_string(c.corruption)}});
  return j;
}

Vz2Item vz2_from_json(const nlohmann::json& j) {
  Vz2Item item;
  for (const auto& a : j.at("folds")) item.axes.push_back(axis_from_json(a));
  item.punches = points_of(j.at("punches"));
  item.flat_holes = points_of(j.at("flat_holes"));
  for (const auto& c : j.at("candidates")) item.candidates.push_back({points_of(c.at("holes")), corruption_of(c.at("corruption"))});
  return item;
}

}  // namespace visfactor::folding
