#include "visfactor/occlusion.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

#include "visfactor/data.hpp"
#include "visfactor/error.hpp"

namespace visfactor::occlusion {
namespace {

using geom::Point;

std::uint8_t shade(const nlohmann::json& s) { return static_cast<std::uint8_t>(s.value("color", 0)); }

Point pt(const nlohmann::json& p) { return {p.at(0).get<double>(), p.at(1).get<double>()}; }

std::vector<Point> ellipse_points(double cx, double cy, double rx, double ry, double rot_deg, double a0, double a1, int n) {
  std::vector<Point> out;
  const double rot = rot_deg * std::numbers::pi / 180;
  for (int i = 0; i <= n; ++i) {
    const double a = (a0 + (a1 - a0) * i / n) * std::numbers::pi / 180;
    const double x = rx * std::cos(a), y = ry * std::sin(a);
    out.push_back({cx + x * std::cos(rot) - y * std::sin(rot), cy + x * std::sin(rot) + y * std::cos(rot)});
  }
  return out;
}

void add_shape(Scene& sc, const nlohmann::json& s) {
  const auto c = shade(s);
  if (s.contains("poly")) {
    std::vector<Point> pts;
    for (const auto& p : s["poly"]) pts.push_back(pt(p));
    sc.add(PolygonShape{pts, c});
  } else if (s.contains("circle")) {
    const auto& v = s["circle"];
    sc.add(CircleShape{{v[0].get<double>(), v[1].get<double>()}, v[2].get<double>(), 0, c, c});
  } else if (s.contains("ellipse")) {
    const auto& v = s["ellipse"];
    auto pts = ellipse_points(v[0], v[1], v[2], v[3], v.size() > 4 ? v[4].get<double>() : 0.0, 0, 360, 72);
    pts.pop_back();
    sc.add(PolygonShape{pts, c});
  } else if (s.contains("rect")) {
    const auto& v = s["rect"];
    const double x = v[0], y = v[1], w = v[2], h = v[3];
    sc.add(PolygonShape{{{x, y}, {x + w, y}, {x + w, y + h}, {x, y + h}}, c});
  } else if (s.contains("line")) {
    std::vector<Point> pts;
    for (const auto& p : s["line"]) pts.push_back(pt(p));
    sc.add(LineShape{pts, s.value("w", 4.0), c});
  } else if (s.contains("arc")) {
    const auto& v = s["arc"];
    const double a0 = v[4], a1 = v[5];
    const bool full = std::abs(a1 - a0) >= 360;
    auto pts = ellipse_points(v[0], v[1], v[2], v[3], 0, a0, a1, 72);
    if (full) pts.pop_back();
    sc.add(LineShape{pts, s.value("w", 4.0), c, full});
  } else {
    throw ConfigError("asset shape has no known primitive: " + s.dump());
  }
}

struct Box {
  int x0, y0, x1, y1;  // inclusive
};

Box ink_box(const Image& img) {
  Box b{img.width, img.height, -1, -1};
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      if (img.at(x, y) < 128) b = {std::min(b.x0, x), std::min(b.y0, y), std::max(b.x1, x), std::max(b.y1, y)};
  if (b.x1 < 0) return {0, 0, img.width - 1, img.height - 1};
  return b;
}

Scene over(const Image& img) {
  Scene sc(img.width, img.height);
  sc.tile(img, 0, 0, img.width, img.height);
  return sc;
}

// Occluder i always comes from the same child stream, so raising s only adds
// occluders and widens existing ones; the covered set grows monotonically.
SeededRng child(std::uint64_t base, std::string_view tag, int i) {
  return SeededRng(SeededRng::derive(base, tag, static_cast<std::uint64_t>(i)));
}

Point inside(const Box& b, SeededRng& r) { return {r.uniform(b.x0, b.x1 + 1.0), r.uniform(b.y0, b.y1 + 1.0)}; }

void random_segment(Scene& sc, const Box& b, SeededRng& r, double min_len, double max_len, double width, std::uint8_t color) {
  const Point c = inside(b, r);
  const double theta = r.uniform(0, std::numbers::pi), len = r.uniform(min_len, max_len);
  const Point d{std::cos(theta) * len / 2, std::sin(theta) * len / 2};
  sc.add(LineShape{{c - d, c + d}, width, color});
}

}  // namespace

AssetLibrary AssetLibrary::from_json(const nlohmann::json& j) {
  AssetLibrary lib;
  std::set<std::string> labels;
  for (const auto& a : j.at("assets")) {
    Asset asset{a.at("label").get<std::string>(), a.value("aliases", std::vector<std::string>{}), a.at("shapes")};
    if (asset.label.empty() || !labels.insert(asset.label).second) throw ConfigError("duplicate or empty asset label '" + asset.label + "'");
    if (asset.shapes.empty()) throw ConfigError("asset '" + asset.label + "' has no shapes");
    if (std::find(asset.aliases.begin(), asset.aliases.end(), asset.label) == asset.aliases.end())
      asset.aliases.insert(asset.aliases.begin(), asset.label);
    lib.assets_.push_back(std::move(asset));
  }
  return lib;
}

AssetLibrary AssetLibrary::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open asset file " + path.string());
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("bad asset file " + path.string() + ": " + e.what());
  }
}

const AssetLibrary& AssetLibrary::builtin() {
  static const AssetLibrary lib = load(data_path("silhouettes.json"));
  return lib;
}

Scene asset_scene(const Asset& asset) {
  Scene sc(100, 100);
  for (const auto& s : asset.shapes) add_shape(sc, s);
  return sc;
}

Image render_asset(const Asset& asset, int size_px) { return render(asset_scene(asset), size_px, size_px); }

WordList::WordList(std::vector<std::string> words) : words_(std::move(words)) {
  for (const auto& w : words_)
    if (w.empty() || !std::all_of(w.begin(), w.end(), [](char c) { return c >= 'a' && c <= 'z'; }))
      throw ConfigError("word list entries must be lowercase letters: '" + w + "'");
}

WordList WordList::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open word list " + path.string());
  std::vector<std::string> words;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line[0] != '#') words.push_back(line);
  }
  return WordList(std::move(words));
}

const WordList& WordList::builtin() {
  static const WordList words = load(data_path("words.txt"));
  return words;
}

const std::string& WordList::sample(int min_len, int max_len, SeededRng& rng) const {
  if (min_len < 1 || min_len > max_len) throw InvalidArgument("word length range is empty");
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    const int n = static_cast<int>(words_[i].size());
    if (n >= min_len && n <= max_len) pool.push_back(i);
  }
  if (pool.empty()) throw InvalidArgument("no word with length in [" + std::to_string(min_len) + ", " + std::to_string(max_len) + "]");
  return words_[rng.pick(pool)];
}

Laws Laws::from_json(const nlohmann::json& j) {
  Laws l;
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j[key].get<std::remove_reference_t<decltype(field)>>();
  };
  get("stroke_base", l.stroke_base);
  get("stroke_gain", l.stroke_gain);
  get("stroke_width_base", l.stroke_width_base);
  get("stroke_width_gain", l.stroke_width_gain);
  get("segment_base", l.segment_base);
  get("segment_gain", l.segment_gain);
  get("segment_width_base", l.segment_width_base);
  get("segment_width_gain", l.segment_width_gain);
  get("blotch_base", l.blotch_base);
  get("blotch_gain", l.blotch_gain);
  get("blotch_radius_base", l.blotch_radius_base);
  get("blotch_radius_gain", l.blotch_radius_gain);
  get("rect_gain", l.rect_gain);
  get("clutter_gain", l.clutter_gain);
  get("rect_max_fraction", l.rect_max_fraction);
  get("clutter_width", l.clutter_width);
  return l;
}

int law(int base, int gain, double s) { return base + static_cast<int>(std::lround(gain * s)); }

void check_severity(double s) {
  if (!(s >= 0 && s <= 1)) throw InvalidArgument("severity must lie in [0, 1]");
}

Image occlude_silhouette(const Image& img, double s, SeededRng& rng, const Laws& laws) {
  check_severity(s);
  if (s == 0) return img;
  const std::uint64_t base = rng.next_u64();
  const Box box = ink_box(img);
  const double size = std::max(img.width, img.height);
  const int width = law(laws.stroke_width_base, laws.stroke_width_gain, s);
  Scene sc = over(img);
  for (int i = 0, n = law(laws.stroke_base, laws.stroke_gain, s); i < n; ++i) {
    SeededRng r = child(base, "stroke", i);
    random_segment(sc, box, r, 0.5 * size, size, width, 255);
  }
  return render(sc);
}

Image conceal_word(const Image& img, double s, SeededRng& rng, const Laws& laws) {
  check_severity(s);
  if (s == 0) return img;
  const std::uint64_t base = rng.next_u64();
  const Box box = ink_box(img);
  const double span = box.x1 - box.x0 + 1;
  const int width = law(laws.segment_width_base, laws.segment_width_gain, s);
  const int radius = law(laws.blotch_radius_base, laws.blotch_radius_gain, s);
  Scene sc = over(img);
  for (int i = 0, n = law(laws.segment_base, laws.segment_gain, s); i < n; ++i) {
    SeededRng r = child(base, "segment", i);
    random_segment(sc, box, r, 0.1 * span, 0.4 * span, width, 255);
  }
  for (int i = 0, n = law(laws.blotch_base, laws.blotch_gain, s); i < n; ++i) {
    SeededRng r = child(base, "blotch", i);
    sc.add(CircleShape{inside(box, r), static_cast<double>(radius), 0, 255, std::uint8_t{255}});
  }
  return render(sc);
}

Image snowy_picture(const Image& img, double s, SeededRng& rng, const Laws& laws) {
  check_severity(s);
  if (s == 0) return img;
  const std::uint64_t base = rng.next_u64();
  const Box box = ink_box(img);
  const double shorter = std::min(img.width, img.height);
  const double side_max = laws.rect_max_fraction * shorter;
  Scene sc = over(img);
  for (int i = 0, n = law(0, laws.rect_gain, s); i < n; ++i) {
    SeededRng r = child(base, "rect", i);
    const Point c = inside(box, r);
    const double w = r.uniform(0.2, 1.0) * side_max, h = r.uniform(0.2, 1.0) * side_max;
    sc.add(PolygonShape{{{c.x - w / 2, c.y - h / 2}, {c.x + w / 2, c.y - h / 2}, {c.x + w / 2, c.y + h / 2}, {c.x - w / 2, c.y + h / 2}},
                        std::uint8_t{255}});
  }
  const Box all{0, 0, img.width - 1, img.height - 1};
  for (int i = 0, n = law(0, laws.clutter_gain, s); i < n; ++i) {
    SeededRng r = child(base, "clutter", i);
    random_segment(sc, all, r, 0.03 * shorter, 0.08 * shorter, laws.clutter_width, 0);
  }
  return render(sc);
}

Image render_word(const std::string& word) {
  constexpr double size = 100, stroke = 9;
  const Point ext = text_extent(word, size, stroke);
  Scene sc(std::ceil(ext.x) + 80, 200);
  sc.add(TextShape{word, {sc.width() / 2, 100}, size, stroke, 0});
  return render(sc);
}

Cs1Item gen_cs1(const AssetLibrary& lib, std::size_t asset, double s, SeededRng& rng, const Laws& laws) {
  return {asset, s, occlude_silhouette(render_asset(lib.at(asset), kSilhouettePx), s, rng, laws)};
}

Cs2Item gen_cs2(const WordList& words, int min_len, int max_len, double s, SeededRng& rng, const Laws& laws) {
  const std::string word = words.sample(min_len, max_len, rng);
  return {word, s, conceal_word(render_word(word), s, rng, laws)};
}

Cs3Item gen_cs3(const AssetLibrary& lib, std::size_t asset, double s, SeededRng& rng, const Laws& laws) {
  return {asset, s, snowy_picture(render_asset(lib.at(asset), kSilhouettePx), s, rng, laws)};
}

}  // namespace visfactor::occlusion
