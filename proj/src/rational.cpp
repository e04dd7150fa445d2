#include "visfactor/rational.hpp"

#include <algorithm>
#include <stdexcept>

#include "visfactor/error.hpp"

namespace visfactor {

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Rational parse_rational(const std::string& text) {
  try {
    auto slash = text.find('/');
    if (slash == std::string::npos) return Rational(std::stoll(text));
    return Rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
  } catch (const std::exception&) {
    throw InvalidArgument("not a rational number: '" + text + "'");
  }
}

namespace exact {

Rational cross(const RPoint& a, const RPoint& b) { return a.x * b.y - a.y * b.x; }
Rational dot(const RPoint& a, const RPoint& b) { return a.x * b.x + a.y * b.y; }
Rational orient(const RPoint& a, const RPoint& b, const RPoint& c) { return cross(b - a, c - a); }

int sign(const Rational& r) {
  if (r.numerator() > 0) return 1;
  if (r.numerator() < 0) return -1;
  return 0;
}

Rational signed_area(const RPolygon& poly) {
  Rational twice{0};
  for (std::size_t i = 0; i < poly.size(); ++i) twice += cross(poly[i], poly[(i + 1) % poly.size()]);
  return twice / 2;
}

RPoint centroid(const RPolygon& poly) {
  Rational a = signed_area(poly);
  if (is_zero(a)) throw InvalidArgument("centroid of a degenerate polygon");
  Rational cx{0}, cy{0};
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const RPoint& p = poly[i];
    const RPoint& q = poly[(i + 1) % poly.size()];
    Rational c = cross(p, q);
    cx += (p.x + q.x) * c;
    cy += (p.y + q.y) * c;
  }
  return {cx / (a * 6), cy / (a * 6)};
}

RPolygon ccw(RPolygon poly) {
  if (signed_area(poly) < 0) std::reverse(poly.begin(), poly.end());
  return poly;
}

RPolygon simplify(const RPolygon& poly) {
  RPolygon out = poly;
  bool changed = true;
  while (changed && out.size() >= 3) {
    changed = false;
    for (std::size_t i = 0; i < out.size() && out.size() >= 3; ++i) {
      const RPoint& prev = out[(i + out.size() - 1) % out.size()];
      const RPoint& next = out[(i + 1) % out.size()];
      if (out[i] == next || is_zero(orient(prev, out[i], next))) {
        out.erase(out.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  if (out.size() < 3) out.clear();
  return out;
}

bool on_segment(const RPoint& p, const RPoint& a, const RPoint& b) {
  if (!is_zero(orient(a, b, p))) return false;
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

bool segments_intersect(const RPoint& a, const RPoint& b, const RPoint& c, const RPoint& d) {
  int d1 = sign(orient(c, d, a));
  int d2 = sign(orient(c, d, b));
  int d3 = sign(orient(a, b, c));
  int d4 = sign(orient(a, b, d));
  if (d1 * d2 < 0 && d3 * d4 < 0) return true;
  return on_segment(a, c, d) || on_segment(b, c, d) || on_segment(c, a, b) || on_segment(d, a, b);
}

std::optional<RPoint> line_intersection(const RPoint& a, const RPoint& b, const RPoint& c, const RPoint& d) {
  RPoint r = b - a;
  RPoint s = d - c;
  Rational denom = cross(r, s);
  if (is_zero(denom)) return std::nullopt;
  Rational t = cross(c - a, s) / denom;
  return RPoint{a.x + t * r.x, a.y + t * r.y};
}

Location locate(const RPoint& p, const RPolygon& poly) {
  const std::size_t n = poly.size();
  int winding = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const RPoint& a = poly[i];
    const RPoint& b = poly[(i + 1) % n];
    if (on_segment(p, a, b)) return Location::boundary;
    if (a.y <= p.y) {
      if (b.y > p.y && orient(a, b, p) > 0) ++winding;
    } else if (b.y <= p.y && orient(a, b, p) < 0) {
      --winding;
    }
  }
  return winding != 0 ? Location::inside : Location::outside;
}

RPolygon clip_convex(const RPolygon& poly, const RPoint& a, const RPoint& b, int keep_sign) {
  RPolygon out;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const RPoint& cur = poly[i];
    const RPoint& nxt = poly[(i + 1) % n];
    Rational sc = orient(a, b, cur) * keep_sign;
    Rational sn = orient(a, b, nxt) * keep_sign;
    if (sc >= 0) out.push_back(cur);
    if ((sc > 0 && sn < 0) || (sc < 0 && sn > 0)) {
      Rational t = sc / (sc - sn);
      out.push_back({cur.x + t * (nxt.x - cur.x), cur.y + t * (nxt.y - cur.y)});
    }
  }
  return simplify(out);
}

bool is_simple(const RPolygon& poly) {
  const std::size_t n = poly.size();
  if (n < 3 || is_zero(signed_area(poly))) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const RPoint& a = poly[i];
    const RPoint& b = poly[(i + 1) % n];
    if (a == b) return false;
    for (std::size_t j = i + 1; j < n; ++j) {
      const RPoint& c = poly[j];
      const RPoint& d = poly[(j + 1) % n];
      bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) {
        // Shared vertex only; collinear edges must not fold back over each other.
        const RPoint& shared = (j == i + 1) ? b : a;
        const RPoint& far1 = (j == i + 1) ? a : b;
        const RPoint& far2 = (j == i + 1) ? d : c;
        if (is_zero(orient(shared, far1, far2)) && dot(far1 - shared, far2 - shared) > 0) return false;
        continue;
      }
      if (segments_intersect(a, b, c, d)) return false;
    }
  }
  return true;
}

bool is_convex(const RPolygon& poly) {
  if (!is_simple(poly)) return false;
  int s = 0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    int o = sign(orient(poly[i], poly[(i + 1) % n], poly[(i + 2) % n]));
    if (o == 0) continue;
    if (s == 0) s = o;
    if (o != s) return false;
  }
  return true;
}

}  // namespace exact
}  // namespace visfactor
