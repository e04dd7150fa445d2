#include <algorithm>
#include <cmath>
#include <numeric>

#include <opencv2/core.hpp>
#include <opencv2/imgproc.hpp>

#include "visfactor/error.hpp"
#include "visfactor/scene.hpp"

namespace visfactor {
namespace {

constexpr int kShift = 4;
constexpr double kFixed = 1 << kShift;

struct Frame {
  double sx;
  double sy;
  double stroke_scale() const { return 0.5 * (sx + sy); }
  cv::Point fixed(geom::Point p) const {
    return {static_cast<int>(std::lround(p.x * sx * kFixed)), static_cast<int>(std::lround(p.y * sy * kFixed))};
  }
  int thickness(double w) const { return std::max(1, static_cast<int>(std::lround(w * stroke_scale()))); }
};

// Splits a polyline into dashes of length `period` separated by equal gaps,
// measured along the whole path.
std::vector<std::vector<geom::Point>> dash(const std::vector<geom::Point>& pts, bool closed, double period) {
  std::vector<std::vector<geom::Point>> out;
  std::vector<geom::Point> path = pts;
  if (closed && !pts.empty()) path.push_back(pts.front());
  double start = 0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const geom::Point a = path[i], b = path[i + 1];
    const double len = geom::distance(a, b);
    if (len <= 0) continue;
    for (auto k = static_cast<long>(std::floor(start / (2 * period)));; ++k) {
      const double d0 = std::max(start, k * 2 * period), d1 = std::min(start + len, k * 2 * period + period);
      if (k * 2 * period >= start + len) break;
      if (d1 > d0) out.push_back({a + ((d0 - start) / len) * (b - a), a + ((d1 - start) / len) * (b - a)});
    }
    start += len;
  }
  return out;
}

void draw(cv::Mat& m, const Frame& f, const LineShape& s) {
  if (s.points.size() < 2) return;
  auto stroke = [&](const std::vector<geom::Point>& pts, bool closed) {
    std::vector<cv::Point> p;
    p.reserve(pts.size());
    for (auto q : pts) p.push_back(f.fixed(q));
    cv::polylines(m, p, closed, cv::Scalar(s.color), f.thickness(s.width), cv::LINE_8, kShift);
  };
  if (!s.dashed) {
    stroke(s.points, s.closed);
    return;
  }
  for (const auto& piece : dash(s.points, s.closed, 4 * s.width)) stroke(piece, false);
}

void draw(cv::Mat& m, const Frame& f, const CircleShape& s) {
  const int r = static_cast<int>(std::lround(s.radius * f.stroke_scale() * kFixed));
  if (s.fill) cv::circle(m, f.fixed(s.center), r, cv::Scalar(*s.fill), cv::FILLED, cv::LINE_8, kShift);
  if (s.width > 0) cv::circle(m, f.fixed(s.center), r, cv::Scalar(s.color), f.thickness(s.width), cv::LINE_8, kShift);
}

void draw(cv::Mat& m, const Frame& f, const PolygonShape& s) {
  if (s.points.size() < 3) return;
  std::vector<cv::Point> p;
  p.reserve(s.points.size());
  for (auto q : s.points) p.push_back(f.fixed(q));
  if (s.fill) {
    std::vector<std::vector<cv::Point>> polys{p};
    cv::fillPoly(m, polys, cv::Scalar(*s.fill), cv::LINE_8, kShift);
  }
  if (s.width > 0) cv::polylines(m, p, true, cv::Scalar(s.color), f.thickness(s.width), cv::LINE_8, kShift);
}

void draw(cv::Mat& m, const Frame& f, const TileShape& s) {
  if (s.image.empty()) return;
  const cv::Mat tile(s.image.height, s.image.width, CV_8UC1, const_cast<std::uint8_t*>(s.image.pixels.data()));
  const double ox = s.origin.x * f.sx, oy = s.origin.y * f.sy;
  const bool axis_aligned = s.u.y == 0 && s.v.x == 0 && std::abs(s.u.x * f.sx - s.image.width) < 1e-9 &&
                            std::abs(s.v.y * f.sy - s.image.height) < 1e-9 && ox == std::floor(ox) &&
                            oy == std::floor(oy);
  if (axis_aligned) {
    const int x0 = static_cast<int>(ox), y0 = static_cast<int>(oy);
    for (int r = 0; r < tile.rows; ++r) {
      const int y = y0 + r;
      if (y < 0 || y >= m.rows) continue;
      for (int c = 0; c < tile.cols; ++c) {
        const int x = x0 + c;
        if (x < 0 || x >= m.cols) continue;
        auto src = tile.at<std::uint8_t>(r, c);
        auto& dst = m.at<std::uint8_t>(y, x);
        dst = s.blend == TileBlend::replace ? src : std::min(dst, src);
      }
    }
    return;
  }
  cv::Mat affine = (cv::Mat_<double>(2, 3) << s.u.x * f.sx / tile.cols, s.v.x * f.sx / tile.rows, ox,
                    s.u.y * f.sy / tile.cols, s.v.y * f.sy / tile.rows, oy);
  cv::Mat warped, mask;
  cv::warpAffine(tile, warped, affine, m.size(), cv::INTER_NEAREST, cv::BORDER_CONSTANT, cv::Scalar(255));
  cv::Mat ones(tile.size(), CV_8UC1, cv::Scalar(255));
  cv::warpAffine(ones, mask, affine, m.size(), cv::INTER_NEAREST, cv::BORDER_CONSTANT, cv::Scalar(0));
  if (s.blend == TileBlend::replace) {
    warped.copyTo(m, mask);
  } else {
    cv::Mat darker;
    cv::min(m, warped, darker);
    darker.copyTo(m, mask);
  }
}

void draw(cv::Mat& m, const Frame& f, const TextShape& s) {
  if (s.text.empty()) return;
  constexpr int font = cv::FONT_HERSHEY_SIMPLEX;
  const double scale = s.size * f.stroke_scale() / 22.0;
  const int thick = f.thickness(s.width);
  int baseline = 0;
  cv::Size sz = cv::getTextSize(s.text, font, scale, thick, &baseline);
  cv::Point org(static_cast<int>(std::lround(s.center.x * f.sx - sz.width / 2.0)),
                static_cast<int>(std::lround(s.center.y * f.sy + sz.height / 2.0)));
  cv::putText(m, s.text, org, font, scale, cv::Scalar(s.color), thick, cv::LINE_8);
}

}  // namespace

geom::Point text_extent(const std::string& text, double size, double width) {
  int baseline = 0;
  const int thick = std::max(1, static_cast<int>(std::lround(width)));
  cv::Size sz = cv::getTextSize(text, cv::FONT_HERSHEY_SIMPLEX, size / 22.0, thick, &baseline);
  return {static_cast<double>(sz.width), static_cast<double>(sz.height + baseline)};
}

Image render(const Scene& scene, int width_px, int height_px) {
  if (width_px <= 0 || height_px <= 0 || scene.width() <= 0 || scene.height() <= 0)
    throw InvalidArgument("render: canvas must have positive area");
  cv::Mat m(height_px, width_px, CV_8UC1, cv::Scalar(255));
  const Frame frame{width_px / scene.width(), height_px / scene.height()};
  std::vector<std::size_t> order(scene.primitives().size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scene.primitives()[a].layer < scene.primitives()[b].layer;
  });
  for (std::size_t i : order) std::visit([&](const auto& s) { draw(m, frame, s); }, scene.primitives()[i].shape);
  Image out(width_px, height_px);
  std::copy(m.data, m.data + out.pixels.size(), out.pixels.begin());
  return out;
}

}  // namespace visfactor
