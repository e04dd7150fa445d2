#include "visfactor/image.hpp"

#include <fstream>
#include <iterator>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "visfactor/error.hpp"

namespace visfactor {

Image::Image(int w, int h, std::uint8_t fill)
    : width(w), height(h), pixels(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

Image Image::crop(int x, int y, int w, int h) const {
  if (x < 0 || y < 0 || w < 0 || h < 0 || x + w > width || y + h > height)
    throw InvalidArgument("crop window outside image");
  Image out(w, h);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) out.at(c, r) = at(x + c, y + r);
  return out;
}

Image Image::rotated(int k) const {
  k = ((k % 4) + 4) % 4;
  if (k == 0) return *this;
  Image out = (k == 2) ? Image(width, height) : Image(height, width);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      const std::uint8_t p = at(x, y);
      if (k == 1) out.at(height - 1 - y, x) = p;
      else if (k == 2) out.at(width - 1 - x, height - 1 - y) = p;
      else out.at(y, width - 1 - x) = p;
    }
  return out;
}

std::size_t count_dark(const Image& img, std::uint8_t threshold) {
  std::size_t n = 0;
  for (auto p : img.pixels) n += p < threshold;
  return n;
}

std::vector<std::uint8_t> encode_png(const Image& img) {
  if (img.empty()) throw InvalidArgument("cannot encode an empty image");
  cv::Mat m(img.height, img.width, CV_8UC1, const_cast<std::uint8_t*>(img.pixels.data()));
  std::vector<std::uint8_t> out;
  const std::vector<int> params{cv::IMWRITE_PNG_COMPRESSION, 6, cv::IMWRITE_PNG_STRATEGY, cv::IMWRITE_PNG_STRATEGY_DEFAULT};
  if (!cv::imencode(".png", m, out, params)) throw Error("PNG encoding failed");
  return out;
}

Image decode_png(const std::vector<std::uint8_t>& bytes) {
  cv::Mat m = cv::imdecode(bytes, cv::IMREAD_GRAYSCALE);
  if (m.empty()) throw Error("PNG decoding failed");
  Image img(m.cols, m.rows);
  for (int r = 0; r < m.rows; ++r)
    for (int c = 0; c < m.cols; ++c) img.at(c, r) = m.at<std::uint8_t>(r, c);
  return img;
}

void write_png(const Image& img, const std::filesystem::path& path) {
  auto bytes = encode_png(img);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

Image read_png(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot read " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return decode_png(bytes);
}

}  // namespace visfactor
