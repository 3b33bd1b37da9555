#include "fdcam/image_io.hpp"

#include <algorithm>
#include <cmath>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "fdcam/errors.hpp"

namespace fdcam {
namespace {

// Pinned so rebuilt artifacts stay byte-identical across OpenCV defaults.
const std::vector<int> kPngParams = {cv::IMWRITE_PNG_COMPRESSION, 3};

std::uint8_t to_u8(double v) {
  v = std::min(1.0, std::max(0.0, v));
  return static_cast<std::uint8_t>(std::lround(255.0 * v));
}

}  // namespace

Tensor3 load_image_rgb(const std::string& path) {
  cv::Mat bgr = cv::imread(path, cv::IMREAD_COLOR);
  if (bgr.empty()) {
    throw InputError("cannot read image: " + path);
  }
  Tensor3 out(3, bgr.rows, bgr.cols);
  for (int y = 0; y < bgr.rows; ++y) {
    const cv::Vec3b* row = bgr.ptr<cv::Vec3b>(y);
    for (int x = 0; x < bgr.cols; ++x) {
      out.at(0, y, x) = row[x][2] / 255.0;
      out.at(1, y, x) = row[x][1] / 255.0;
      out.at(2, y, x) = row[x][0] / 255.0;
    }
  }
  return out;
}

void save_image_rgb8(const std::string& path, const Tensor3& image) {
  require(image.channels == 3, "save_image_rgb8: RGB image required");
  cv::Mat bgr(image.height, image.width, CV_8UC3);
  for (int y = 0; y < image.height; ++y) {
    cv::Vec3b* row = bgr.ptr<cv::Vec3b>(y);
    for (int x = 0; x < image.width; ++x) {
      row[x][0] = to_u8(image.at(2, y, x));
      row[x][1] = to_u8(image.at(1, y, x));
      row[x][2] = to_u8(image.at(0, y, x));
    }
  }
  if (!cv::imwrite(path, bgr, kPngParams)) {
    throw InputError("cannot write image: " + path);
  }
}

void save_saliency_png16(const std::string& path, const Grid& map) {
  require(map.height >= 1 && map.width >= 1, "save_saliency_png16: empty map");
  cv::Mat gray(map.height, map.width, CV_16UC1);
  for (int y = 0; y < map.height; ++y) {
    auto* row = gray.ptr<std::uint16_t>(y);
    for (int x = 0; x < map.width; ++x) {
      const double v = std::min(1.0, std::max(0.0, map.at(y, x)));
      row[x] = static_cast<std::uint16_t>(std::lround(65535.0 * v));
    }
  }
  if (!cv::imwrite(path, gray, kPngParams)) {
    throw InputError("cannot write saliency map: " + path);
  }
}

Grid load_saliency_png16(const std::string& path) {
  cv::Mat gray = cv::imread(path, cv::IMREAD_ANYDEPTH | cv::IMREAD_GRAYSCALE);
  if (gray.empty()) {
    throw InputError("cannot read saliency map: " + path);
  }
  if (gray.type() != CV_16UC1) {
    gray.convertTo(gray, CV_16UC1, 257.0);  // 8-bit fallback
  }
  Grid out(gray.rows, gray.cols);
  for (int y = 0; y < gray.rows; ++y) {
    const auto* row = gray.ptr<std::uint16_t>(y);
    for (int x = 0; x < gray.cols; ++x) {
      out.at(y, x) = row[x] / 65535.0;
    }
  }
  return out;
}

}  // namespace fdcam
