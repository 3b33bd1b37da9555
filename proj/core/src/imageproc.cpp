#include "fdcam/imageproc.hpp"

#include <algorithm>
#include <cmath>

#include "fdcam/cam.hpp"
#include "fdcam/errors.hpp"

namespace fdcam {
namespace {

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

}  // namespace

Tensor3 resize_bilinear(const Tensor3& image, int out_height, int out_width) {
  require(image.channels >= 1 && image.height >= 1 && image.width >= 1,
          "resize_bilinear: empty image");
  require(out_height >= 1 && out_width >= 1, "resize_bilinear: empty output");
  if (out_height == image.height && out_width == image.width) return image;

  Tensor3 out(image.channels, out_height, out_width);
  for (int c = 0; c < image.channels; ++c) {
    Grid plane = image.channel(c);
    Grid scaled = bilinear_upsample(plane, out_height, out_width);
    std::copy(scaled.values.begin(), scaled.values.end(), out.channel_data(c));
  }
  return out;
}

Tensor3 gaussian_blur(const Tensor3& image, int kernel_size, double sigma) {
  require(kernel_size >= 1 && kernel_size % 2 == 1,
          "gaussian_blur: kernel size must be odd and positive");
  require(sigma > 0.0, "gaussian_blur: sigma must be positive");
  const int radius = kernel_size / 2;
  std::vector<double> kernel(kernel_size);
  double sum = 0.0;
  for (int t = -radius; t <= radius; ++t) {
    kernel[t + radius] = std::exp(-0.5 * (t * t) / (sigma * sigma));
    sum += kernel[t + radius];
  }
  for (double& v : kernel) v /= sum;

  const int h = image.height;
  const int w = image.width;
  Tensor3 horizontal(image.channels, h, w);
  for (int c = 0; c < image.channels; ++c) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        double acc = 0.0;
        for (int t = -radius; t <= radius; ++t) {
          const int xx = std::clamp(x + t, 0, w - 1);
          acc += kernel[t + radius] * image.at(c, y, xx);
        }
        horizontal.at(c, y, x) = acc;
      }
    }
  }
  Tensor3 out(image.channels, h, w);
  for (int c = 0; c < image.channels; ++c) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        double acc = 0.0;
        for (int t = -radius; t <= radius; ++t) {
          const int yy = std::clamp(y + t, 0, h - 1);
          acc += kernel[t + radius] * horizontal.at(c, yy, x);
        }
        out.at(c, y, x) = acc;
      }
    }
  }
  return out;
}

Rgb jet_color(double v) {
  v = clamp01(v);
  const double r = clamp01(1.5 - std::abs(4.0 * v - 3.0));
  const double g = clamp01(1.5 - std::abs(4.0 * v - 2.0));
  const double b = clamp01(1.5 - std::abs(4.0 * v - 1.0));
  return Rgb{static_cast<std::uint8_t>(std::lround(255.0 * r)),
             static_cast<std::uint8_t>(std::lround(255.0 * g)),
             static_cast<std::uint8_t>(std::lround(255.0 * b))};
}

Tensor3 overlay_heatmap(const Tensor3& image, const Grid& saliency, double alpha) {
  require(image.channels == 3, "overlay_heatmap: RGB image required");
  require(image.height == saliency.height && image.width == saliency.width,
          "overlay_heatmap: saliency shape must match the image");
  require(alpha >= 0.0 && alpha <= 1.0, "overlay_heatmap: alpha must be in [0, 1]");
  Tensor3 out(3, image.height, image.width);
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) {
      const Rgb heat = jet_color(saliency.at(y, x));
      const double hr = heat.r / 255.0;
      const double hg = heat.g / 255.0;
      const double hb = heat.b / 255.0;
      out.at(0, y, x) = (1.0 - alpha) * clamp01(image.at(0, y, x)) + alpha * hr;
      out.at(1, y, x) = (1.0 - alpha) * clamp01(image.at(1, y, x)) + alpha * hg;
      out.at(2, y, x) = (1.0 - alpha) * clamp01(image.at(2, y, x)) + alpha * hb;
    }
  }
  return out;
}

Grid upscale_nearest(const Grid& map, int factor) {
  require(factor >= 1, "upscale_nearest: factor must be positive");
  Grid out(map.height * factor, map.width * factor);
  for (int y = 0; y < out.height; ++y) {
    for (int x = 0; x < out.width; ++x) {
      out.at(y, x) = map.at(y / factor, x / factor);
    }
  }
  return out;
}

Tensor3 contact_sheet(const std::vector<std::vector<Grid>>& rows, int upscale_factor) {
  require(!rows.empty(), "contact_sheet: no rows");
  constexpr int kGutter = 2;
  int cell_h = 0, cell_w = 0, max_cols = 0;
  for (const auto& row : rows) {
    require(!row.empty(), "contact_sheet: empty row");
    max_cols = std::max(max_cols, static_cast<int>(row.size()));
    for (const Grid& cell : row) {
      require(cell_h == 0 || (cell.height == cell_h && cell.width == cell_w),
              "contact_sheet: cells must share one shape");
      cell_h = cell.height;
      cell_w = cell.width;
    }
  }
  const int ch = cell_h * upscale_factor;
  const int cw = cell_w * upscale_factor;
  const int total_h =
      static_cast<int>(rows.size()) * ch + (static_cast<int>(rows.size()) + 1) * kGutter;
  const int total_w = max_cols * cw + (max_cols + 1) * kGutter;
  Tensor3 sheet(3, total_h, total_w, 1.0);  // white background

  for (std::size_t r = 0; r < rows.size(); ++r) {
    const int oy = kGutter + static_cast<int>(r) * (ch + kGutter);
    for (std::size_t cidx = 0; cidx < rows[r].size(); ++cidx) {
      const int ox = kGutter + static_cast<int>(cidx) * (cw + kGutter);
      const Grid normalized = min_max_normalize_map(rows[r][cidx]);
      const Grid cell = upscale_nearest(normalized, upscale_factor);
      for (int y = 0; y < ch; ++y) {
        for (int x = 0; x < cw; ++x) {
          const Rgb color = jet_color(cell.at(y, x));
          sheet.at(0, oy + y, ox + x) = color.r / 255.0;
          sheet.at(1, oy + y, ox + x) = color.g / 255.0;
          sheet.at(2, oy + y, ox + x) = color.b / 255.0;
        }
      }
    }
  }
  return sheet;
}

}  // namespace fdcam
