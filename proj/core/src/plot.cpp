#include "fdcam/plot.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "fdcam/errors.hpp"

namespace fdcam {
namespace {

constexpr int kGlyphW = 5;
constexpr int kGlyphH = 7;

// 5x7 glyph rows, bit 4 = leftmost column.
struct Glyph {
  char c;
  std::uint8_t rows[kGlyphH];
};

constexpr Glyph kFont[] = {
    {' ', {0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00}},
    {'.', {0x00, 0x00, 0x00, 0x00, 0x00, 0x0C, 0x0C}},
    {',', {0x00, 0x00, 0x00, 0x00, 0x0C, 0x04, 0x08}},
    {'-', {0x00, 0x00, 0x00, 0x1F, 0x00, 0x00, 0x00}},
    {'=', {0x00, 0x00, 0x1F, 0x00, 0x1F, 0x00, 0x00}},
    {':', {0x00, 0x0C, 0x0C, 0x00, 0x0C, 0x0C, 0x00}},
    {'%', {0x18, 0x19, 0x02, 0x04, 0x08, 0x13, 0x03}},
    {'/', {0x00, 0x01, 0x02, 0x04, 0x08, 0x10, 0x00}},
    {'[', {0x0E, 0x08, 0x08, 0x08, 0x08, 0x08, 0x0E}},
    {']', {0x0E, 0x02, 0x02, 0x02, 0x02, 0x02, 0x0E}},
    {'(', {0x02, 0x04, 0x08, 0x08, 0x08, 0x04, 0x02}},
    {')', {0x08, 0x04, 0x02, 0x02, 0x02, 0x04, 0x08}},
    {'+', {0x00, 0x04, 0x04, 0x1F, 0x04, 0x04, 0x00}},
    {'_', {0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x1F}},
    {'0', {0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E}},
    {'1', {0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E}},
    {'2', {0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F}},
    {'3', {0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E}},
    {'4', {0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02}},
    {'5', {0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E}},
    {'6', {0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E}},
    {'7', {0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08}},
    {'8', {0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E}},
    {'9', {0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C}},
    {'A', {0x0E, 0x11, 0x11, 0x11, 0x1F, 0x11, 0x11}},
    {'B', {0x1E, 0x11, 0x11, 0x1E, 0x11, 0x11, 0x1E}},
    {'C', {0x0E, 0x11, 0x10, 0x10, 0x10, 0x11, 0x0E}},
    {'D', {0x1C, 0x12, 0x11, 0x11, 0x11, 0x12, 0x1C}},
    {'E', {0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x1F}},
    {'F', {0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x10}},
    {'G', {0x0E, 0x11, 0x10, 0x17, 0x11, 0x11, 0x0F}},
    {'H', {0x11, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11}},
    {'I', {0x0E, 0x04, 0x04, 0x04, 0x04, 0x04, 0x0E}},
    {'J', {0x07, 0x02, 0x02, 0x02, 0x02, 0x12, 0x0C}},
    {'K', {0x11, 0x12, 0x14, 0x18, 0x14, 0x12, 0x11}},
    {'L', {0x10, 0x10, 0x10, 0x10, 0x10, 0x10, 0x1F}},
    {'M', {0x11, 0x1B, 0x15, 0x15, 0x11, 0x11, 0x11}},
    {'N', {0x11, 0x11, 0x19, 0x15, 0x13, 0x11, 0x11}},
    {'O', {0x0E, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E}},
    {'P', {0x1E, 0x11, 0x11, 0x1E, 0x10, 0x10, 0x10}},
    {'Q', {0x0E, 0x11, 0x11, 0x11, 0x15, 0x12, 0x0D}},
    {'R', {0x1E, 0x11, 0x11, 0x1E, 0x14, 0x12, 0x11}},
    {'S', {0x0F, 0x10, 0x10, 0x0E, 0x01, 0x01, 0x1E}},
    {'T', {0x1F, 0x04, 0x04, 0x04, 0x04, 0x04, 0x04}},
    {'U', {0x11, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E}},
    {'V', {0x11, 0x11, 0x11, 0x11, 0x11, 0x0A, 0x04}},
    {'W', {0x11, 0x11, 0x11, 0x15, 0x15, 0x15, 0x0A}},
    {'X', {0x11, 0x11, 0x0A, 0x04, 0x0A, 0x11, 0x11}},
    {'Y', {0x11, 0x11, 0x11, 0x0A, 0x04, 0x04, 0x04}},
    {'Z', {0x1F, 0x01, 0x02, 0x04, 0x08, 0x10, 0x1F}},
};

const Glyph* find_glyph(char c) {
  const char upper = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (const Glyph& g : kFont) {
    if (g.c == upper) return &g;
  }
  return nullptr;
}

void put_pixel(Tensor3& canvas, int x, int y, Rgb color) {
  if (x < 0 || y < 0 || x >= canvas.width || y >= canvas.height) return;
  canvas.at(0, y, x) = color.r / 255.0;
  canvas.at(1, y, x) = color.g / 255.0;
  canvas.at(2, y, x) = color.b / 255.0;
}

void draw_line(Tensor3& canvas, int x0, int y0, int x1, int y1, Rgb color) {
  const int dx = std::abs(x1 - x0);
  const int dy = -std::abs(y1 - y0);
  const int sx = x0 < x1 ? 1 : -1;
  const int sy = y0 < y1 ? 1 : -1;
  int err = dx + dy;
  while (true) {
    put_pixel(canvas, x0, y0, color);
    if (x0 == x1 && y0 == y1) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
  }
}

std::string format_auc(double v) {
  std::ostringstream oss;
  oss.precision(4);
  oss << std::fixed << v;
  return oss.str();
}

}  // namespace

void draw_text(Tensor3& canvas, int x, int y, const std::string& text, Rgb color,
               int scale) {
  int cx = x;
  for (char c : text) {
    const Glyph* glyph = find_glyph(c);
    if (glyph) {
      for (int row = 0; row < kGlyphH; ++row) {
        for (int col = 0; col < kGlyphW; ++col) {
          if (glyph->rows[row] & (1 << (kGlyphW - 1 - col))) {
            for (int sy = 0; sy < scale; ++sy) {
              for (int sx = 0; sx < scale; ++sx) {
                put_pixel(canvas, cx + col * scale + sx, y + row * scale + sy, color);
              }
            }
          }
        }
      }
    }
    cx += (kGlyphW + 1) * scale;
  }
}

Tensor3 render_curve_plot(const PerturbationCurve& deletion,
                          const PerturbationCurve& insertion, double deletion_auc,
                          double insertion_auc, const std::string& title) {
  constexpr int kWidth = 480;
  constexpr int kHeight = 360;
  constexpr int kLeft = 48;
  constexpr int kRight = 16;
  constexpr int kTop = 28;
  constexpr int kBottom = 40;
  const Rgb black{20, 20, 20};
  const Rgb gray{205, 205, 205};
  const Rgb red{200, 40, 40};
  const Rgb blue{40, 70, 200};

  Tensor3 canvas(3, kHeight, kWidth, 1.0);
  const int plot_w = kWidth - kLeft - kRight;
  const int plot_h = kHeight - kTop - kBottom;

  auto px = [&](double fraction) {
    return kLeft + static_cast<int>(std::lround(fraction * (plot_w - 1)));
  };
  auto py = [&](double score) {
    const double v = std::min(1.0, std::max(0.0, score));
    return kTop + plot_h - 1 - static_cast<int>(std::lround(v * (plot_h - 1)));
  };

  for (double tick = 0.0; tick <= 1.0001; tick += 0.25) {
    draw_line(canvas, px(0.0), py(tick), px(1.0), py(tick), gray);
    draw_line(canvas, px(tick), py(0.0), px(tick), py(1.0), gray);
  }
  draw_line(canvas, px(0.0), py(0.0), px(1.0), py(0.0), black);
  draw_line(canvas, px(0.0), py(0.0), px(0.0), py(1.0), black);
  draw_line(canvas, px(1.0), py(0.0), px(1.0), py(1.0), black);
  draw_line(canvas, px(0.0), py(1.0), px(1.0), py(1.0), black);

  draw_text(canvas, px(0.0) - 2, kHeight - kBottom + 8, "0", black);
  draw_text(canvas, px(0.5) - 8, kHeight - kBottom + 8, "0.5", black);
  draw_text(canvas, px(1.0) - 4, kHeight - kBottom + 8, "1", black);
  draw_text(canvas, 8, py(0.0) - 3, "0", black);
  draw_text(canvas, 8, py(0.5) - 3, "0.5", black);
  draw_text(canvas, 8, py(1.0) - 3, "1", black);
  draw_text(canvas, kLeft + plot_w / 2 - 45, kHeight - 14, "PIXEL FRACTION", black);
  draw_text(canvas, kLeft, 8, title, black);

  auto draw_curve = [&](const PerturbationCurve& curve, Rgb color) {
    for (std::size_t i = 1; i < curve.fractions.size(); ++i) {
      draw_line(canvas, px(curve.fractions[i - 1]), py(curve.scores[i - 1]),
                px(curve.fractions[i]), py(curve.scores[i]), color);
    }
  };
  draw_curve(deletion, red);
  draw_curve(insertion, blue);

  const int legend_x = kLeft + 10;
  const int legend_y = kTop + 8;
  draw_line(canvas, legend_x, legend_y + 3, legend_x + 14, legend_y + 3, red);
  draw_text(canvas, legend_x + 20, legend_y, "DELETION AUC=" + format_auc(deletion_auc),
            black);
  draw_line(canvas, legend_x, legend_y + 15, legend_x + 14, legend_y + 15, blue);
  draw_text(canvas, legend_x + 20, legend_y + 12,
            "INSERTION AUC=" + format_auc(insertion_auc), black);
  return canvas;
}

}  // namespace fdcam
