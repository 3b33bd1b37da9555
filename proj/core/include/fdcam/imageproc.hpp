#pragma once

#include <cstdint>
#include <vector>

#include "fdcam/tensor.hpp"

namespace fdcam {

// Corner-aligned bilinear resampling of every channel; works for both up-
// and down-scaling. Identical sizes reproduce the input exactly.
Tensor3 resize_bilinear(const Tensor3& image, int out_height, int out_width);

// Separable Gaussian blur with replicated borders. `kernel_size` must be odd.
Tensor3 gaussian_blur(const Tensor3& image, int kernel_size, double sigma);

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
};

// Classic jet-style colormap over [0, 1].
Rgb jet_color(double v);

// Alpha-blends the jet-colored saliency over the image; both in [0, 1].
Tensor3 overlay_heatmap(const Tensor3& image, const Grid& saliency, double alpha = 0.5);

// Nearest-neighbour upscale by an integer factor (for contact sheets).
Grid upscale_nearest(const Grid& map, int factor);

// Lays the jet-colored, per-cell normalized maps out in rows; `rows` holds
// one list of cell grids per row. Cells are separated by 2px white gutters.
Tensor3 contact_sheet(const std::vector<std::vector<Grid>>& rows, int upscale_factor);

}  // namespace fdcam
