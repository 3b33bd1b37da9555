#pragma once

#include <string>

#include "fdcam/tensor.hpp"

namespace fdcam {

// Decodes any common image file to a 3 x H x W RGB tensor in [0, 1].
Tensor3 load_image_rgb(const std::string& path);

// Writes an RGB tensor (values clamped to [0, 1]) as an 8-bit PNG.
void save_image_rgb8(const std::string& path, const Tensor3& image);

// Lossless saliency serialization: the [0, 1] map quantized to 16-bit
// grayscale PNG.
void save_saliency_png16(const std::string& path, const Grid& map);
Grid load_saliency_png16(const std::string& path);

}  // namespace fdcam
