#pragma once

#include <string>

#include "fdcam/imageproc.hpp"
#include "fdcam/metrics.hpp"
#include "fdcam/tensor.hpp"

namespace fdcam {

// Minimal deterministic raster text, 5x7 per glyph (uppercase, digits and a
// little punctuation; lowercase maps to uppercase).
void draw_text(Tensor3& canvas, int x, int y, const std::string& text, Rgb color,
               int scale = 1);

// Renders score-vs-fraction curves for one image (deletion red, insertion
// blue) with AUC values in the legend.
Tensor3 render_curve_plot(const PerturbationCurve& deletion,
                          const PerturbationCurve& insertion, double deletion_auc,
                          double insertion_auc, const std::string& title);

}  // namespace fdcam
