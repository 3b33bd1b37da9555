#pragma once

#include <string>
#include <vector>

namespace fdcam {

// Axis-aligned box in pixel coordinates, inclusive-exclusive:
// x_min <= x < x_max, y_min <= y < y_max.
struct BoundingBox {
  std::string label;
  int x_min = 0, y_min = 0, x_max = 0, y_max = 0;

  int width() const { return x_max - x_min; }
  int height() const { return y_max - y_min; }
  bool contains(int x, int y) const {
    return x >= x_min && x < x_max && y >= y_min && y < y_max;
  }
};

void validate_box(const BoundingBox& box, int image_width, int image_height);

struct AnnotatedImage {
  std::string image;  // path, relative to the annotation file's directory
  std::vector<BoundingBox> boxes;
};

// Annotation document: a JSON array of {"image": path, "boxes": [{"label",
// "x_min", "y_min", "x_max", "y_max"}]} records.
std::vector<AnnotatedImage> load_annotations(const std::string& path);
void save_annotations(const std::string& path, const std::vector<AnnotatedImage>& records);

// Maps one VOC-style XML annotation (1-based inclusive bndbox corners) to the
// JSON record convention above (0-based, inclusive-exclusive).
AnnotatedImage import_voc_xml(const std::string& xml_path);

// Rescales a box from one image size to another (floor on the lower corner,
// ceil on the upper, clamped; never collapses below 1px).
BoundingBox scale_box(const BoundingBox& box, int from_width, int from_height,
                      int to_width, int to_height);

}  // namespace fdcam
