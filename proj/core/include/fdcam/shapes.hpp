#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fdcam/annotations.hpp"
#include "fdcam/rng.hpp"
#include "fdcam/tensor.hpp"

namespace fdcam {

// Class labels of the synthetic shapes dataset; the index is the class.
const std::vector<std::string>& shape_class_names();
int shape_class_index(const std::string& label);

struct ShapesDatasetSpec {
  int image_size = 32;
  int samples_per_class = 100;
  std::uint64_t seed = 0;
};

// One image with exactly one solid shape on a solid background and the tight
// bounding box of the shape's pixels.
struct ShapeSample {
  Tensor3 image;
  int label = 0;
  BoundingBox box;
};

ShapeSample make_shape_sample(int image_size, int label, Rng& rng);

struct ShapesDataset {
  ShapesDatasetSpec spec;
  std::vector<ShapeSample> samples;
  std::vector<int> train_indices;
  std::vector<int> val_indices;
};

// Deterministic generation from the seed; the last 20% of each class forms
// the validation split.
ShapesDataset generate_shapes_dataset(const ShapesDatasetSpec& spec);

// Writes images/, annotations.json, split.json and dataset.json. A non-empty
// `config_json` (a JSON object string) is embedded in dataset.json.
void write_shapes_dataset(const ShapesDataset& dataset, const std::string& directory,
                          const std::string& config_json = "");

// On-disk dataset (as produced by write_shapes_dataset or hand-assembled in
// the same layout), loaded back into memory.
struct LoadedDataset {
  int image_size = 0;
  std::vector<std::string> class_names;
  std::vector<std::string> names;  // per sample, the annotation "image" field
  std::vector<ShapeSample> samples;
  std::vector<int> train_indices;
  std::vector<int> val_indices;
};

LoadedDataset load_dataset(const std::string& directory);

}  // namespace fdcam
