#include "fdcam/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fdcam/errors.hpp"
#include "fdcam/image_io.hpp"

namespace fdcam {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct Color {
  double r, g, b;
};

double color_distance2(const Color& a, const Color& b) {
  const double dr = a.r - b.r;
  const double dg = a.g - b.g;
  const double db = a.b - b.b;
  return dr * dr + dg * dg + db * db;
}

Color random_color(Rng& rng) { return Color{rng.uniform(), rng.uniform(), rng.uniform()}; }

}  // namespace

const std::vector<std::string>& shape_class_names() {
  static const std::vector<std::string> names = {"square", "circle", "triangle"};
  return names;
}

int shape_class_index(const std::string& label) {
  const auto& names = shape_class_names();
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == label) return static_cast<int>(i);
  }
  throw InputError("unknown shape class '" + label + "'");
}

ShapeSample make_shape_sample(int image_size, int label, Rng& rng) {
  require(image_size >= 16, "make_shape_sample: image size too small");
  require(label >= 0 && label < 3, "make_shape_sample: label out of range");

  const Color bg = random_color(rng);
  Color fg = random_color(rng);
  // Resample until the shape clearly stands out from the background.
  while (color_distance2(fg, bg) < 0.5) fg = random_color(rng);

  // Shape extent between ~3/8 and ~2/3 of the image, fully inside.
  const int min_extent = std::max(8, 3 * image_size / 8);
  const int max_extent = 2 * image_size / 3;
  const int extent = rng.uniform_int(min_extent, max_extent);
  const int x0 = rng.uniform_int(1, image_size - extent - 1);
  const int y0 = rng.uniform_int(1, image_size - extent - 1);

  ShapeSample sample;
  sample.label = label;
  sample.image = Tensor3(3, image_size, image_size);
  for (int y = 0; y < image_size; ++y) {
    for (int x = 0; x < image_size; ++x) {
      sample.image.at(0, y, x) = bg.r;
      sample.image.at(1, y, x) = bg.g;
      sample.image.at(2, y, x) = bg.b;
    }
  }

  int bx_min = image_size, by_min = image_size, bx_max = -1, by_max = -1;
  auto paint = [&](int x, int y) {
    sample.image.at(0, y, x) = fg.r;
    sample.image.at(1, y, x) = fg.g;
    sample.image.at(2, y, x) = fg.b;
    bx_min = std::min(bx_min, x);
    by_min = std::min(by_min, y);
    bx_max = std::max(bx_max, x);
    by_max = std::max(by_max, y);
  };

  if (label == 0) {  // square
    for (int y = y0; y < y0 + extent; ++y) {
      for (int x = x0; x < x0 + extent; ++x) paint(x, y);
    }
  } else if (label == 1) {  // circle
    const double radius = extent / 2.0;
    const double cx = x0 + radius;
    const double cy = y0 + radius;
    for (int y = y0; y < y0 + extent; ++y) {
      for (int x = x0; x < x0 + extent; ++x) {
        const double dx = x + 0.5 - cx;
        const double dy = y + 0.5 - cy;
        if (dx * dx + dy * dy <= radius * radius) paint(x, y);
      }
    }
  } else {  // triangle: apex on the top edge, base on the bottom
    const double cx = x0 + extent / 2.0;
    for (int y = y0; y < y0 + extent; ++y) {
      const double progress = (y - y0 + 1.0) / extent;
      const double half_width = progress * extent / 2.0;
      for (int x = x0; x < x0 + extent; ++x) {
        if (std::abs(x + 0.5 - cx) <= half_width) paint(x, y);
      }
    }
  }

  require(bx_max >= bx_min && by_max >= by_min, "make_shape_sample: nothing painted");
  sample.box.label = shape_class_names()[label];
  sample.box.x_min = bx_min;
  sample.box.y_min = by_min;
  sample.box.x_max = bx_max + 1;
  sample.box.y_max = by_max + 1;
  return sample;
}

ShapesDataset generate_shapes_dataset(const ShapesDatasetSpec& spec) {
  require(spec.samples_per_class >= 1, "generate_shapes_dataset: need samples");
  ShapesDataset dataset;
  dataset.spec = spec;
  Rng rng(spec.seed);

  const int classes = static_cast<int>(shape_class_names().size());
  for (int label = 0; label < classes; ++label) {
    for (int i = 0; i < spec.samples_per_class; ++i) {
      dataset.samples.push_back(make_shape_sample(spec.image_size, label, rng));
    }
  }
  // The last 20% of each class goes to validation.
  const int val_per_class = std::max(1, spec.samples_per_class / 5);
  const int train_per_class = spec.samples_per_class - val_per_class;
  for (int label = 0; label < classes; ++label) {
    const int base = label * spec.samples_per_class;
    for (int i = 0; i < spec.samples_per_class; ++i) {
      if (i < train_per_class) {
        dataset.train_indices.push_back(base + i);
      } else {
        dataset.val_indices.push_back(base + i);
      }
    }
  }
  return dataset;
}

void write_shapes_dataset(const ShapesDataset& dataset, const std::string& directory,
                          const std::string& config_json) {
  const fs::path root(directory);
  std::error_code ec;
  fs::create_directories(root / "images", ec);
  if (ec) throw InputError("cannot create dataset directory: " + directory);

  std::vector<AnnotatedImage> records;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < dataset.samples.size(); ++i) {
    const ShapeSample& sample = dataset.samples[i];
    std::ostringstream name;
    name << "images/img_" << std::setw(4) << std::setfill('0') << i << "_"
         << shape_class_names()[sample.label] << ".png";
    names.push_back(name.str());
    save_image_rgb8((root / name.str()).string(), sample.image);
    records.push_back(AnnotatedImage{name.str(), {sample.box}});
  }
  save_annotations((root / "annotations.json").string(), records);

  json split;
  json train = json::array();
  for (int i : dataset.train_indices) train.push_back(names[i]);
  json val = json::array();
  for (int i : dataset.val_indices) val.push_back(names[i]);
  split["train"] = train;
  split["val"] = val;
  std::ofstream split_out(root / "split.json");
  if (!split_out) throw InputError("cannot write split manifest");
  split_out << split.dump(2) << "\n";

  json meta;
  meta["image_size"] = dataset.spec.image_size;
  meta["samples_per_class"] = dataset.spec.samples_per_class;
  meta["seed"] = dataset.spec.seed;
  meta["classes"] = shape_class_names();
  if (!config_json.empty()) meta["config"] = json::parse(config_json);
  std::ofstream meta_out(root / "dataset.json");
  if (!meta_out) throw InputError("cannot write dataset metadata");
  meta_out << meta.dump(2) << "\n";
}

LoadedDataset load_dataset(const std::string& directory) {
  const fs::path root(directory);
  const fs::path ann_path = root / "annotations.json";
  if (!fs::exists(ann_path)) {
    throw InputError("no annotations.json in dataset directory: " + directory);
  }
  LoadedDataset out;

  if (fs::exists(root / "dataset.json")) {
    std::ifstream meta_in(root / "dataset.json");
    json meta;
    try {
      meta_in >> meta;
      out.class_names = meta.at("classes").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
      throw InputError("malformed dataset.json: " + std::string(e.what()));
    }
  } else {
    out.class_names = shape_class_names();
  }

  const std::vector<AnnotatedImage> records = load_annotations(ann_path.string());
  require(!records.empty(), "dataset has no annotated images: " + directory);
  for (const AnnotatedImage& record : records) {
    ShapeSample sample;
    sample.image = load_image_rgb((root / record.image).string());
    require(!record.boxes.empty(), "record without boxes: " + record.image);
    sample.box = record.boxes.front();
    auto label_it =
        std::find(out.class_names.begin(), out.class_names.end(), sample.box.label);
    require(label_it != out.class_names.end(),
            "unknown class label '" + sample.box.label + "' in " + record.image);
    sample.label = static_cast<int>(label_it - out.class_names.begin());
    out.names.push_back(record.image);
    out.samples.push_back(std::move(sample));
    out.image_size = out.samples.back().image.height;
  }

  if (fs::exists(root / "split.json")) {
    std::ifstream split_in(root / "split.json");
    json split;
    try {
      split_in >> split;
    } catch (const json::exception& e) {
      throw InputError("malformed split.json: " + std::string(e.what()));
    }
    auto index_of = [&](const std::string& name) {
      const auto it = std::find(out.names.begin(), out.names.end(), name);
      require(it != out.names.end(), "split references unknown image: " + name);
      return static_cast<int>(it - out.names.begin());
    };
    for (const auto& name : split.value("train", json::array())) {
      out.train_indices.push_back(index_of(name.get<std::string>()));
    }
    for (const auto& name : split.value("val", json::array())) {
      out.val_indices.push_back(index_of(name.get<std::string>()));
    }
  } else {
    for (std::size_t i = 0; i < out.samples.size(); ++i) {
      out.train_indices.push_back(static_cast<int>(i));
      out.val_indices.push_back(static_cast<int>(i));
    }
  }
  return out;
}

}  // namespace fdcam
