#include "fdcam/annotations.hpp"

#include <cmath>
#include <fstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <nlohmann/json.hpp>

#include "fdcam/errors.hpp"
#include "fdcam/tensor.hpp"

namespace fdcam {
namespace {

using json = nlohmann::json;

json box_to_json(const BoundingBox& box) {
  return json{{"label", box.label},
              {"x_min", box.x_min},
              {"y_min", box.y_min},
              {"x_max", box.x_max},
              {"y_max", box.y_max}};
}

BoundingBox box_from_json(const json& j) {
  BoundingBox box;
  box.label = j.at("label").get<std::string>();
  box.x_min = j.at("x_min").get<int>();
  box.y_min = j.at("y_min").get<int>();
  box.x_max = j.at("x_max").get<int>();
  box.y_max = j.at("y_max").get<int>();
  require(box.x_min < box.x_max && box.y_min < box.y_max,
          "annotation box for '" + box.label + "' is empty or inverted");
  return box;
}

}  // namespace

void validate_box(const BoundingBox& box, int image_width, int image_height) {
  require(box.x_min >= 0 && box.x_min < box.x_max && box.x_max <= image_width &&
              box.y_min >= 0 && box.y_min < box.y_max && box.y_max <= image_height,
          "annotation box for '" + box.label + "' leaves the image bounds");
}

std::vector<AnnotatedImage> load_annotations(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read annotations: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw InputError("malformed annotations " + path + ": " + e.what());
  }
  require(doc.is_array(), "annotations must be a JSON array: " + path);
  std::vector<AnnotatedImage> records;
  records.reserve(doc.size());
  try {
    for (const json& item : doc) {
      AnnotatedImage record;
      record.image = item.at("image").get<std::string>();
      for (const json& b : item.at("boxes")) {
        record.boxes.push_back(box_from_json(b));
      }
      records.push_back(std::move(record));
    }
  } catch (const json::exception& e) {
    throw InputError("malformed annotations " + path + ": " + e.what());
  }
  return records;
}

void save_annotations(const std::string& path, const std::vector<AnnotatedImage>& records) {
  json doc = json::array();
  for (const AnnotatedImage& record : records) {
    json boxes = json::array();
    for (const BoundingBox& box : record.boxes) boxes.push_back(box_to_json(box));
    doc.push_back(json{{"image", record.image}, {"boxes", boxes}});
  }
  std::ofstream out(path);
  if (!out) throw InputError("cannot write annotations: " + path);
  out << doc.dump(2) << "\n";
}

AnnotatedImage import_voc_xml(const std::string& xml_path) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_xml(xml_path, tree);
  } catch (const pt::xml_parser_error& e) {
    throw InputError("malformed VOC annotation " + xml_path + ": " + e.what());
  }
  AnnotatedImage record;
  try {
    const pt::ptree& ann = tree.get_child("annotation");
    record.image = ann.get<std::string>("filename");
    for (const auto& [key, node] : ann) {
      if (key != "object") continue;
      BoundingBox box;
      box.label = node.get<std::string>("name");
      // VOC corners are 1-based and inclusive.
      box.x_min = node.get<int>("bndbox.xmin") - 1;
      box.y_min = node.get<int>("bndbox.ymin") - 1;
      box.x_max = node.get<int>("bndbox.xmax");
      box.y_max = node.get<int>("bndbox.ymax");
      require(box.x_min >= 0 && box.x_min < box.x_max && box.y_min >= 0 &&
                  box.y_min < box.y_max,
              "VOC box for '" + box.label + "' is empty or inverted");
      record.boxes.push_back(std::move(box));
    }
  } catch (const pt::ptree_error& e) {
    throw InputError("malformed VOC annotation " + xml_path + ": " + e.what());
  }
  require(!record.boxes.empty(), "VOC annotation has no objects: " + xml_path);
  return record;
}

BoundingBox scale_box(const BoundingBox& box, int from_width, int from_height,
                      int to_width, int to_height) {
  require(from_width > 0 && from_height > 0 && to_width > 0 && to_height > 0,
          "scale_box: sizes must be positive");
  const double sx = static_cast<double>(to_width) / from_width;
  const double sy = static_cast<double>(to_height) / from_height;
  BoundingBox out;
  out.label = box.label;
  out.x_min = std::max(0, static_cast<int>(std::floor(box.x_min * sx)));
  out.y_min = std::max(0, static_cast<int>(std::floor(box.y_min * sy)));
  out.x_max = std::min(to_width, static_cast<int>(std::ceil(box.x_max * sx)));
  out.y_max = std::min(to_height, static_cast<int>(std::ceil(box.y_max * sy)));
  if (out.x_max <= out.x_min) out.x_max = std::min(to_width, out.x_min + 1);
  if (out.y_max <= out.y_min) out.y_max = std::min(to_height, out.y_min + 1);
  return out;
}

}  // namespace fdcam
