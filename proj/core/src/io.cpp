#include "wastegrasp/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "wastegrasp/error.hpp"
#include "wastegrasp/tactile.hpp"

namespace wastegrasp::io {

namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorCode::kParse, what); }

const json& member(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    parse_error(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

double number(const json& j, const char* what) {
  if (!j.is_number()) {
    parse_error(std::string("field '") + what + "' must be a number");
  }
  return j.get<double>();
}

template <typename T>
void optional_field(const json& j, const char* key, T& out) {
  if (j.is_object() && j.contains(key)) {
    try {
      out = j.at(key).get<T>();
    } catch (const json::exception& e) {
      parse_error(std::string("field '") + key + "': " + e.what());
    }
  }
}

std::vector<double> numbers(const json& j, std::size_t n, const char* what) {
  if (!j.is_array() || (n != 0 && j.size() != n)) {
    parse_error(std::string("field '") + what + "' must be an array of " + std::to_string(n) +
                " numbers");
  }
  std::vector<double> out;
  for (const auto& v : j) {
    out.push_back(number(v, what));
  }
  return out;
}

Eigen::MatrixXd matrix_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    parse_error(std::string("field '") + what + "' must be a non-empty array of rows");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto row = numbers(j[static_cast<std::size_t>(r)], static_cast<std::size_t>(cols), what);
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = row[static_cast<std::size_t>(c)];
    }
  }
  return m;
}

Eigen::VectorXd vector_from_json(const json& j, const char* what) {
  const auto v = numbers(j, 0, what);
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// Next header token of a PNM file, skipping '#' comments.
std::string pnm_token(std::istream& in) {
  std::string tok;
  while (in) {
    const int c = in.get();
    if (c == EOF) {
      break;
    }
    if (c == '#') {
      std::string skip;
      std::getline(in, skip);
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) {
        return tok;
      }
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  if (tok.empty()) {
    parse_error("truncated PNM header");
  }
  return tok;
}

struct PnmHeader {
  std::string magic;
  int width = 0;
  int height = 0;
};

PnmHeader read_pnm_header(std::istream& in) {
  PnmHeader h;
  h.magic = pnm_token(in);
  try {
    h.width = std::stoi(pnm_token(in));
    h.height = std::stoi(pnm_token(in));
    if (std::stoi(pnm_token(in)) != 255) {
      parse_error("only maxval 255 is supported");
    }
  } catch (const std::logic_error&) {
    parse_error("malformed PNM header");
  }
  if (h.width <= 0 || h.height <= 0) {
    parse_error("PNM image must have positive size");
  }
  return h;
}

std::ifstream open_in(const std::filesystem::path& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open " + path.string());
  }
  return in;
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) {
    throw Error(ErrorCode::kIo, "cannot write " + path.string());
  }
  return out;
}

template <typename T, typename Fn>
std::vector<std::vector<T>> read_jsonl(std::istream& in, const char* key, Fn item) {
  std::vector<std::vector<T>> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      parse_error("line " + std::to_string(lineno) + ": " + e.what());
    }
    const json& list = j.is_array() ? j : member(j, key);
    if (!list.is_array()) {
      parse_error("line " + std::to_string(lineno) + ": expected an array");
    }
    std::vector<T> image;
    for (const auto& e : list) {
      image.push_back(item(e));
    }
    out.push_back(std::move(image));
  }
  return out;
}

}  // namespace

std::string read_text(const std::filesystem::path& path) {
  auto in = open_in(path, std::ios::in | std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  auto out = open_out(path, std::ios::out | std::ios::binary);
  out << text;
}

json read_json(const std::filesystem::path& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::exception& e) {
    parse_error(path.string() + ": " + e.what());
  }
}

geometry::RigidTransform transform_from_json(const json& j) {
  const auto r = numbers(member(j, "r"), 9, "r");
  const auto t = numbers(member(j, "t"), 3, "t");
  geometry::Matrix3 m;
  m << r[0], r[1], r[2], r[3], r[4], r[5], r[6], r[7], r[8];
  return {m, Eigen::Vector3d(t[0], t[1], t[2])};
}

json to_json(const geometry::RigidTransform& t) {
  json r = json::array();
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 3; ++k) {
      r.push_back(t.rotation()(i, k));
    }
  }
  return {{"r", r}, {"t", to_json(Eigen::Vector3d(t.translation()))}};
}

geometry::DhChain dh_chain_from_json(const json& j) {
  if (!j.is_array()) {
    parse_error("DH chain must be an array of joints");
  }
  geometry::DhChain chain;
  for (const auto& e : j) {
    chain.joints.push_back({number(member(e, "a"), "a"), number(member(e, "alpha"), "alpha"),
                            number(member(e, "d"), "d"),
                            e.contains("theta_offset") ? number(e["theta_offset"], "theta_offset")
                                                       : 0.0});
  }
  return chain;
}

json to_json(const geometry::DhChain& chain) {
  json out = json::array();
  for (const auto& jt : chain.joints) {
    out.push_back({{"a", jt.a}, {"alpha", jt.alpha}, {"d", jt.d}, {"theta_offset", jt.theta_offset}});
  }
  return out;
}

geometry::Intrinsics intrinsics_from_json(const json& j) {
  geometry::Intrinsics k{number(member(j, "fx"), "fx"), number(member(j, "fy"), "fy"),
                         number(member(j, "cx"), "cx"), number(member(j, "cy"), "cy")};
  k.validate();
  return k;
}

json to_json(const geometry::Intrinsics& k) {
  return {{"fx", k.fx}, {"fy", k.fy}, {"cx", k.cx}, {"cy", k.cy}};
}

Eigen::Vector3d vec3_from_json(const json& j) {
  const auto v = numbers(j, 3, "vector");
  return {v[0], v[1], v[2]};
}

json to_json(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

grasp::GraspPlanConfig grasp_config_from_json(const json& j) {
  grasp::GraspPlanConfig cfg;
  if (!j.is_null() && !j.is_object()) {
    parse_error("grasp config must be an object");
  }
  optional_field(j, "k_neighbors", cfg.k_neighbors);
  optional_field(j, "plane_band", cfg.plane_band);
  optional_field(j, "opposition_min_angle", cfg.opposition_min_angle);
  optional_field(j, "plane_parallel_max_angle", cfg.plane_parallel_max_angle);
  optional_field(j, "max_opening", cfg.max_opening);
  optional_field(j, "alignment_weight", cfg.alignment_weight);
  cfg.validate();
  return cfg;
}

json to_json(const grasp::GraspPlanConfig& cfg) {
  return {{"k_neighbors", cfg.k_neighbors},
          {"plane_band", cfg.plane_band},
          {"opposition_min_angle", cfg.opposition_min_angle},
          {"plane_parallel_max_angle", cfg.plane_parallel_max_angle},
          {"max_opening", cfg.max_opening},
          {"alignment_weight", cfg.alignment_weight}};
}

json grasp_to_json(const grasp::GraspPair& g) {
  return {{"pa", to_json(g.p_a)}, {"pb", to_json(g.p_b)}, {"quality", g.quality}};
}

grasp::PointCloud read_ply(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("ply", 0) != 0) {
    parse_error("not a PLY file");
  }
  std::size_t vertices = 0;
  bool in_vertex = false;
  std::vector<std::string> props;
  bool ascii = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    if (kw == "format") {
      std::string fmt;
      ls >> fmt;
      ascii = fmt == "ascii";
    } else if (kw == "element") {
      std::string name;
      ls >> name;
      in_vertex = name == "vertex";
      if (in_vertex) {
        ls >> vertices;
      }
    } else if (kw == "property" && in_vertex) {
      std::string type;
      std::string name;
      ls >> type >> name;
      if (type == "list") {
        parse_error("list properties on vertices are not supported");
      }
      props.push_back(name);
    } else if (kw == "end_header") {
      break;
    }
  }
  if (!ascii) {
    parse_error("only ASCII PLY is supported");
  }
  auto find = [&](std::initializer_list<const char*> names) -> int {
    for (const char* n : names) {
      for (std::size_t i = 0; i < props.size(); ++i) {
        if (props[i] == n) {
          return static_cast<int>(i);
        }
      }
    }
    return -1;
  };
  const int ix = find({"x"});
  const int iy = find({"y"});
  const int iz = find({"z"});
  const int ir = find({"red", "r"});
  const int ig = find({"green", "g"});
  const int ib = find({"blue", "b"});
  if (ix < 0 || iy < 0 || iz < 0) {
    parse_error("PLY vertices need x, y and z");
  }
  grasp::PointCloud cloud;
  cloud.points.reserve(vertices);
  std::vector<double> values(props.size());
  for (std::size_t v = 0; v < vertices; ++v) {
    for (auto& x : values) {
      if (!(in >> x)) {
        parse_error("PLY has fewer vertices than declared");
      }
    }
    grasp::CloudPoint p;
    p.position = {values[ix], values[iy], values[iz]};
    auto channel = [&](int i, std::uint8_t fallback) {
      return i < 0 ? fallback : static_cast<std::uint8_t>(std::clamp(values[i], 0.0, 255.0));
    };
    p.color = {channel(ir, p.color.r), channel(ig, p.color.g), channel(ib, p.color.b)};
    cloud.points.push_back(p);
  }
  return cloud;
}

grasp::PointCloud read_ply(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_ply(in);
}

void write_ply(std::ostream& out, const grasp::PointCloud& cloud) {
  out << "ply\nformat ascii 1.0\nelement vertex " << cloud.size()
      << "\nproperty float64 x\nproperty float64 y\nproperty float64 z\n"
         "property uchar red\nproperty uchar green\nproperty uchar blue\nend_header\n";
  out.precision(17);
  for (const auto& p : cloud.points) {
    out << p.position.x() << ' ' << p.position.y() << ' ' << p.position.z() << ' '
        << int{p.color.r} << ' ' << int{p.color.g} << ' ' << int{p.color.b} << '\n';
  }
}

void write_ply(const std::filesystem::path& path, const grasp::PointCloud& cloud) {
  auto out = open_out(path);
  write_ply(out, cloud);
}

GrayImage read_pgm(const std::filesystem::path& path) {
  auto in = open_in(path, std::ios::in | std::ios::binary);
  const PnmHeader h = read_pnm_header(in);
  if (h.magic != "P5") {
    parse_error(path.string() + ": expected binary PGM (P5)");
  }
  GrayImage img(h.width, h.height);
  in.read(reinterpret_cast<char*>(img.data().data()), static_cast<std::streamsize>(img.size()));
  if (in.gcount() != static_cast<std::streamsize>(img.size())) {
    parse_error(path.string() + ": truncated pixel data");
  }
  return img;
}

void write_pgm(const std::filesystem::path& path, const GrayImage& img) {
  auto out = open_out(path, std::ios::out | std::ios::binary);
  out << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.data().data()),
            static_cast<std::streamsize>(img.size()));
}

RgbImage read_ppm(const std::filesystem::path& path) {
  auto in = open_in(path, std::ios::in | std::ios::binary);
  const PnmHeader h = read_pnm_header(in);
  if (h.magic != "P6") {
    parse_error(path.string() + ": expected binary PPM (P6)");
  }
  std::vector<unsigned char> raw(static_cast<std::size_t>(h.width) * h.height * 3);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (in.gcount() != static_cast<std::streamsize>(raw.size())) {
    parse_error(path.string() + ": truncated pixel data");
  }
  RgbImage img(h.width, h.height);
  for (std::size_t i = 0; i < img.size(); ++i) {
    img[i] = {raw[3 * i], raw[3 * i + 1], raw[3 * i + 2]};
  }
  return img;
}

void write_ppm(const std::filesystem::path& path, const RgbImage& img) {
  auto out = open_out(path, std::ios::out | std::ios::binary);
  out << "P6\n" << img.width() << ' ' << img.height() << "\n255\n";
  std::vector<unsigned char> raw;
  raw.reserve(img.size() * 3);
  for (std::size_t i = 0; i < img.size(); ++i) {
    raw.push_back(img[i].r);
    raw.push_back(img[i].g);
    raw.push_back(img[i].b);
  }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
}

GrayImage read_gray_any(const std::filesystem::path& path) {
  std::string magic;
  {
    auto in = open_in(path, std::ios::in | std::ios::binary);
    magic = pnm_token(in);
  }
  if (magic == "P6") {
    return tactile::to_gray(read_ppm(path));
  }
  return read_pgm(path);
}

detmath::BoundingBox box_from_json(const json& j) {
  detmath::BoundingBox b;
  if (j.is_array()) {
    const auto v = numbers(j, 4, "box");
    b = {v[0], v[1], v[2], v[3]};
  } else {
    b = {number(member(j, "cx"), "cx"), number(member(j, "cy"), "cy"), number(member(j, "w"), "w"),
         number(member(j, "h"), "h")};
  }
  b.validate();
  return b;
}

json to_json(const detmath::BoundingBox& b) {
  return {{"cx", b.cx}, {"cy", b.cy}, {"w", b.w}, {"h", b.h}};
}

std::vector<std::vector<detmath::ScoredBox>> read_detections_jsonl(std::istream& in) {
  return read_jsonl<detmath::ScoredBox>(in, "detections", [](const json& e) {
    return detmath::ScoredBox{box_from_json(member(e, "box")),
                              static_cast<int>(number(member(e, "label"), "label")),
                              number(member(e, "score"), "score")};
  });
}

std::vector<std::vector<detmath::LabeledBox>> read_ground_truths_jsonl(std::istream& in) {
  return read_jsonl<detmath::LabeledBox>(in, "ground_truths", [](const json& e) {
    return detmath::LabeledBox{box_from_json(member(e, "box")),
                               static_cast<int>(number(member(e, "label"), "label"))};
  });
}

std::vector<detmath::ImageAnnotations> join_annotations(
    const std::vector<std::vector<detmath::ScoredBox>>& dets,
    const std::vector<std::vector<detmath::LabeledBox>>& gts) {
  if (dets.size() != gts.size()) {
    throw Error(ErrorCode::kDimension, "detection and ground-truth files list " +
                                           std::to_string(dets.size()) + " and " +
                                           std::to_string(gts.size()) + " images");
  }
  std::vector<detmath::ImageAnnotations> out(dets.size());
  for (std::size_t i = 0; i < dets.size(); ++i) {
    out[i] = {dets[i], gts[i]};
  }
  return out;
}

tactile::SensorModel sensor_from_json(const json& j) {
  tactile::SensorModel m;
  optional_field(j, "width", m.width);
  optional_field(j, "height", m.height);
  optional_field(j, "noise_amplitude", m.noise_amplitude);
  optional_field(j, "contact_base", m.contact_base);
  optional_field(j, "contact_gain", m.contact_gain);
  optional_field(j, "blob_semi_x", m.blob_semi_x);
  optional_field(j, "blob_semi_y", m.blob_semi_y);
  m.validate();
  return m;
}

json to_json(const tactile::SensorModel& m) {
  return {{"width", m.width},
          {"height", m.height},
          {"noise_amplitude", m.noise_amplitude},
          {"contact_base", m.contact_base},
          {"contact_gain", m.contact_gain},
          {"blob_semi_x", m.blob_semi_x},
          {"blob_semi_y", m.blob_semi_y}};
}

control::ManipulationScenario scenario_from_json(const json& j) {
  if (!j.is_object()) {
    parse_error("scenario must be an object");
  }
  control::ManipulationScenario s;
  if (j.contains("gripper")) {
    const json& g = j["gripper"];
    optional_field(g, "opening", s.gripper.opening);
    optional_field(g, "close_step", s.gripper.close_step);
    optional_field(g, "min_opening", s.gripper.min_opening);
  }
  optional_field(j, "object_width_mm", s.object_width_mm);
  optional_field(j, "slip_px", s.slip_px);
  optional_field(j, "slip_ticks", s.slip_ticks);
  optional_field(j, "seed", s.seed);
  optional_field(j, "max_ticks", s.max_ticks);
  if (j.contains("orders")) {
    for (const auto& o : j["orders"]) {
      s.orders.push_back({static_cast<int>(number(member(o, "tick"), "tick")),
                          control::parse_order(member(o, "order").get<std::string>())});
    }
  }
  if (j.contains("sensor")) {
    s.sensor = sensor_from_json(j["sensor"]);
  }
  if (j.contains("tactile")) {
    const json& t = j["tactile"];
    optional_field(t, "subtract_threshold", s.tactile.subtract_threshold);
    optional_field(t, "slip_brightness_threshold", s.tactile.slip_brightness_threshold);
    optional_field(t, "contact_energy_threshold", s.tactile.contact_energy_threshold);
    if (t.contains("kernel_cross")) {
      s.tactile.kernel = tactile::StructuringElement::cross(t["kernel_cross"].get<int>());
    }
  }
  s.validate();
  return s;
}

json to_json(const control::ManipulationScenario& s) {
  json orders = json::array();
  for (const auto& o : s.orders) {
    orders.push_back({{"tick", o.tick}, {"order", std::string(control::to_string(o.order))}});
  }
  return {{"gripper",
           {{"opening", s.gripper.opening},
            {"close_step", s.gripper.close_step},
            {"min_opening", s.gripper.min_opening}}},
          {"object_width_mm", s.object_width_mm},
          {"slip_px", s.slip_px},
          {"slip_ticks", s.slip_ticks},
          {"orders", orders},
          {"seed", s.seed},
          {"max_ticks", s.max_ticks},
          {"sensor", to_json(s.sensor)},
          {"tactile",
           {{"subtract_threshold", s.tactile.subtract_threshold},
            {"slip_brightness_threshold", s.tactile.slip_brightness_threshold},
            {"contact_energy_threshold", s.tactile.contact_energy_threshold},
            {"kernel_cross", s.tactile.kernel.size()}}}};
}

namespace {

detmath::MatchMatrix match_from_json(const json& j) {
  detmath::MatchMatrix m;
  for (const auto& e : member(j, "gt_of")) {
    if (e.is_null()) {
      m.gt_of.emplace_back();
    } else {
      m.gt_of.emplace_back(e.get<std::size_t>());
    }
  }
  if (j.contains("negatives")) {
    m.negatives = j["negatives"].get<std::vector<std::size_t>>();
  }
  return m;
}

detmath::YoloGrid yolo_grid_from_json(int s, int b, const json& anchors) {
  if (!anchors.is_array() || anchors.empty()) {
    parse_error("Yolo grid needs a non-empty anchor array");
  }
  detmath::YoloGrid g;
  g.s = s;
  g.b = b;
  for (const auto& a : anchors) {
    detmath::YoloAnchor y;
    const auto box = numbers(member(a, "box"), 4, "box");
    y.box = {box[0], box[1], box[2], box[3]};
    y.confidence = number(member(a, "confidence"), "confidence");
    y.class_probs = vector_from_json(member(a, "class_probs"), "class_probs");
    optional_field(a, "object", y.object);
    g.anchors.push_back(std::move(y));
  }
  return g;
}

}  // namespace

json evaluate_loss_case(const json& c) {
  const std::string kind = member(c, "kind").get<std::string>();
  if (kind == "yolact_components") {
    detmath::YolactComponents comp{number(member(c, "cls"), "cls"), number(member(c, "box"), "box"),
                                   number(member(c, "mask"), "mask")};
    detmath::YolactWeights w;
    if (c.contains("weights")) {
      optional_field(c["weights"], "cls", w.cls);
      optional_field(c["weights"], "box", w.box);
      optional_field(c["weights"], "mask", w.mask);
    }
    return {{"kind", kind}, {"total", detmath::yolact_loss(comp, w)}};
  }
  if (kind == "yolact") {
    std::vector<detmath::Detection> dets;
    for (const auto& d : member(c, "detections")) {
      detmath::Detection det;
      if (d.contains("regression")) {
        const auto r = numbers(d["regression"], 4, "regression");
        det.regression = {r[0], r[1], r[2], r[3]};
      }
      det.class_scores = vector_from_json(member(d, "class_scores"), "class_scores");
      if (d.contains("mask")) {
        det.mask = matrix_from_json(d["mask"], "mask");
      }
      dets.push_back(std::move(det));
    }
    std::vector<detmath::GroundTruth> gts;
    for (const auto& g : member(c, "ground_truths")) {
      detmath::GroundTruth gt;
      gt.box = box_from_json(member(g, "box"));
      gt.anchor = box_from_json(member(g, "anchor"));
      gt.label = static_cast<int>(number(member(g, "label"), "label"));
      if (g.contains("mask")) {
        gt.mask = matrix_from_json(g["mask"], "mask");
      }
      gts.push_back(std::move(gt));
    }
    const auto match = match_from_json(member(c, "match"));
    const auto comp = detmath::yolact_components(dets, gts, match);
    return {{"kind", kind},
            {"cls", comp.cls},
            {"box", comp.box},
            {"mask", comp.mask},
            {"total", detmath::yolact_loss(comp)}};
  }
  if (kind == "yolo") {
    const int s = member(c, "s").get<int>();
    const int b = member(c, "b").get<int>();
    const auto pred = yolo_grid_from_json(s, b, member(c, "pred"));
    const auto target = yolo_grid_from_json(s, b, member(c, "target"));
    detmath::YoloWeights w;
    if (c.contains("weights")) {
      optional_field(c["weights"], "coord", w.coord);
      optional_field(c["weights"], "cls", w.cls);
      optional_field(c["weights"], "obj", w.obj);
      optional_field(c["weights"], "noobj", w.noobj);
    }
    const auto comp = detmath::yolo_components(pred, target, w);
    return {{"kind", kind},
            {"box", comp.box},
            {"cls", comp.cls},
            {"obj", comp.obj},
            {"total", comp.total()}};
  }
  if (kind == "mask_bce") {
    const double v = detmath::mask_bce_loss(matrix_from_json(member(c, "pred"), "pred"),
                                            matrix_from_json(member(c, "gt"), "gt"));
    return {{"kind", kind}, {"total", v}};
  }
  if (kind == "accuracy") {
    detmath::ConfusionCounts k;
    optional_field(c, "tp", k.tp);
    optional_field(c, "tn", k.tn);
    optional_field(c, "fp", k.fp);
    optional_field(c, "fn", k.fn);
    return {{"kind", kind}, {"accuracy", detmath::accuracy(k)}};
  }
  if (kind == "iou") {
    return {{"kind", kind},
            {"iou", detmath::iou(box_from_json(member(c, "a")), box_from_json(member(c, "b")))}};
  }
  parse_error("unknown loss case kind '" + kind + "'");
}

}  // namespace wastegrasp::io
