#pragma once

// File formats: transform / DH / grasp / scenario JSON, ASCII PLY clouds,
// binary PGM (P5) and PPM (P6) images, detection JSON-lines, and the loss
// case files evaluated by the CLI. Parse failures throw kParse, file access
// failures kIo.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wastegrasp/controller.hpp"
#include "wastegrasp/detmath.hpp"
#include "wastegrasp/geometry.hpp"
#include "wastegrasp/graspplan.hpp"
#include "wastegrasp/image.hpp"

namespace wastegrasp::io {

using nlohmann::json;

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);
json read_json(const std::filesystem::path& path);

/// {"r": [9 row-major], "t": [3]}
geometry::RigidTransform transform_from_json(const json& j);
json to_json(const geometry::RigidTransform& t);

/// [{"a", "alpha", "d", "theta_offset"}, ...]
geometry::DhChain dh_chain_from_json(const json& j);
json to_json(const geometry::DhChain& chain);

/// {"fx", "fy", "cx", "cy"}
geometry::Intrinsics intrinsics_from_json(const json& j);
json to_json(const geometry::Intrinsics& k);

Eigen::Vector3d vec3_from_json(const json& j);
json to_json(const Eigen::Vector3d& v);

/// Missing fields keep their defaults.
grasp::GraspPlanConfig grasp_config_from_json(const json& j);
json to_json(const grasp::GraspPlanConfig& cfg);

/// {"pa": [x,y,z], "pb": [x,y,z], "quality": q}
json grasp_to_json(const grasp::GraspPair& g);

/// ASCII PLY with a vertex element holding x y z and optional
/// red green blue (or r g b) properties.
grasp::PointCloud read_ply(std::istream& in);
grasp::PointCloud read_ply(const std::filesystem::path& path);
void write_ply(std::ostream& out, const grasp::PointCloud& cloud);
void write_ply(const std::filesystem::path& path, const grasp::PointCloud& cloud);

GrayImage read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const GrayImage& img);
RgbImage read_ppm(const std::filesystem::path& path);
void write_ppm(const std::filesystem::path& path, const RgbImage& img);
/// Reads P5 as-is or converts P6 to gray with tactile::luma.
GrayImage read_gray_any(const std::filesystem::path& path);

detmath::BoundingBox box_from_json(const json& j);
json to_json(const detmath::BoundingBox& b);

/// One image per line. Detection lines: {"detections": [{"box": {...} | [cx,cy,w,h],
/// "label": l, "score": s}, ...]}; ground-truth lines: {"ground_truths": [{"box", "label"}]}.
/// A bare array per line is accepted for either. Blank lines are skipped.
std::vector<std::vector<detmath::ScoredBox>> read_detections_jsonl(std::istream& in);
std::vector<std::vector<detmath::LabeledBox>> read_ground_truths_jsonl(std::istream& in);
/// Pairs image lines; throws kDimension when the line counts differ.
std::vector<detmath::ImageAnnotations> join_annotations(
    const std::vector<std::vector<detmath::ScoredBox>>& dets,
    const std::vector<std::vector<detmath::LabeledBox>>& gts);

control::ManipulationScenario scenario_from_json(const json& j);
json to_json(const control::ManipulationScenario& s);
tactile::SensorModel sensor_from_json(const json& j);
json to_json(const tactile::SensorModel& m);

/// Evaluates a loss case ({"kind": "yolact" | "yolact_components" | "yolo" |
/// "mask_bce" | "accuracy" | "iou", ...}) and returns the values as JSON.
json evaluate_loss_case(const json& c);

}  // namespace wastegrasp::io
