// wastegrasp command-line tool. Results go to stdout (or --out files); any
// failure exits nonzero with {"error": <code>, "message": <text>} on stderr.

#include <array>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "wastegrasp/controller.hpp"
#include "wastegrasp/detmath.hpp"
#include "wastegrasp/error.hpp"
#include "wastegrasp/graspplan.hpp"
#include "wastegrasp/io.hpp"
#include "wastegrasp/sim.hpp"
#include "wastegrasp/tactile.hpp"

namespace {

using nlohmann::json;
namespace wg = wastegrasp;

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

int report_error(const std::string& code, const std::string& message, int exit_code) {
  std::cerr << json{{"error", code}, {"message", message}}.dump() << '\n';
  return exit_code;
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw wg::Error(wg::ErrorCode::kIo, "cannot open " + path);
  }
  return in;
}

std::vector<double> parse_thresholds(const std::string& list, std::vector<std::string>& labels) {
  std::vector<double> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      if (used != item.size() || !(v > 0.0 && v <= 1.0)) {
        throw std::invalid_argument(item);
      }
      out.push_back(v);
      labels.push_back(item);
    } catch (const std::logic_error&) {
      throw wg::Error(wg::ErrorCode::kInvalidConfig, "IoU thresholds must be numbers in (0, 1]");
    }
  }
  if (out.empty()) {
    throw wg::Error(wg::ErrorCode::kInvalidConfig, "at least one IoU threshold is required");
  }
  return out;
}

int cmd_simulate(const std::string& scene_path, const std::string& out_path,
                 const std::string& traces_dir) {
  const auto cfg = wg::sim::scene_from_json(wg::io::read_json(scene_path));
  const auto report = wg::sim::run_pipeline(cfg);
  wg::io::write_text(out_path, wg::sim::to_json(report).dump(2) + "\n");
  if (!traces_dir.empty()) {
    wg::sim::write_run_logs(report, traces_dir);
  }
  return 0;
}

int cmd_grasp_points(const std::string& cloud_path, const std::string& config_path) {
  const auto cloud = wg::io::read_ply(cloud_path);
  const auto cfg = config_path.empty() ? wg::grasp::GraspPlanConfig{}
                                       : wg::io::grasp_config_from_json(wg::io::read_json(config_path));
  const auto pair = wg::grasp::select_grasp_pair(cloud, cfg);
  std::cout << wg::io::grasp_to_json(pair).dump() << '\n';
  return 0;
}

int cmd_slip_detect(const std::vector<std::string>& frames, const wg::tactile::TactileConfig& cfg) {
  if (frames.size() != 4) {
    throw wg::Error(wg::ErrorCode::kDimension, "slip-detect needs exactly four frames");
  }
  std::array<wg::GrayImage, 4> images;
  for (std::size_t i = 0; i < 4; ++i) {
    images[i] = wg::io::read_gray_any(frames[i]);
  }
  const wg::tactile::TactileSequence seq(std::move(images));
  const double b = wg::tactile::brightness(wg::tactile::slip_preprocess(seq, cfg));
  std::cout << json{{"slip", b > cfg.slip_brightness_threshold},
                    {"brightness", b},
                    {"threshold", cfg.slip_brightness_threshold}}
                   .dump()
            << '\n';
  return 0;
}

int cmd_eval_ap(const std::string& dets_path, const std::string& gts_path,
                const std::string& thresholds) {
  std::vector<std::string> labels;
  const auto ious = parse_thresholds(thresholds, labels);
  auto din = open_or_throw(dets_path);
  auto gin = open_or_throw(gts_path);
  const auto images = wg::io::join_annotations(wg::io::read_detections_jsonl(din),
                                               wg::io::read_ground_truths_jsonl(gin));
  json ap = json::object();
  for (std::size_t i = 0; i < ious.size(); ++i) {
    ap[labels[i]] = wg::detmath::average_precision(images, ious[i]);
  }
  std::cout << json{{"images", images.size()}, {"ap", ap}}.dump() << '\n';
  return 0;
}

int cmd_losses(const std::string& case_path) {
  std::cout << wg::io::evaluate_loss_case(wg::io::read_json(case_path)).dump() << '\n';
  return 0;
}

int cmd_manipulate(const std::string& scenario_path, const std::string& out_path) {
  const auto scenario = wg::io::scenario_from_json(wg::io::read_json(scenario_path));
  auto emit = [&](const wg::control::ControllerTrace& trace) {
    const std::string csv = wg::control::to_csv(trace);
    if (out_path.empty()) {
      std::cout << csv;
    } else {
      wg::io::write_text(out_path, csv);
    }
  };
  try {
    emit(wg::control::run_manipulation(scenario));
  } catch (const wg::control::ManipulationError& e) {
    emit(e.trace());
    throw;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Perception-to-grasp math for a waste-collection robot"};
  app.require_subcommand(1);

  std::string scene;
  std::string out;
  std::string traces_dir;
  auto* simulate = app.add_subcommand("simulate", "Run the end-to-end pipeline on a scene");
  simulate->add_option("--scene", scene, "Scene JSON")->required();
  simulate->add_option("--out", out, "Report JSON")->required();
  simulate->add_option("--traces-dir", traces_dir, "Directory for trace and trajectory CSV");

  std::string cloud;
  std::string grasp_config;
  auto* grasp = app.add_subcommand("grasp-points", "Select an antipodal grasp pair on a PLY cloud");
  grasp->add_option("--cloud", cloud, "ASCII PLY cloud")->required();
  grasp->add_option("--config", grasp_config, "Grasp config JSON");

  std::vector<std::string> frames;
  wg::tactile::TactileConfig tactile;
  auto* slip = app.add_subcommand("slip-detect", "Slip test on four tactile frames (PGM/PPM)");
  slip->add_option("--frames", frames, "f0 f1 f2 f3")->required()->expected(4);
  slip->add_option("--threshold", tactile.slip_brightness_threshold, "Brightness threshold");
  slip->add_option("--diff-threshold", tactile.subtract_threshold, "Gray-level difference threshold");

  std::string dets;
  std::string gts;
  std::string ious = "0.5,0.75,0.9";
  auto* ap = app.add_subcommand("eval-ap", "Average precision at IoU thresholds");
  ap->add_option("--dets", dets, "Detections JSONL")->required();
  ap->add_option("--gts", gts, "Ground truths JSONL")->required();
  ap->add_option("--iou", ious, "Comma-separated IoU thresholds");

  std::string loss_case;
  auto* losses = app.add_subcommand("losses", "Evaluate a loss case");
  losses->add_option("--case", loss_case, "Case JSON")->required();

  std::string scenario;
  std::string trace_out;
  auto* manipulate = app.add_subcommand("manipulate", "Closed-loop gripper run on a scenario");
  manipulate->add_option("--scenario", scenario, "Scenario JSON")->required();
  manipulate->add_option("--out", trace_out, "Trace CSV (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("usage", e.what(), kExitUsage);
  }

  try {
    if (*simulate) {
      return cmd_simulate(scene, out, traces_dir);
    }
    if (*grasp) {
      return cmd_grasp_points(cloud, grasp_config);
    }
    if (*slip) {
      tactile.validate();
      return cmd_slip_detect(frames, tactile);
    }
    if (*ap) {
      return cmd_eval_ap(dets, gts, ious);
    }
    if (*losses) {
      return cmd_losses(loss_case);
    }
    if (*manipulate) {
      return cmd_manipulate(scenario, trace_out);
    }
  } catch (const wg::Error& e) {
    return report_error(std::string(wg::to_string(e.code())), e.what(), kExitRuntime);
  } catch (const nlohmann::json::exception& e) {
    return report_error("parse", e.what(), kExitRuntime);
  } catch (const std::exception& e) {
    return report_error("internal", e.what(), kExitRuntime);
  }
  return report_error("usage", "no subcommand", kExitUsage);
}
