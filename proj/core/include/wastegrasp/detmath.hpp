#pragma once

// Detection math: Yolact mask assembly and losses, the Yolo loss, IoU,
// AP at an IoU threshold, accuracy, and finite-difference gradient checks.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Core>

namespace wastegrasp::detmath {

/// Centre-size box in pixels (or normalized units for the Yolo grid).
struct BoundingBox {
  double cx = 0.0;
  double cy = 0.0;
  double w = 0.0;
  double h = 0.0;

  double x0() const { return cx - 0.5 * w; }
  double y0() const { return cy - 0.5 * h; }
  double x1() const { return cx + 0.5 * w; }
  double y1() const { return cy + 0.5 * h; }
  double area() const { return w * h; }
  /// Throws kInvalidBox unless w > 0 and h > 0 and all fields are finite.
  void validate() const;

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

/// Regression target of `gt` relative to `anchor`:
/// ((gx - dx)/dw, (gy - dy)/dh, log(gw/dw), log(gh/dh)).
Eigen::Vector4d encode(const BoundingBox& gt, const BoundingBox& anchor);
BoundingBox decode(const Eigen::Vector4d& regression, const BoundingBox& anchor);

struct Detection {
  BoundingBox box;
  /// Predicted encoding l = (cx, cy, w, h) relative to the matched anchor.
  Eigen::Vector4d regression = Eigen::Vector4d::Zero();
  /// Raw class logits; index 0 is background.
  Eigen::VectorXd class_scores;
  double confidence = 0.0;
  /// Predicted instance mask, values in [0, 1].
  std::optional<Eigen::MatrixXd> mask;
};

struct GroundTruth {
  BoundingBox box;
  /// Class index in [1, C); 0 is background.
  int label = 1;
  /// Binary instance mask.
  std::optional<Eigen::MatrixXd> mask;
  /// Default box the regression is encoded against.
  BoundingBox anchor;
};

/// x_ij^p: detection i is matched to at most one ground truth j (whose label
/// gives p). `negatives` lists detections scored against background.
struct MatchMatrix {
  std::vector<std::optional<std::size_t>> gt_of;
  std::vector<std::size_t> negatives;

  /// N, the number of matched detections.
  std::size_t positives() const;
  /// Throws kDimension when sizes or indices are inconsistent.
  void validate(std::size_t detections, std::size_t ground_truths) const;
};

/// sigmoid(sum_k coeff_k * proto_k) per coefficient vector. All prototypes
/// share one shape; throws kDimension on length or shape mismatch.
std::vector<Eigen::MatrixXd> assemble_masks(const std::vector<Eigen::MatrixXd>& prototypes,
                                            const std::vector<Eigen::VectorXd>& coefficients);

double smooth_l1(double x);
double smooth_l1_derivative(double x);

/// Softmax cross-entropy over positives (true class) and negatives
/// (background), divided by N. Throws kUndefinedLoss when N = 0.
double yolact_cls_loss(const std::vector<Detection>& dets, const std::vector<GroundTruth>& gts,
                       const MatchMatrix& match);
/// Gradient with respect to every detection's class_scores, concatenated.
Eigen::VectorXd yolact_cls_loss_gradient(const std::vector<Detection>& dets,
                                         const std::vector<GroundTruth>& gts,
                                         const MatchMatrix& match);

/// Smooth-L1 between regression and encode(gt.box, gt.anchor), summed over
/// the four coordinates of each positive and divided by N.
double yolact_box_loss(const std::vector<Detection>& dets, const std::vector<GroundTruth>& gts,
                       const MatchMatrix& match);
/// Gradient with respect to every detection's regression, concatenated.
Eigen::VectorXd yolact_box_loss_gradient(const std::vector<Detection>& dets,
                                         const std::vector<GroundTruth>& gts,
                                         const MatchMatrix& match);

inline constexpr double kBceEpsilon = 1e-7;

/// Pixel-mean binary cross-entropy with predictions clamped to [eps, 1 - eps].
double mask_bce_loss(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& gt);
/// d/dpred; zero where the clamp is active.
Eigen::MatrixXd mask_bce_loss_gradient(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& gt);

/// Mean of mask_bce_loss over positives. Throws kUndefinedLoss when N = 0 and
/// kPrecondition when a positive lacks a mask.
double yolact_mask_loss(const std::vector<Detection>& dets, const std::vector<GroundTruth>& gts,
                        const MatchMatrix& match);

struct YolactWeights {
  double cls = 1.0;
  double box = 1.5;
  double mask = 6.125;
};

struct YolactComponents {
  double cls = 0.0;
  double box = 0.0;
  double mask = 0.0;
};

double yolact_loss(const YolactComponents& components, const YolactWeights& weights = {});
YolactComponents yolact_components(const std::vector<Detection>& dets,
                                   const std::vector<GroundTruth>& gts, const MatchMatrix& match);
double yolact_loss(const std::vector<Detection>& dets, const std::vector<GroundTruth>& gts,
                   const MatchMatrix& match, const YolactWeights& weights = {});

// ---- Yolo ----

struct YoloWeights {
  double coord = 5.0;
  double cls = 1.0;
  double obj = 1.0;
  double noobj = 0.5;

  void validate() const;
};

/// One anchor slot of a Yolo output or target. Box coordinates are
/// normalized to [0, 1].
struct YoloAnchor {
  Eigen::Vector4d box = Eigen::Vector4d::Zero();  // x, y, w, h
  double confidence = 0.0;
  Eigen::VectorXd class_probs;
  /// Target only: the slot is responsible for an object.
  bool object = false;
};

/// S x S cells with B anchors each, stored cell-major then anchor.
struct YoloGrid {
  int s = 1;
  int b = 1;
  std::vector<YoloAnchor> anchors;

  YoloGrid() = default;
  YoloGrid(int s, int b, int classes);
  YoloAnchor& at(int cell, int anchor) { return anchors[static_cast<std::size_t>(cell * b + anchor)]; }
  const YoloAnchor& at(int cell, int anchor) const {
    return anchors[static_cast<std::size_t>(cell * b + anchor)];
  }
};

struct YoloComponents {
  double box = 0.0;
  double cls = 0.0;
  double obj = 0.0;

  double total() const { return box + cls + obj; }
};

/// Box, class and confidence terms. Class error is squared per class.
/// Throws kDimension for inconsistent grids and kInvalidBox when a target box
/// size leaves [0, 1].
YoloComponents yolo_components(const YoloGrid& pred, const YoloGrid& target,
                               const YoloWeights& w = {});
double yolo_loss(const YoloGrid& pred, const YoloGrid& target, const YoloWeights& w = {});

/// Prediction parameters flattened per anchor as (x, y, w, h, conf, classes...).
Eigen::VectorXd pack(const YoloGrid& grid);
YoloGrid unpack(YoloGrid like, const Eigen::VectorXd& params);
Eigen::VectorXd yolo_loss_gradient(const YoloGrid& pred, const YoloGrid& target,
                                   const YoloWeights& w = {});

enum class DetectionParam { kClassScores, kRegression };
Eigen::VectorXd pack(const std::vector<Detection>& dets, DetectionParam which);
std::vector<Detection> unpack(std::vector<Detection> dets, DetectionParam which,
                              const Eigen::VectorXd& params);

// ---- evaluation ----

/// Overlap area over union area; 0 when the union is empty.
double iou(const BoundingBox& a, const BoundingBox& b);

struct ScoredBox {
  BoundingBox box;
  int label = 0;
  double score = 0.0;
};

struct LabeledBox {
  BoundingBox box;
  int label = 0;
};

/// Detections and ground truths of one image.
struct ImageAnnotations {
  std::vector<ScoredBox> detections;
  std::vector<LabeledBox> ground_truths;
};

struct PrPoint {
  double precision = 0.0;
  double recall = 0.0;
};

/// Precision/recall after each detection of `label`, in descending score
/// order (stable), using greedy one-to-one matching at `iou_threshold`.
/// Throws kUndefinedAp when the class has no ground truth.
std::vector<PrPoint> pr_curve(const std::vector<ImageAnnotations>& images, int label,
                              double iou_threshold);

/// Area under the all-point interpolated PR curve.
double interpolated_area(const std::vector<PrPoint>& curve);

/// Mean over classes that have ground truths of the per-class AP.
/// Throws kUndefinedAp when there are no ground truths at all.
double average_precision(const std::vector<ImageAnnotations>& images, double iou_threshold);

struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
};

/// (TP + TN) / total. Throws kUndefinedAccuracy when every count is zero.
double accuracy(const ConfusionCounts& c);

// ---- gradient checking ----

struct GradCheckResult {
  /// Largest |analytic - numeric| / max(|analytic|, |numeric|, 1e-6) over
  /// smooth coordinates.
  double max_relative_error = 0.0;
  std::size_t worst_index = 0;
  /// Coordinates where one-sided differences disagree; excluded from the max.
  std::vector<std::size_t> non_smooth;
};

using ScalarFn = std::function<double(const Eigen::VectorXd&)>;
using GradientFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Compares `gradient(x)` with a fourth-order central-difference estimate of
/// step `stencil_step`. One-sided differences of step `h` locate kinks.
GradCheckResult grad_check(const ScalarFn& f, const GradientFn& gradient, const Eigen::VectorXd& x,
                           double h = 1e-6, double stencil_step = 1e-3);

}  // namespace wastegrasp::detmath
