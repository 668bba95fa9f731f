#include <algorithm>
#include <cmath>
#include <string>

#include "wastegrasp/detmath.hpp"
#include "wastegrasp/error.hpp"

namespace wastegrasp::detmath {

namespace {

void require_positives(std::size_t n) {
  if (n == 0) {
    throw Error(ErrorCode::kUndefinedLoss, "loss is undefined without matched detections");
  }
}

std::size_t class_count(const std::vector<Detection>& dets) {
  std::size_t c = 0;
  for (const auto& d : dets) {
    if (d.class_scores.size() == 0 || !d.class_scores.allFinite()) {
      throw Error(ErrorCode::kDimension, "class scores must be non-empty and finite");
    }
    if (c != 0 && static_cast<std::size_t>(d.class_scores.size()) != c) {
      throw Error(ErrorCode::kDimension, "detections disagree on class count");
    }
    c = static_cast<std::size_t>(d.class_scores.size());
  }
  return c;
}

Eigen::VectorXd softmax(const Eigen::VectorXd& scores) {
  const Eigen::VectorXd e = (scores.array() - scores.maxCoeff()).exp();
  return e / e.sum();
}

// -log softmax(scores)[k], via log-sum-exp.
double neg_log_softmax(const Eigen::VectorXd& scores, int k) {
  const double m = scores.maxCoeff();
  return m + std::log((scores.array() - m).exp().sum()) - scores(k);
}

int target_class(const std::vector<GroundTruth>& gts, const MatchMatrix& match, std::size_t i,
                 std::size_t classes) {
  const int label = gts[*match.gt_of[i]].label;
  if (label < 0 || static_cast<std::size_t>(label) >= classes) {
    throw Error(ErrorCode::kDimension, "ground-truth label outside the class range");
  }
  return label;
}

double clamp_p(double p) { return std::clamp(p, kBceEpsilon, 1.0 - kBceEpsilon); }

void check_yolo_grids(const YoloGrid& pred, const YoloGrid& target) {
  if (pred.s < 1 || pred.b < 1 || pred.s != target.s || pred.b != target.b) {
    throw Error(ErrorCode::kDimension, "Yolo grids must share S >= 1 and B >= 1");
  }
  const auto expected = static_cast<std::size_t>(pred.s) * pred.s * pred.b;
  if (pred.anchors.size() != expected || target.anchors.size() != expected) {
    throw Error(ErrorCode::kDimension, "Yolo grid must hold S*S*B anchors");
  }
  for (std::size_t i = 0; i < expected; ++i) {
    if (pred.anchors[i].class_probs.size() != target.anchors[i].class_probs.size() ||
        pred.anchors[i].class_probs.size() != pred.anchors[0].class_probs.size()) {
      throw Error(ErrorCode::kDimension, "Yolo anchors disagree on class count");
    }
    const auto& t = target.anchors[i];
    if (t.object && !(t.box(2) >= 0.0 && t.box(2) <= 1.0 && t.box(3) >= 0.0 && t.box(3) <= 1.0)) {
      throw Error(ErrorCode::kInvalidBox, "target box size must be normalized to [0, 1]");
    }
  }
}

}  // namespace

void BoundingBox::validate() const {
  if (!std::isfinite(cx) || !std::isfinite(cy) || !(w > 0.0) || !(h > 0.0) || !std::isfinite(w) ||
      !std::isfinite(h)) {
    throw Error(ErrorCode::kInvalidBox, "box needs finite centre and positive size");
  }
}

Eigen::Vector4d encode(const BoundingBox& gt, const BoundingBox& anchor) {
  gt.validate();
  anchor.validate();
  return {(gt.cx - anchor.cx) / anchor.w, (gt.cy - anchor.cy) / anchor.h,
          std::log(gt.w / anchor.w), std::log(gt.h / anchor.h)};
}

BoundingBox decode(const Eigen::Vector4d& l, const BoundingBox& anchor) {
  anchor.validate();
  return {anchor.cx + l(0) * anchor.w, anchor.cy + l(1) * anchor.h, anchor.w * std::exp(l(2)),
          anchor.h * std::exp(l(3))};
}

std::size_t MatchMatrix::positives() const {
  return static_cast<std::size_t>(
      std::count_if(gt_of.begin(), gt_of.end(), [](const auto& j) { return j.has_value(); }));
}

void MatchMatrix::validate(std::size_t detections, std::size_t ground_truths) const {
  if (gt_of.size() != detections) {
    throw Error(ErrorCode::kDimension, "match matrix needs one entry per detection");
  }
  for (const auto& j : gt_of) {
    if (j && *j >= ground_truths) {
      throw Error(ErrorCode::kDimension, "match refers to a missing ground truth");
    }
  }
  for (std::size_t i : negatives) {
    if (i >= detections || gt_of[i]) {
      throw Error(ErrorCode::kDimension, "negative index is out of range or matched");
    }
  }
}

std::vector<Eigen::MatrixXd> assemble_masks(const std::vector<Eigen::MatrixXd>& prototypes,
                                            const std::vector<Eigen::VectorXd>& coefficients) {
  if (prototypes.empty()) {
    throw Error(ErrorCode::kDimension, "at least one prototype is required");
  }
  const Eigen::Index rows = prototypes[0].rows();
  const Eigen::Index cols = prototypes[0].cols();
  const auto k = static_cast<Eigen::Index>(prototypes.size());
  // T1 (pixels x k) holds the prototypes as columns.
  Eigen::MatrixXd t1(rows * cols, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const auto& p = prototypes[static_cast<std::size_t>(j)];
    if (p.rows() != rows || p.cols() != cols) {
      throw Error(ErrorCode::kDimension, "prototypes must share one shape");
    }
    t1.col(j) = Eigen::Map<const Eigen::VectorXd>(p.data(), p.size());
  }
  std::vector<Eigen::MatrixXd> masks;
  masks.reserve(coefficients.size());
  for (const auto& a : coefficients) {
    if (a.size() != k) {
      throw Error(ErrorCode::kDimension, "coefficient length " + std::to_string(a.size()) +
                                             " differs from prototype count " + std::to_string(k));
    }
    const Eigen::VectorXd z = t1 * a;
    Eigen::MatrixXd m(rows, cols);
    Eigen::Map<Eigen::VectorXd>(m.data(), m.size()) = 1.0 / (1.0 + (-z.array()).exp());
    masks.push_back(std::move(m));
  }
  return masks;
}

double smooth_l1(double x) {
  const double a = std::abs(x);
  return a < 1.0 ? 0.5 * x * x : a - 0.5;
}

double smooth_l1_derivative(double x) {
  if (std::abs(x) < 1.0) {
    return x;
  }
  return x > 0.0 ? 1.0 : -1.0;
}

double yolact_cls_loss(const std::vector<Detection>& dets, const std::vector<GroundTruth>& gts,
                       const MatchMatrix& match) {
  match.validate(dets.size(), gts.size());
  const std::size_t n = match.positives();
  require_positives(n);
  const std::size_t classes = class_count(dets);
  double pos = 0.0;
  for (std::size_t i = 0; i < dets.size(); ++i) {
    if (match.gt_of[i]) {
      pos += neg_log_softmax(dets[i].class_scores, target_class(gts, match, i, classes));
    }
  }
  double neg = 0.0;
  for (std::size_t i : match.negatives) {
    neg += neg_log_softmax(dets[i].class_scores, 0);
  }
  return (pos + neg) / static_cast<double>(n);
}

Eigen::VectorXd yolact_cls_loss_gradient(const std::vector<Detection>& dets,
                                         const std::vector<GroundTruth>& gts,
                                         const MatchMatrix& match) {
  match.validate(dets.size(), gts.size());
  const std::size_t n = match.positives();
  require_positives(n);
  const std::size_t classes = class_count(dets);
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dets.size() * classes));
  auto add = [&](std::size_t i, int k) {
    Eigen::VectorXd g = softmax(dets[i].class_scores);
    g(k) -= 1.0;
    grad.segment(static_cast<Eigen::Index>(i * classes), static_cast<Eigen::Index>(classes)) +=
        g / static_cast<double>(n);
  };
  for (std::size_t i = 0; i < dets.size(); ++i) {
    if (match.gt_of[i]) {
      add(i, target_class(gts, match, i, classes));
    }
  }
  for (std::size_t i : match.negatives) {
    add(i, 0);
  }
  return grad;
}

double yolact_box_loss(const std::vector<Detection>& dets, const std::vector<GroundTruth>& gts,
                       const MatchMatrix& match) {
  match.validate(dets.size(), gts.size());
  const std::size_t n = match.positives();
  require_positives(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < dets.size(); ++i) {
    if (!match.gt_of[i]) {
      continue;
    }
    const auto& gt = gts[*match.gt_of[i]];
    const Eigen::Vector4d r = dets[i].regression - encode(gt.box, gt.anchor);
    for (int m = 0; m < 4; ++m) {
      sum += smooth_l1(r(m));
    }
  }
  return sum / static_cast<double>(n);
}

Eigen::VectorXd yolact_box_loss_gradient(const std::vector<Detection>& dets,
                                         const std::vector<GroundTruth>& gts,
                                         const MatchMatrix& match) {
  match.validate(dets.size(), gts.size());
  const std::size_t n = match.positives();
  require_positives(n);
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(4 * dets.size()));
  for (std::size_t i = 0; i < dets.size(); ++i) {
    if (!match.gt_of[i]) {
      continue;
    }
    const auto& gt = gts[*match.gt_of[i]];
    const Eigen::Vector4d r = dets[i].regression - encode(gt.box, gt.anchor);
    for (int m = 0; m < 4; ++m) {
      grad(static_cast<Eigen::Index>(4 * i) + m) = smooth_l1_derivative(r(m)) / static_cast<double>(n);
    }
  }
  return grad;
}

double mask_bce_loss(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& gt) {
  if (pred.rows() != gt.rows() || pred.cols() != gt.cols() || pred.size() == 0) {
    throw Error(ErrorCode::kDimension, "mask shapes differ or are empty");
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < pred.size(); ++i) {
    const double p = clamp_p(pred.data()[i]);
    const double y = gt.data()[i];
    sum += y * std::log(p) + (1.0 - y) * std::log(1.0 - p);
  }
  return -sum / static_cast<double>(pred.size());
}

Eigen::MatrixXd mask_bce_loss_gradient(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& gt) {
  if (pred.rows() != gt.rows() || pred.cols() != gt.cols() || pred.size() == 0) {
    throw Error(ErrorCode::kDimension, "mask shapes differ or are empty");
  }
  Eigen::MatrixXd grad(pred.rows(), pred.cols());
  const double n = static_cast<double>(pred.size());
  for (Eigen::Index i = 0; i < pred.size(); ++i) {
    const double p = pred.data()[i];
    const double y = gt.data()[i];
    if (p <= kBceEpsilon || p >= 1.0 - kBceEpsilon) {
      grad.data()[i] = 0.0;
    } else {
      grad.data()[i] = -(y / p - (1.0 - y) / (1.0 - p)) / n;
    }
  }
  return grad;
}

double yolact_mask_loss(const std::vector<Detection>& dets, const std::vector<GroundTruth>& gts,
                        const MatchMatrix& match) {
  match.validate(dets.size(), gts.size());
  const std::size_t n = match.positives();
  require_positives(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < dets.size(); ++i) {
    if (!match.gt_of[i]) {
      continue;
    }
    const auto& gt = gts[*match.gt_of[i]];
    if (!dets[i].mask || !gt.mask) {
      throw Error(ErrorCode::kPrecondition, "matched detection and ground truth need masks");
    }
    sum += mask_bce_loss(*dets[i].mask, *gt.mask);
  }
  return sum / static_cast<double>(n);
}

double yolact_loss(const YolactComponents& c, const YolactWeights& w) {
  return w.cls * c.cls + w.box * c.box + w.mask * c.mask;
}

YolactComponents yolact_components(const std::vector<Detection>& dets,
                                   const std::vector<GroundTruth>& gts, const MatchMatrix& match) {
  return {yolact_cls_loss(dets, gts, match), yolact_box_loss(dets, gts, match),
          yolact_mask_loss(dets, gts, match)};
}

double yolact_loss(const std::vector<Detection>& dets, const std::vector<GroundTruth>& gts,
                   const MatchMatrix& match, const YolactWeights& weights) {
  return yolact_loss(yolact_components(dets, gts, match), weights);
}

void YoloWeights::validate() const {
  if (!(coord >= 0.0 && cls >= 0.0 && obj >= 0.0 && noobj >= 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "Yolo loss weights must be non-negative");
  }
}

YoloGrid::YoloGrid(int s_, int b_, int classes) : s(s_), b(b_) {
  if (s < 1 || b < 1 || classes < 1) {
    throw Error(ErrorCode::kDimension, "Yolo grid needs S, B and class count >= 1");
  }
  YoloAnchor proto;
  proto.class_probs = Eigen::VectorXd::Zero(classes);
  anchors.assign(static_cast<std::size_t>(s) * s * b, proto);
}

YoloComponents yolo_components(const YoloGrid& pred, const YoloGrid& target, const YoloWeights& w) {
  w.validate();
  check_yolo_grids(pred, target);
  YoloComponents out;
  double box = 0.0;
  double cls = 0.0;
  double obj = 0.0;
  double noobj = 0.0;
  for (std::size_t i = 0; i < pred.anchors.size(); ++i) {
    const auto& p = pred.anchors[i];
    const auto& t = target.anchors[i];
    const double dc = t.confidence - p.confidence;
    if (t.object) {
      box += (2.0 - t.box(2) * t.box(3)) * (t.box - p.box).squaredNorm();
      cls += (t.class_probs - p.class_probs).squaredNorm();
      obj += dc * dc;
    } else {
      noobj += dc * dc;
    }
  }
  out.box = w.coord * box;
  out.cls = w.cls * cls;
  out.obj = w.noobj * noobj + w.obj * obj;
  return out;
}

double yolo_loss(const YoloGrid& pred, const YoloGrid& target, const YoloWeights& w) {
  return yolo_components(pred, target, w).total();
}

Eigen::VectorXd pack(const YoloGrid& grid) {
  const Eigen::Index c = grid.anchors.empty() ? 0 : grid.anchors[0].class_probs.size();
  Eigen::VectorXd out(static_cast<Eigen::Index>(grid.anchors.size()) * (5 + c));
  Eigen::Index k = 0;
  for (const auto& a : grid.anchors) {
    if (a.class_probs.size() != c) {
      throw Error(ErrorCode::kDimension, "Yolo anchors disagree on class count");
    }
    out.segment<4>(k) = a.box;
    out(k + 4) = a.confidence;
    out.segment(k + 5, c) = a.class_probs;
    k += 5 + c;
  }
  return out;
}

YoloGrid unpack(YoloGrid like, const Eigen::VectorXd& params) {
  const Eigen::Index c = like.anchors.empty() ? 0 : like.anchors[0].class_probs.size();
  if (params.size() != static_cast<Eigen::Index>(like.anchors.size()) * (5 + c)) {
    throw Error(ErrorCode::kDimension, "parameter vector does not match the Yolo grid");
  }
  Eigen::Index k = 0;
  for (auto& a : like.anchors) {
    a.box = params.segment<4>(k);
    a.confidence = params(k + 4);
    a.class_probs = params.segment(k + 5, c);
    k += 5 + c;
  }
  return like;
}

Eigen::VectorXd yolo_loss_gradient(const YoloGrid& pred, const YoloGrid& target,
                                   const YoloWeights& w) {
  w.validate();
  check_yolo_grids(pred, target);
  const Eigen::Index c = pred.anchors[0].class_probs.size();
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(pred.anchors.size()) * (5 + c));
  Eigen::Index k = 0;
  for (std::size_t i = 0; i < pred.anchors.size(); ++i) {
    const auto& p = pred.anchors[i];
    const auto& t = target.anchors[i];
    const double dc = p.confidence - t.confidence;
    if (t.object) {
      grad.segment<4>(k) = 2.0 * w.coord * (2.0 - t.box(2) * t.box(3)) * (p.box - t.box);
      grad(k + 4) = 2.0 * w.obj * dc;
      grad.segment(k + 5, c) = 2.0 * w.cls * (p.class_probs - t.class_probs);
    } else {
      grad(k + 4) = 2.0 * w.noobj * dc;
    }
    k += 5 + c;
  }
  return grad;
}

Eigen::VectorXd pack(const std::vector<Detection>& dets, DetectionParam which) {
  if (which == DetectionParam::kRegression) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(4 * dets.size()));
    for (std::size_t i = 0; i < dets.size(); ++i) {
      out.segment<4>(static_cast<Eigen::Index>(4 * i)) = dets[i].regression;
    }
    return out;
  }
  const auto c = static_cast<Eigen::Index>(class_count(dets));
  Eigen::VectorXd out(static_cast<Eigen::Index>(dets.size()) * c);
  for (std::size_t i = 0; i < dets.size(); ++i) {
    out.segment(static_cast<Eigen::Index>(i) * c, c) = dets[i].class_scores;
  }
  return out;
}

std::vector<Detection> unpack(std::vector<Detection> dets, DetectionParam which,
                              const Eigen::VectorXd& params) {
  if (which == DetectionParam::kRegression) {
    if (params.size() != static_cast<Eigen::Index>(4 * dets.size())) {
      throw Error(ErrorCode::kDimension, "parameter vector does not match the detections");
    }
    for (std::size_t i = 0; i < dets.size(); ++i) {
      dets[i].regression = params.segment<4>(static_cast<Eigen::Index>(4 * i));
    }
    return dets;
  }
  const auto c = static_cast<Eigen::Index>(class_count(dets));
  if (params.size() != static_cast<Eigen::Index>(dets.size()) * c) {
    throw Error(ErrorCode::kDimension, "parameter vector does not match the detections");
  }
  for (std::size_t i = 0; i < dets.size(); ++i) {
    dets[i].class_scores = params.segment(static_cast<Eigen::Index>(i) * c, c);
  }
  return dets;
}

}  // namespace wastegrasp::detmath
