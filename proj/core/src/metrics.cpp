#include <algorithm>
#include <numeric>
#include <string>
#include <set>
#include <tuple>

#include "wastegrasp/detmath.hpp"
#include "wastegrasp/error.hpp"

namespace wastegrasp::detmath {

double iou(const BoundingBox& a, const BoundingBox& b) {
  const double iw = std::max(0.0, std::min(a.x1(), b.x1()) - std::max(a.x0(), b.x0()));
  const double ih = std::max(0.0, std::min(a.y1(), b.y1()) - std::max(a.y0(), b.y0()));
  const double inter = iw * ih;
  const double uni = a.area() + b.area() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

std::vector<PrPoint> pr_curve(const std::vector<ImageAnnotations>& images, int label,
                              double iou_threshold) {
  struct Ref {
    double score;
    std::size_t image;
    std::size_t det;
  };
  std::vector<Ref> order;
  std::size_t total_gt = 0;
  for (std::size_t im = 0; im < images.size(); ++im) {
    for (std::size_t d = 0; d < images[im].detections.size(); ++d) {
      if (images[im].detections[d].label == label) {
        order.push_back({images[im].detections[d].score, im, d});
      }
    }
    for (const auto& g : images[im].ground_truths) {
      total_gt += g.label == label ? 1 : 0;
    }
  }
  if (total_gt == 0) {
    throw Error(ErrorCode::kUndefinedAp, "no ground truth of class " + std::to_string(label));
  }
  std::stable_sort(order.begin(), order.end(),
                   [](const Ref& x, const Ref& y) { return x.score > y.score; });

  std::vector<std::vector<bool>> taken(images.size());
  for (std::size_t im = 0; im < images.size(); ++im) {
    taken[im].assign(images[im].ground_truths.size(), false);
  }
  std::vector<PrPoint> curve;
  curve.reserve(order.size());
  std::size_t tp = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& img = images[order[k].image];
    const BoundingBox& box = img.detections[order[k].det].box;
    double best = -1.0;
    std::size_t best_j = 0;
    for (std::size_t j = 0; j < img.ground_truths.size(); ++j) {
      if (img.ground_truths[j].label != label || taken[order[k].image][j]) {
        continue;
      }
      const double o = iou(box, img.ground_truths[j].box);
      if (o > best) {
        best = o;
        best_j = j;
      }
    }
    if (best >= iou_threshold) {
      taken[order[k].image][best_j] = true;
      ++tp;
    }
    curve.push_back({static_cast<double>(tp) / static_cast<double>(k + 1),
                     static_cast<double>(tp) / static_cast<double>(total_gt)});
  }
  return curve;
}

double interpolated_area(const std::vector<PrPoint>& curve) {
  double area = 0.0;
  double envelope = 0.0;
  // Walk backwards so `envelope` is the max precision at recall >= r_k.
  for (std::size_t k = curve.size(); k-- > 0;) {
    envelope = std::max(envelope, curve[k].precision);
    const double prev_recall = k == 0 ? 0.0 : curve[k - 1].recall;
    area += (curve[k].recall - prev_recall) * envelope;
  }
  return area;
}

double average_precision(const std::vector<ImageAnnotations>& images, double iou_threshold) {
  std::set<int> labels;
  for (const auto& im : images) {
    for (const auto& g : im.ground_truths) {
      labels.insert(g.label);
    }
  }
  if (labels.empty()) {
    throw Error(ErrorCode::kUndefinedAp, "average precision needs at least one ground truth");
  }
  double sum = 0.0;
  for (int label : labels) {
    sum += interpolated_area(pr_curve(images, label, iou_threshold));
  }
  return sum / static_cast<double>(labels.size());
}

double accuracy(const ConfusionCounts& c) {
  const std::uint64_t total = c.tp + c.tn + c.fp + c.fn;
  if (total == 0) {
    throw Error(ErrorCode::kUndefinedAccuracy, "accuracy needs at least one counted sample");
  }
  return static_cast<double>(c.tp + c.tn) / static_cast<double>(total);
}

}  // namespace wastegrasp::detmath
