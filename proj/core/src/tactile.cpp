#include "wastegrasp/tactile.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <string>

#include "wastegrasp/error.hpp"

namespace wastegrasp::tactile {

namespace {

// Counts of set pixels in [i - r, i + r] along one line, clipped to the line.
// `stride` steps between consecutive elements of the line.
void window_counts(const std::uint8_t* line, int n, std::size_t stride, int r,
                   std::vector<int>& prefix, std::vector<int>& out) {
  prefix.assign(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 0; i < n; ++i) {
    prefix[i + 1] = prefix[i] + line[static_cast<std::size_t>(i) * stride];
  }
  out.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int lo = std::max(0, i - r);
    const int hi = std::min(n, i + r + 1);
    out[i] = prefix[hi] - prefix[lo];
  }
}

enum class Morph { kErode, kDilate };

// Cross = horizontal segment U vertical segment. Erosion by a union is the
// intersection of the erosions; dilation by a union is the union of dilations.
BinaryImage cross_morph(const BinaryImage& img, int r, Morph op) {
  const int w = img.width();
  const int h = img.height();
  BinaryImage horizontal(w, h);
  BinaryImage out(w, h);
  const int full = 2 * r + 1;
  std::vector<int> prefix;
  std::vector<int> counts;
  const std::uint8_t* src = img.data().data();
  for (int y = 0; y < h; ++y) {
    window_counts(src + static_cast<std::size_t>(y) * w, w, 1, r, prefix, counts);
    for (int x = 0; x < w; ++x) {
      const bool inside = x - r >= 0 && x + r < w;
      horizontal.at(x, y) = op == Morph::kErode ? (inside && counts[x] == full) : (counts[x] > 0);
    }
  }
  for (int x = 0; x < w; ++x) {
    window_counts(src + x, h, static_cast<std::size_t>(w), r, prefix, counts);
    for (int y = 0; y < h; ++y) {
      const bool inside = y - r >= 0 && y + r < h;
      if (op == Morph::kErode) {
        out.at(x, y) = horizontal.at(x, y) && inside && counts[y] == full;
      } else {
        out.at(x, y) = horizontal.at(x, y) || counts[y] > 0;
      }
    }
  }
  return out;
}

BinaryImage generic_morph(const BinaryImage& img, const StructuringElement& se, Morph op) {
  BinaryImage out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      bool value = op == Morph::kErode;
      for (const auto& [dx, dy] : se.offsets()) {
        const int sx = x + dx;
        const int sy = y + dy;
        const bool set = img.contains(sx, sy) && img.at(sx, sy) != 0;
        if (op == Morph::kErode && !set) {
          value = false;
          break;
        }
        if (op == Morph::kDilate && set) {
          value = true;
          break;
        }
      }
      out.at(x, y) = value ? 1 : 0;
    }
  }
  return out;
}

}  // namespace

StructuringElement StructuringElement::cross(int size) {
  if (size < 1 || size % 2 == 0) {
    throw Error(ErrorCode::kInvalidConfig, "structuring element size must be odd and positive");
  }
  std::vector<std::uint8_t> grid(static_cast<std::size_t>(size) * size, 0);
  const int c = size / 2;
  for (int i = 0; i < size; ++i) {
    grid[static_cast<std::size_t>(c) * size + i] = 1;
    grid[static_cast<std::size_t>(i) * size + c] = 1;
  }
  return from_grid(size, grid);
}

StructuringElement StructuringElement::square(int size) {
  if (size < 1 || size % 2 == 0) {
    throw Error(ErrorCode::kInvalidConfig, "structuring element size must be odd and positive");
  }
  return from_grid(size, std::vector<std::uint8_t>(static_cast<std::size_t>(size) * size, 1));
}

StructuringElement StructuringElement::from_grid(int size, const std::vector<std::uint8_t>& grid) {
  if (size < 1 || size % 2 == 0 || grid.size() != static_cast<std::size_t>(size) * size) {
    throw Error(ErrorCode::kInvalidConfig, "structuring element grid must be odd-sized square");
  }
  StructuringElement se;
  se.size_ = size;
  const int r = size / 2;
  bool cross_shape = true;
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const std::uint8_t v = grid[static_cast<std::size_t>(y) * size + x];
      if (v > 1) {
        throw Error(ErrorCode::kInvalidConfig, "structuring element values must be 0 or 1");
      }
      if (v != grid[static_cast<std::size_t>(size - 1 - y) * size + (size - 1 - x)]) {
        throw Error(ErrorCode::kInvalidConfig, "structuring element must be centre-symmetric");
      }
      if (v != 0) {
        se.offsets_.emplace_back(x - r, y - r);
      }
      const bool on_cross = x == r || y == r;
      cross_shape = cross_shape && (v != 0) == on_cross;
    }
  }
  if (se.offsets_.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "structuring element is empty");
  }
  se.is_cross_ = cross_shape;
  return se;
}

void TactileConfig::validate() const {
  if (subtract_threshold < 0 || subtract_threshold > 255) {
    throw Error(ErrorCode::kInvalidConfig, "subtract_threshold must lie in [0, 255]");
  }
  auto fraction = [](double f) { return f >= 0.0 && f <= 1.0; };
  if (!fraction(slip_brightness_threshold) || !fraction(contact_energy_threshold)) {
    throw Error(ErrorCode::kInvalidConfig, "tactile fractions must lie in [0, 1]");
  }
}

TactileSequence::TactileSequence(std::array<GrayImage, 4> frames) : frames_(std::move(frames)) {
  for (std::size_t i = 1; i < frames_.size(); ++i) {
    require_same_shape(frames_[0], frames_[i], "tactile sequence frame " + std::to_string(i));
  }
}

std::uint8_t luma(Rgb c) {
  const int weighted = 299 * c.r + 587 * c.g + 114 * c.b;
  return static_cast<std::uint8_t>(std::min(255, (weighted + 500) / 1000));
}

GrayImage to_gray(const RgbImage& frame) {
  GrayImage out(frame.width(), frame.height());
  for (std::size_t i = 0; i < frame.size(); ++i) {
    out[i] = luma(frame[i]);
  }
  return out;
}

BinaryImage threshold_difference(const GrayImage& a, const GrayImage& b, int threshold) {
  require_same_shape(a, b, "frame difference");
  BinaryImage out(a.width(), a.height());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out[i] = std::abs(static_cast<int>(a[i]) - static_cast<int>(b[i])) > threshold ? 1 : 0;
  }
  return out;
}

BinaryImage erode(const BinaryImage& img, const StructuringElement& se) {
  return se.is_cross() ? cross_morph(img, se.radius(), Morph::kErode)
                       : generic_morph(img, se, Morph::kErode);
}

BinaryImage dilate(const BinaryImage& img, const StructuringElement& se) {
  return se.is_cross() ? cross_morph(img, se.radius(), Morph::kDilate)
                       : generic_morph(img, se, Morph::kDilate);
}

BinaryImage open(const BinaryImage& img, const StructuringElement& se) {
  return dilate(erode(img, se), se);
}

BinaryImage slip_preprocess(const TactileSequence& seq, const TactileConfig& cfg) {
  return open(threshold_difference(seq.last(), seq.first(), cfg.subtract_threshold), cfg.kernel);
}

double brightness(const BinaryImage& img) {
  if (img.empty()) {
    return 0.0;
  }
  std::size_t set = 0;
  for (std::uint8_t v : img.data()) {
    set += v != 0 ? 1 : 0;
  }
  return static_cast<double>(set) / static_cast<double>(img.size());
}

bool detect_slip(const TactileSequence& seq, const TactileConfig& cfg) {
  return brightness(slip_preprocess(seq, cfg)) > cfg.slip_brightness_threshold;
}

double contact_energy(const GrayImage& frame, const GrayImage& baseline,
                      const TactileConfig& cfg) {
  return brightness(threshold_difference(frame, baseline, cfg.subtract_threshold));
}

bool detect_contact(const GrayImage& frame, const GrayImage& baseline, const TactileConfig& cfg) {
  return contact_energy(frame, baseline, cfg) > cfg.contact_energy_threshold;
}

bool detect_contact(const RgbImage& frame, const RgbImage& baseline, const TactileConfig& cfg) {
  return detect_contact(to_gray(frame), to_gray(baseline), cfg);
}

BaselineContactDetector::BaselineContactDetector(RgbImage baseline, TactileConfig cfg)
    : baseline_(to_gray(baseline)), cfg_(std::move(cfg)) {
  cfg_.validate();
}

bool BaselineContactDetector::in_contact(const RgbImage& frame) const {
  return detect_contact(to_gray(frame), baseline_, cfg_);
}

void SensorModel::validate() const {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::kInvalidConfig, "sensor frame must be at least 1x1");
  }
  if (noise_amplitude < 0 || noise_amplitude > 127) {
    throw Error(ErrorCode::kInvalidConfig, "noise amplitude must lie in [0, 127]");
  }
  if (!(blob_semi_x > 0.0) || !(blob_semi_y > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "imprint semi-axes must be positive");
  }
}

RgbImage sensor_background(const SensorModel& model) {
  model.validate();
  RgbImage out(model.width, model.height);
  for (int y = 0; y < model.height; ++y) {
    for (int x = 0; x < model.width; ++x) {
      const double shade = 90.0 + 20.0 * std::sin(x / 9.0) * std::cos(y / 11.0);
      const int g = static_cast<int>(std::lround(shade));
      out.at(x, y) = Rgb{static_cast<std::uint8_t>(g - 10), static_cast<std::uint8_t>(g),
                         static_cast<std::uint8_t>(g + 25)};
    }
  }
  return out;
}

RgbImage simulate_tactile_frame(double opening_mm, double object_width_mm, int slip_offset_px,
                                std::uint64_t noise_seed, const SensorModel& model) {
  return simulate_tactile_frame(sensor_background(model), opening_mm, object_width_mm,
                                slip_offset_px, noise_seed, model);
}

RgbImage simulate_tactile_frame(const RgbImage& background, double opening_mm,
                                double object_width_mm, int slip_offset_px,
                                std::uint64_t noise_seed, const SensorModel& model) {
  if (!(opening_mm >= 0.0)) {
    throw Error(ErrorCode::kPrecondition, "gripper opening must be non-negative");
  }
  require_same_shape(background, RgbImage(model.width, model.height), "sensor background");
  RgbImage frame = background;

  const bool touching = object_width_mm > 0.0 && opening_mm <= object_width_mm;
  const double imprint =
      touching ? model.contact_base + model.contact_gain * (object_width_mm - opening_mm) : 0.0;
  const int lift = static_cast<int>(std::lround(std::min(imprint, 255.0)));

  const double cx = model.width / 2.0;
  const double cy = model.height / 2.0 + slip_offset_px;
  const double ax = model.width * model.blob_semi_x;
  const double ay = model.height * model.blob_semi_y;

  std::mt19937_64 rng(noise_seed);
  const int span = 2 * model.noise_amplitude + 1;
  auto add = [](std::uint8_t v, int delta) {
    return static_cast<std::uint8_t>(std::clamp(static_cast<int>(v) + delta, 0, 255));
  };
  for (int y = 0; y < model.height; ++y) {
    for (int x = 0; x < model.width; ++x) {
      int delta = static_cast<int>(rng() % static_cast<std::uint64_t>(span)) - model.noise_amplitude;
      if (lift > 0) {
        const double ex = (x - cx) / ax;
        const double ey = (y - cy) / ay;
        if (ex * ex + ey * ey <= 1.0) {
          delta += lift;
        }
      }
      Rgb& px = frame.at(x, y);
      px = Rgb{add(px.r, delta), add(px.g, delta), add(px.b, delta)};
    }
  }
  return frame;
}

}  // namespace wastegrasp::tactile
