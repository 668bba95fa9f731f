#pragma once

// Optical tactile processing: grayscale conversion, the frame-difference slip
// detector (|I[t+3] - I[t]| thresholded, then opened with a 7x7 cross), the
// brightness measure it thresholds, contact detection against a no-contact
// baseline, and a synthetic sensor used for closed-loop simulation.

#include <array>
#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "wastegrasp/image.hpp"

namespace wastegrasp::tactile {

inline constexpr int kDefaultFrameWidth = 240;
inline constexpr int kDefaultFrameHeight = 320;

/// Binary structuring element stored as offsets from its centre.
class StructuringElement {
 public:
  /// size x size cross: centre row and centre column. `size` must be odd.
  static StructuringElement cross(int size = 7);
  static StructuringElement square(int size);
  /// From a row-major size x size grid of {0,1}; must be symmetric about its centre.
  static StructuringElement from_grid(int size, const std::vector<std::uint8_t>& grid);

  int size() const noexcept { return size_; }
  int radius() const noexcept { return size_ / 2; }
  const std::vector<std::pair<int, int>>& offsets() const noexcept { return offsets_; }
  /// True for the centred cross shape, which has a fast separable path.
  bool is_cross() const noexcept { return is_cross_; }

 private:
  int size_ = 0;
  bool is_cross_ = false;
  std::vector<std::pair<int, int>> offsets_;
};

struct TactileConfig {
  /// Gray-level difference a pixel must exceed to count as changed.
  int subtract_threshold = 25;
  /// Slip is reported when brightness is strictly greater than this fraction.
  double slip_brightness_threshold = 0.01;
  /// Contact is reported when the changed-pixel fraction is strictly greater.
  double contact_energy_threshold = 0.01;
  StructuringElement kernel = StructuringElement::cross(7);

  void validate() const;
};

/// Four time-ordered grayscale frames of identical size.
class TactileSequence {
 public:
  explicit TactileSequence(std::array<GrayImage, 4> frames);

  const GrayImage& operator[](std::size_t i) const { return frames_[i]; }
  const GrayImage& first() const { return frames_[0]; }
  const GrayImage& last() const { return frames_[3]; }
  int width() const noexcept { return frames_[0].width(); }
  int height() const noexcept { return frames_[0].height(); }

 private:
  std::array<GrayImage, 4> frames_;
};

/// round(0.299 R + 0.587 G + 0.114 B), computed in exact integer arithmetic.
std::uint8_t luma(Rgb c);
GrayImage to_gray(const RgbImage& frame);

/// 1 where |a - b| > threshold.
BinaryImage threshold_difference(const GrayImage& a, const GrayImage& b, int threshold);

/// Out-of-image pixels count as 0: erosion clears any pixel whose footprint
/// leaves the image; dilation ignores out-of-image footprint cells.
BinaryImage erode(const BinaryImage& img, const StructuringElement& se);
BinaryImage dilate(const BinaryImage& img, const StructuringElement& se);
BinaryImage open(const BinaryImage& img, const StructuringElement& se);

/// Opened binary difference image of the last and first frame.
BinaryImage slip_preprocess(const TactileSequence& seq, const TactileConfig& cfg);

/// Fraction of set pixels, in [0, 1]. An empty image has brightness 0.
double brightness(const BinaryImage& img);

bool detect_slip(const TactileSequence& seq, const TactileConfig& cfg);

/// Fraction of pixels whose gray level differs from the baseline by more than
/// cfg.subtract_threshold.
double contact_energy(const GrayImage& frame, const GrayImage& baseline, const TactileConfig& cfg);

bool detect_contact(const GrayImage& frame, const GrayImage& baseline, const TactileConfig& cfg);
bool detect_contact(const RgbImage& frame, const RgbImage& baseline, const TactileConfig& cfg);

/// Contact classifier interface; a learned model can be plugged in here.
class ContactDetector {
 public:
  virtual ~ContactDetector() = default;
  virtual bool in_contact(const RgbImage& frame) const = 0;
};

/// Reference detector: difference energy against a no-contact baseline frame.
class BaselineContactDetector final : public ContactDetector {
 public:
  BaselineContactDetector(RgbImage baseline, TactileConfig cfg);
  bool in_contact(const RgbImage& frame) const override;

 private:
  GrayImage baseline_;
  TactileConfig cfg_;
};

/// Parameters of the synthetic DIGIT-like sensor.
struct SensorModel {
  int width = kDefaultFrameWidth;
  int height = kDefaultFrameHeight;
  /// Gray-level amplitude of per-frame noise (uniform, +-amplitude).
  int noise_amplitude = 3;
  /// Imprint intensity at first touch and its growth per mm of squeeze.
  double contact_base = 60.0;
  double contact_gain = 4.0;
  /// Imprint ellipse semi-axes as fractions of the frame size.
  double blob_semi_x = 1.0 / 6.0;
  double blob_semi_y = 1.0 / 5.0;

  void validate() const;
};

/// Fixed sensor texture with no contact and no noise.
RgbImage sensor_background(const SensorModel& model);

/// Renders one frame. With `object_width > 0` and `opening <= object_width`
/// the fingers touch the object and an elliptical imprint appears, brighter by
/// contact_base + contact_gain * (object_width - opening) gray levels and
/// shifted down by `slip_offset` pixels. Otherwise only the background plus
/// noise is drawn. Deterministic in `noise_seed`.
RgbImage simulate_tactile_frame(double opening_mm, double object_width_mm, int slip_offset_px,
                                std::uint64_t noise_seed, const SensorModel& model = {});

/// Same, drawing onto a precomputed sensor_background(model).
RgbImage simulate_tactile_frame(const RgbImage& background, double opening_mm,
                                double object_width_mm, int slip_offset_px,
                                std::uint64_t noise_seed, const SensorModel& model);

}  // namespace wastegrasp::tactile
