#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "wastegrasp/error.hpp"
#include "wastegrasp/tactile.hpp"

namespace wg = wastegrasp;
using namespace wastegrasp::tactile;

namespace {

constexpr int kW = kDefaultFrameWidth;
constexpr int kH = kDefaultFrameHeight;

wg::GrayImage with_block(int x0, int y0, int w, int h, std::uint8_t bg, std::uint8_t fg) {
  wg::GrayImage img(kW, kH, bg);
  for (int y = y0; y < y0 + h; ++y) {
    for (int x = x0; x < x0 + w; ++x) {
      img.at(x, y) = fg;
    }
  }
  return img;
}

TactileSequence sequence(const wg::GrayImage& first, const wg::GrayImage& last) {
  return TactileSequence({first, first, last, last});
}

wg::BinaryImage random_binary(std::mt19937_64& rng, int w, int h, double density) {
  std::bernoulli_distribution on(density);
  wg::BinaryImage img(w, h, 0);
  for (auto& v : img.data()) {
    v = on(rng) ? 1 : 0;
  }
  return img;
}

}  // namespace

TEST(Gray, BlackAndWeightedSum) {
  const auto gray = to_gray(wg::RgbImage(4, 3));
  for (auto v : gray.data()) {
    EXPECT_EQ(v, 0);
  }
  EXPECT_EQ(luma({100, 50, 200}), 82);
}

TEST(Gray, AllColoursMatchIntegerRounding) {
  for (int r = 0; r < 256; r += 3) {
    for (int g = 0; g < 256; g += 5) {
      for (int b = 0; b < 256; ++b) {
        ASSERT_EQ(luma({std::uint8_t(r), std::uint8_t(g), std::uint8_t(b)}), oracle::luma(r, g, b));
      }
    }
  }
}

TEST(Morphology, MatchesNaiveForSeveralElements) {
  std::mt19937_64 rng(7);
  const std::pair<StructuringElement, oracle::Grid> elements[] = {
      {StructuringElement::cross(7), oracle::cross_grid(7)},
      {StructuringElement::cross(3), oracle::cross_grid(3)},
      {StructuringElement::square(5), oracle::square_grid(5)},
  };
  for (int i = 0; i < 30; ++i) {
    const auto img = random_binary(rng, 37 + i, 23 + 2 * i, 0.75);
    for (const auto& [se, grid] : elements) {
      EXPECT_EQ(erode(img, se), oracle::erode(img, grid));
      EXPECT_EQ(dilate(img, se), oracle::dilate(img, grid));
      EXPECT_EQ(open(img, se), oracle::open(img, grid));
    }
  }
}

TEST(Morphology, FromGridRequiresSymmetry) {
  const std::vector<std::uint8_t> skewed{0, 1, 0, 0, 1, 1, 0, 0, 0};
  EXPECT_THROW(StructuringElement::from_grid(3, skewed), wg::Error);
  const auto plus = StructuringElement::from_grid(3, {0, 1, 0, 1, 1, 1, 0, 1, 0});
  std::mt19937_64 rng(9);
  const auto img = random_binary(rng, 30, 20, 0.7);
  EXPECT_EQ(open(img, plus), open(img, StructuringElement::cross(3)));
}

TEST(Morphology, OpeningIsIdempotentAndAntiExtensive) {
  std::mt19937_64 rng(13);
  const auto se = StructuringElement::cross(7);
  for (int i = 0; i < 50; ++i) {
    const auto img = random_binary(rng, 64, 48, 0.6 + 0.006 * i);
    const auto once = open(img, se);
    EXPECT_EQ(open(once, se), once);
    for (std::size_t p = 0; p < img.size(); ++p) {
      ASSERT_LE(once[p], img[p]);
    }
  }
}

TEST(SlipPreprocess, ShiftedBlockMatchesNaive) {
  const auto f0 = with_block(100, 100, 20, 20, 40, 200);
  const auto f3 = with_block(110, 100, 20, 20, 40, 200);
  const auto out = slip_preprocess(sequence(f0, f3), TactileConfig{});
  EXPECT_EQ(out, oracle::slip_preprocess(f0, f3, 25));
  EXPECT_GT(brightness(out), 0.0);
}

TEST(Brightness, Extremes) {
  EXPECT_EQ(brightness(wg::BinaryImage(10, 10, 0)), 0.0);
  EXPECT_EQ(brightness(wg::BinaryImage(10, 10, 1)), 1.0);
  EXPECT_EQ(brightness(wg::BinaryImage()), 0.0);
}

TEST(DetectSlip, IdenticalFramesAndShift) {
  const auto f0 = with_block(100, 100, 40, 40, 40, 200);
  EXPECT_FALSE(detect_slip(sequence(f0, f0), TactileConfig{}));
  const auto f3 = with_block(100, 112, 40, 40, 40, 200);
  const auto reference = oracle::slip_preprocess(f0, f3, 25);
  double set = 0;
  for (auto v : reference.data()) {
    set += v;
  }
  ASSERT_GT(set / (kW * kH), 0.01);
  EXPECT_TRUE(detect_slip(sequence(f0, f3), TactileConfig{}));
}

TEST(DetectSlip, StrictThresholdBoundary) {
  // The cross opening trims 9 pixels at each corner of a block, so a 12x67
  // block that appears between frames leaves 804 - 36 = 768 of 76800 pixels:
  // brightness exactly at the 0.01 threshold.
  const wg::GrayImage f0(kW, kH, 40);
  const auto at_threshold = with_block(50, 60, 12, 67, 40, 200);
  const auto out = slip_preprocess(sequence(f0, at_threshold), TactileConfig{});
  ASSERT_EQ(out, oracle::slip_preprocess(f0, at_threshold, 25));
  ASSERT_EQ(brightness(out), 0.01);
  EXPECT_FALSE(detect_slip(sequence(f0, at_threshold), TactileConfig{}));
  const auto above = with_block(50, 60, 13, 67, 40, 200);
  EXPECT_TRUE(detect_slip(sequence(f0, above), TactileConfig{}));
}

TEST(SlipPreprocess, ShapeMismatch) {
  const wg::GrayImage a(10, 10, 0);
  const wg::GrayImage b(10, 11, 0);
  EXPECT_THROW(TactileSequence({a, a, a, b}), wg::Error);
}

TEST(Contact, EnergyAgainstBaseline) {
  const wg::GrayImage baseline(kW, kH, 90);
  TactileConfig cfg;
  EXPECT_EQ(contact_energy(baseline, baseline, cfg), 0.0);
  EXPECT_FALSE(detect_contact(baseline, baseline, cfg));
  const auto pressed = with_block(20, 30, 50, 50, 90, 170);
  EXPECT_DOUBLE_EQ(contact_energy(pressed, baseline, cfg), 2500.0 / 76800.0);
  EXPECT_TRUE(detect_contact(pressed, baseline, cfg));
}

TEST(SensorSim, ContactAndSlipInClosedLoop) {
  const SensorModel model;
  const TactileConfig cfg;
  const BaselineContactDetector detector(sensor_background(model), cfg);
  EXPECT_TRUE(detector.in_contact(simulate_tactile_frame(55.0, 60.0, 0, 1, model)));
  EXPECT_FALSE(detector.in_contact(simulate_tactile_frame(65.0, 60.0, 0, 2, model)));
  EXPECT_FALSE(detector.in_contact(simulate_tactile_frame(140.0, 60.0, 0, 3, model)));

  auto gray = [&](int offset, std::uint64_t seed) {
    return to_gray(simulate_tactile_frame(55.0, 60.0, offset, seed, model));
  };
  EXPECT_FALSE(detect_slip(TactileSequence({gray(0, 4), gray(0, 5), gray(0, 6), gray(0, 7)}), cfg));
  EXPECT_TRUE(detect_slip(TactileSequence({gray(0, 4), gray(0, 5), gray(12, 6), gray(12, 7)}), cfg));
}

TEST(SensorSim, DeterministicPerSeed) {
  const SensorModel model;
  EXPECT_EQ(simulate_tactile_frame(50.0, 60.0, 3, 99, model),
            simulate_tactile_frame(50.0, 60.0, 3, 99, model));
  EXPECT_NE(simulate_tactile_frame(50.0, 60.0, 3, 99, model),
            simulate_tactile_frame(50.0, 60.0, 3, 100, model));
}

TEST(Config, Validation) {
  TactileConfig cfg;
  cfg.slip_brightness_threshold = 1.5;
  EXPECT_THROW(cfg.validate(), wg::Error);
  EXPECT_THROW(StructuringElement::cross(4), wg::Error);
}
