#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "trace_invariants.hpp"
#include "wastegrasp/controller.hpp"
#include "wastegrasp/io.hpp"

namespace wg = wastegrasp;
using namespace wastegrasp::control;

namespace {

ControllerState state_in(Mode mode, double opening, double step = 1.0) {
  ControllerState s;
  s.mode = mode;
  s.gripper.opening = opening;
  s.gripper.close_step = step;
  return s;
}

ControllerTrace run_or_partial(const ManipulationScenario& s, std::optional<wg::ErrorCode>& error) {
  try {
    return run_manipulation(s);
  } catch (const ManipulationError& e) {
    error = e.code();
    return e.trace();
  }
}

ControllerTrace golden(const std::string& name) {
  return trace_from_csv(wg::io::read_text(std::string(WASTEGRASP_TEST_DATA) + "/golden/" + name + ".csv"));
}

ManipulationScenario scenario(const std::string& name) {
  return wg::io::scenario_from_json(
      wg::io::read_json(std::string(WASTEGRASP_SOURCE_DIR) + "/data/scenarios/" + name + ".json"));
}

}  // namespace

TEST(Step, IdleWaitsForGrasp) {
  const auto idle = state_in(Mode::kIdle, 140);
  EXPECT_EQ(step(idle, VisionOrder::kNone, true, true, true).state.mode, Mode::kIdle);
  const auto r = step(idle, VisionOrder::kGrasp, false, false, false);
  EXPECT_EQ(r.state.mode, Mode::kClosingOnContact);
  EXPECT_EQ(r.command, Command::kNone);
}

TEST(Step, ClosingNeedsBothFingers) {
  const auto closing = state_in(Mode::kClosingOnContact, 100, 2);
  auto r = step(closing, VisionOrder::kNone, true, false, false);
  EXPECT_EQ(r.state.mode, Mode::kClosingOnContact);
  EXPECT_EQ(r.command, Command::kClose);
  EXPECT_EQ(r.state.gripper.opening, 98);
  r = step(closing, VisionOrder::kNone, true, true, false);
  EXPECT_EQ(r.state.mode, Mode::kHoldingSlipWatch);
  EXPECT_EQ(r.command, Command::kHold);
  EXPECT_EQ(r.state.gripper.opening, 100);
}

TEST(Step, ClosingAtMinimumIsMissed) {
  try {
    step(state_in(Mode::kClosingOnContact, 0), VisionOrder::kNone, false, false, false);
    FAIL();
  } catch (const wg::Error& e) {
    EXPECT_EQ(e.code(), wg::ErrorCode::kObjectMissed);
  }
}

TEST(Step, SlipCorrectionClosesOneStep) {
  const auto holding = state_in(Mode::kHoldingSlipWatch, 80, 2);
  const auto a = step(holding, VisionOrder::kNone, false, false, true);
  EXPECT_EQ(a.state.mode, Mode::kSlipCorrecting);
  EXPECT_EQ(a.state.gripper.opening, 80);
  const auto b = step(a.state, VisionOrder::kNone, false, false, false);
  EXPECT_EQ(b.state.mode, Mode::kHoldingSlipWatch);
  EXPECT_EQ(b.state.gripper.opening, 78);
  EXPECT_EQ(b.command, Command::kClose);
}

TEST(Step, ReleaseOpensUntilContactLost) {
  const auto holding = state_in(Mode::kHoldingSlipWatch, 60);
  const auto a = step(holding, VisionOrder::kRelease, false, false, true);
  EXPECT_EQ(a.state.mode, Mode::kReleasingOnNoContact);
  const auto b = step(a.state, VisionOrder::kNone, true, false, false);
  EXPECT_EQ(b.command, Command::kOpen);
  EXPECT_EQ(b.state.gripper.opening, 61);
  const auto c = step(b.state, VisionOrder::kNone, false, false, false);
  EXPECT_EQ(c.state.mode, Mode::kDone);
  EXPECT_EQ(step(c.state, VisionOrder::kGrasp, true, true, true).state.mode, Mode::kDone);
}

TEST(Step, OpeningSaturatesAtStroke) {
  const auto r = step(state_in(Mode::kReleasingOnNoContact, 139.5), VisionOrder::kNone, true, true, false);
  EXPECT_EQ(r.state.gripper.opening, GripperModel::kMaxOpening);
}

TEST(SensorsNeeded, NeverBoth) {
  for (Mode m : {Mode::kIdle, Mode::kClosingOnContact, Mode::kHoldingSlipWatch, Mode::kSlipCorrecting,
                 Mode::kReleasingOnNoContact, Mode::kDone}) {
    for (VisionOrder o : {VisionOrder::kNone, VisionOrder::kGrasp, VisionOrder::kRelease}) {
      const auto q = sensors_needed(m, o);
      EXPECT_FALSE(q.contact && q.slip);
    }
  }
}

TEST(TraceCsv, RoundTrip) {
  ControllerTrace t;
  t.records.push_back({0, Mode::kIdle, 140, std::nullopt, std::nullopt, std::nullopt, Command::kNone});
  t.records.push_back({1, Mode::kClosingOnContact, 139.5, true, false, std::nullopt, Command::kClose});
  t.records.push_back({2, Mode::kHoldingSlipWatch, 139.5, std::nullopt, std::nullopt, false, Command::kHold});
  EXPECT_EQ(trace_from_csv(to_csv(t)), t);
  EXPECT_THROW(trace_from_csv("tick,mode\n"), wg::Error);
  EXPECT_THROW(trace_from_csv(to_csv(t) + "1,Idle,140,-,-,-,none\n"), wg::Error);
}

TEST(Manipulation, GoldenClean) {
  const auto s = scenario("clean");
  const auto trace = run_manipulation(s);
  EXPECT_EQ(trace, golden("clean"));
  const auto hold = std::find_if(trace.records.begin(), trace.records.end(), [](const auto& r) {
    return r.mode == Mode::kHoldingSlipWatch;
  });
  ASSERT_NE(hold, trace.records.end());
  EXPECT_GT(hold->opening_mm, s.object_width_mm - s.gripper.close_step);
  EXPECT_LE(hold->opening_mm, s.object_width_mm);
  EXPECT_EQ(trace.back().mode, Mode::kDone);
}

TEST(Manipulation, GoldenSlip) {
  const auto s = scenario("slip");
  const auto trace = run_manipulation(s);
  EXPECT_EQ(trace, golden("slip"));
  int corrections = 0;
  double gripped = 0.0;
  double held = 0.0;
  for (const auto& r : trace.records) {
    corrections += r.mode == Mode::kSlipCorrecting ? 1 : 0;
    if (r.mode == Mode::kClosingOnContact && r.command == Command::kHold) {
      gripped = r.opening_mm;
    }
    if (r.mode == Mode::kHoldingSlipWatch) {
      held = r.opening_mm;
    }
  }
  EXPECT_EQ(corrections, 1);
  EXPECT_EQ(held, gripped - s.gripper.close_step);
}

TEST(Manipulation, GoldenMissed) {
  std::optional<wg::ErrorCode> error;
  const auto trace = run_or_partial(scenario("missed"), error);
  ASSERT_TRUE(error.has_value());
  EXPECT_EQ(*error, wg::ErrorCode::kObjectMissed);
  EXPECT_EQ(trace, golden("missed"));
}

TEST(Manipulation, TimeoutWithoutRelease) {
  auto s = scenario("clean");
  s.orders = {{0, VisionOrder::kGrasp}};
  s.max_ticks = 120;
  s.sensor.width = 48;
  s.sensor.height = 64;
  std::optional<wg::ErrorCode> error;
  const auto trace = run_or_partial(s, error);
  ASSERT_TRUE(error.has_value());
  EXPECT_EQ(*error, wg::ErrorCode::kTimeout);
  EXPECT_EQ(trace.records.size(), 120u);
}

TEST(Manipulation, RandomSchedulesKeepInvariants) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 200; ++i) {
    const auto s = invariants::random_scenario(rng);
    std::optional<wg::ErrorCode> error;
    const auto trace = run_or_partial(s, error);
    const std::string violation = invariants::check_trace(trace, s.gripper);
    ASSERT_TRUE(violation.empty()) << "scenario " << i << ": " << violation;
    if (!error) {
      EXPECT_EQ(trace.back().mode, Mode::kDone);
    }
  }
}
