#pragma once

// Structural checks over controller traces, plus the randomized scenario
// generator used to exercise them.

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "wastegrasp/controller.hpp"

namespace invariants {

using namespace wastegrasp::control;

/// Empty string when every invariant holds, else the first violation.
inline std::string check_trace(const ControllerTrace& trace, const GripperModel& gripper) {
  auto fail = [](const TraceRecord& r, const std::string& what) {
    return "tick " + std::to_string(r.tick) + " (" + std::string(to_string(r.mode)) + "): " + what;
  };
  double previous = gripper.opening;
  bool released = false;
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const TraceRecord& r = trace.records[i];
    if (r.tick != static_cast<int>(i)) {
      return fail(r, "ticks are not consecutive from 0");
    }
    const bool contact = r.contact_left.has_value() || r.contact_right.has_value();
    if (contact && r.slip.has_value()) {
      return fail(r, "contact and slip consulted together");
    }
    if (r.contact_left.has_value() != r.contact_right.has_value()) {
      return fail(r, "only one finger consulted");
    }
    if (r.opening_mm < gripper.min_opening || r.opening_mm > GripperModel::kMaxOpening) {
      return fail(r, "opening out of range");
    }
    const double delta = r.opening_mm - previous;
    switch (r.mode) {
      case Mode::kIdle:
      case Mode::kDone:
        if (contact || r.slip || r.command != Command::kNone || delta != 0.0) {
          return fail(r, "idle modes must not sense or move");
        }
        break;
      case Mode::kClosingOnContact:
        if (!contact || r.slip) {
          return fail(r, "closing must read contact only");
        }
        if (delta > 0.0 || (r.command == Command::kClose) != (delta < 0.0)) {
          return fail(r, "closing may only close");
        }
        if (r.command == Command::kHold && !(*r.contact_left && *r.contact_right)) {
          return fail(r, "hold without contact on both fingers");
        }
        break;
      case Mode::kHoldingSlipWatch:
        if (contact || r.command != Command::kHold || delta != 0.0) {
          return fail(r, "holding must hold still without contact reads");
        }
        break;
      case Mode::kSlipCorrecting:
        if (contact || r.slip || r.command != Command::kClose || delta > 0.0) {
          return fail(r, "slip correction must close without sensing");
        }
        if (i == 0 || trace.records[i - 1].mode != Mode::kHoldingSlipWatch ||
            trace.records[i - 1].slip != true) {
          return fail(r, "slip correction without a detected slip");
        }
        break;
      case Mode::kReleasingOnNoContact:
        released = true;
        if (!contact || r.slip || delta < 0.0) {
          return fail(r, "releasing may only open");
        }
        if (r.command == Command::kOpen
                ? !(delta > 0.0 || r.opening_mm == GripperModel::kMaxOpening)
                : (r.command != Command::kHold || delta != 0.0 || *r.contact_left || *r.contact_right)) {
          return fail(r, "release command disagrees with contact");
        }
        break;
    }
    if (!released && delta > 0.0) {
      return fail(r, "opening grew before release");
    }
    if (i > 0) {
      const Mode from = trace.records[i - 1].mode;
      const Mode to = r.mode;
      const bool ok =
          from == to || (from == Mode::kIdle && to == Mode::kClosingOnContact) ||
          (from == Mode::kClosingOnContact && to == Mode::kHoldingSlipWatch) ||
          (from == Mode::kHoldingSlipWatch &&
           (to == Mode::kSlipCorrecting || to == Mode::kReleasingOnNoContact)) ||
          (from == Mode::kSlipCorrecting && to == Mode::kHoldingSlipWatch) ||
          (from == Mode::kReleasingOnNoContact && to == Mode::kDone);
      if (!ok || (from == Mode::kSlipCorrecting && to == Mode::kSlipCorrecting) ||
          (from == Mode::kDone && to == Mode::kDone)) {
        return fail(r, "illegal transition from " + std::string(to_string(from)));
      }
    }
    previous = r.opening_mm;
  }
  return {};
}

/// Random scenario on a small sensor so thousands of runs stay cheap.
inline ManipulationScenario random_scenario(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> width(0.0, 130.0);
  std::uniform_int_distribution<int> start(20, 140);
  std::uniform_int_distribution<int> step(1, 4);
  std::uniform_int_distribution<int> hold(5, 60);
  std::uniform_int_distribution<int> slips(0, 3);
  ManipulationScenario s;
  s.gripper.opening = start(rng);
  s.gripper.close_step = step(rng);
  s.object_width_mm = std::bernoulli_distribution(0.1)(rng) ? 0.0 : std::round(width(rng));
  s.sensor.width = 48;
  s.sensor.height = 64;
  s.seed = rng();
  s.max_ticks = 400;
  const double gap = std::max(0.0, s.gripper.opening - s.object_width_mm);
  const int contact = 1 + static_cast<int>(std::ceil(gap / s.gripper.close_step));
  const int release = contact + hold(rng);
  s.orders = {{0, VisionOrder::kGrasp}, {release, VisionOrder::kRelease}};
  std::uniform_int_distribution<int> when(0, release + 5);
  for (int i = slips(rng); i > 0; --i) {
    s.slip_ticks.push_back(when(rng));
  }
  std::sort(s.slip_ticks.begin(), s.slip_ticks.end());
  return s;
}

}  // namespace invariants
