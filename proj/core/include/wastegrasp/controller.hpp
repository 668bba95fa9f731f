#pragma once

// Tactile grasp controller: close until both fingers report contact, then
// watch for slip while the object is carried (closing one step per detected
// slip), and on a release order open until contact is lost.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wastegrasp/error.hpp"
#include "wastegrasp/tactile.hpp"

namespace wastegrasp::control {

/// Control rate; matches the 30 fps of the tactile sensors.
inline constexpr double kTicksPerSecond = 30.0;

enum class Mode {
  kIdle,
  kClosingOnContact,
  kHoldingSlipWatch,
  kSlipCorrecting,
  kReleasingOnNoContact,
  kDone,
};

enum class VisionOrder { kNone, kGrasp, kRelease };

enum class Command { kNone, kHold, kClose, kOpen };

std::string_view to_string(Mode mode);
std::string_view to_string(VisionOrder order);
std::string_view to_string(Command command);
Mode parse_mode(std::string_view text);
VisionOrder parse_order(std::string_view text);
Command parse_command(std::string_view text);

/// Two-finger gripper; openings in mm.
struct GripperModel {
  static constexpr double kMaxOpening = 140.0;

  double opening = kMaxOpening;
  double close_step = 1.0;
  double min_opening = 0.0;

  void validate() const;
};

struct ControllerState {
  Mode mode = Mode::kIdle;
  GripperModel gripper;
};

/// Which detectors the controller reads in a given mode and order. Slip and
/// contact are never both consulted.
struct SensorQuery {
  bool contact = false;
  bool slip = false;
};
SensorQuery sensors_needed(Mode mode, VisionOrder order);

struct StepResult {
  ControllerState state;
  Command command = Command::kNone;
};

/// One control tick. Readings the current mode does not consult are ignored.
/// Throws kObjectMissed when closing reaches min_opening without contact.
StepResult step(const ControllerState& state, VisionOrder order, bool contact_left,
                bool contact_right, bool slip);

struct TraceRecord {
  int tick = 0;
  /// Mode the tick was processed in.
  Mode mode = Mode::kIdle;
  /// Opening after the tick's command, mm.
  double opening_mm = 0.0;
  /// Unset when the detector was not consulted this tick.
  std::optional<bool> contact_left;
  std::optional<bool> contact_right;
  std::optional<bool> slip;
  Command command = Command::kNone;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct ControllerTrace {
  std::vector<TraceRecord> records;

  bool empty() const noexcept { return records.empty(); }
  const TraceRecord& back() const { return records.back(); }
  friend bool operator==(const ControllerTrace&, const ControllerTrace&) = default;
};

/// CSV with header tick,mode,opening_mm,contact_l,contact_r,slip,command;
/// unconsulted readings are written as "-".
std::string to_csv(const ControllerTrace& trace);
ControllerTrace trace_from_csv(std::string_view csv);

struct TimedOrder {
  int tick = 0;
  VisionOrder order = VisionOrder::kNone;
};

/// Closed-loop scenario: a simulated object between two tactile fingers.
struct ManipulationScenario {
  GripperModel gripper;
  double object_width_mm = 60.0;
  /// Imprint displacement added by each slip event, pixels.
  int slip_px = 12;
  std::vector<int> slip_ticks;
  std::vector<TimedOrder> orders;
  std::uint64_t seed = 1;
  int max_ticks = 2000;
  tactile::SensorModel sensor;
  tactile::TactileConfig tactile;

  void validate() const;
};

/// Raised by run_manipulation; carries the trace up to the failure.
class ManipulationError : public Error {
 public:
  ManipulationError(ErrorCode code, const std::string& message, ControllerTrace trace)
      : Error(code, message), trace_(std::move(trace)) {}

  const ControllerTrace& trace() const noexcept { return trace_; }

 private:
  ControllerTrace trace_;
};

/// Runs the controller against simulated left/right tactile sensors. The
/// trace ends with the first tick processed in Done. Throws ManipulationError with kObjectMissed or kTimeout.
ControllerTrace run_manipulation(const ManipulationScenario& scenario);

}  // namespace wastegrasp::control
