#include "wastegrasp/controller.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <deque>
#include <sstream>
#include <string>

namespace wastegrasp::control {

namespace {

template <typename E, std::size_t N>
E parse_enum(std::string_view text, const std::array<std::pair<E, std::string_view>, N>& table,
             const char* what) {
  for (const auto& [value, name] : table) {
    if (name == text) {
      return value;
    }
  }
  throw Error(ErrorCode::kParse, std::string("unknown ") + what + " '" + std::string(text) + "'");
}

constexpr std::array<std::pair<Mode, std::string_view>, 6> kModes{{
    {Mode::kIdle, "Idle"},
    {Mode::kClosingOnContact, "ClosingOnContact"},
    {Mode::kHoldingSlipWatch, "HoldingSlipWatch"},
    {Mode::kSlipCorrecting, "SlipCorrecting"},
    {Mode::kReleasingOnNoContact, "ReleasingOnNoContact"},
    {Mode::kDone, "Done"},
}};

constexpr std::array<std::pair<VisionOrder, std::string_view>, 3> kOrders{{
    {VisionOrder::kNone, "None"},
    {VisionOrder::kGrasp, "Grasp"},
    {VisionOrder::kRelease, "Release"},
}};

constexpr std::array<std::pair<Command, std::string_view>, 4> kCommands{{
    {Command::kNone, "none"},
    {Command::kHold, "hold"},
    {Command::kClose, "close"},
    {Command::kOpen, "open"},
}};

template <typename E, std::size_t N>
std::string_view name_of(E value, const std::array<std::pair<E, std::string_view>, N>& table) {
  for (const auto& [v, name] : table) {
    if (v == value) {
      return name;
    }
  }
  return "?";
}

std::string format_number(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::string format_flag(const std::optional<bool>& f) {
  if (!f) {
    return "-";
  }
  return *f ? "1" : "0";
}

std::optional<bool> parse_flag(std::string_view s) {
  if (s == "-") {
    return std::nullopt;
  }
  if (s == "1") {
    return true;
  }
  if (s == "0") {
    return false;
  }
  throw Error(ErrorCode::kParse, "trace flag must be 0, 1 or -");
}

template <typename T>
T parse_number(std::string_view s, const char* what) {
  T value{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw Error(ErrorCode::kParse, std::string("bad ") + what + " '" + std::string(s) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

double close_by(const GripperModel& g) {
  return std::max(g.opening - g.close_step, g.min_opening);
}

std::uint64_t frame_seed(std::uint64_t seed, int tick, int side) {
  // splitmix64 finalizer over (seed, tick, side)
  std::uint64_t z = seed ^ (static_cast<std::uint64_t>(tick) * 2 + static_cast<std::uint64_t>(side)) *
                               0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::string_view to_string(Mode mode) { return name_of(mode, kModes); }
std::string_view to_string(VisionOrder order) { return name_of(order, kOrders); }
std::string_view to_string(Command command) { return name_of(command, kCommands); }
Mode parse_mode(std::string_view text) { return parse_enum(text, kModes, "mode"); }
VisionOrder parse_order(std::string_view text) { return parse_enum(text, kOrders, "order"); }
Command parse_command(std::string_view text) { return parse_enum(text, kCommands, "command"); }

void GripperModel::validate() const {
  if (!(opening >= 0.0 && opening <= kMaxOpening)) {
    throw Error(ErrorCode::kInvalidConfig, "gripper opening must lie in [0, 140] mm");
  }
  if (!(close_step > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "close_step must be positive");
  }
  if (!(min_opening >= 0.0 && min_opening <= opening)) {
    throw Error(ErrorCode::kInvalidConfig, "min_opening must lie in [0, opening]");
  }
}

SensorQuery sensors_needed(Mode mode, VisionOrder order) {
  switch (mode) {
    case Mode::kClosingOnContact:
    case Mode::kReleasingOnNoContact:
      return {true, false};
    case Mode::kHoldingSlipWatch:
      return {false, order != VisionOrder::kRelease};
    default:
      return {false, false};
  }
}

StepResult step(const ControllerState& state, VisionOrder order, bool contact_left,
                bool contact_right, bool slip) {
  StepResult r{state, Command::kNone};
  GripperModel& g = r.state.gripper;
  switch (state.mode) {
    case Mode::kIdle:
      if (order == VisionOrder::kGrasp) {
        r.state.mode = Mode::kClosingOnContact;
      }
      break;
    case Mode::kClosingOnContact:
      if (contact_left && contact_right) {
        r.state.mode = Mode::kHoldingSlipWatch;
        r.command = Command::kHold;
      } else if (g.opening <= g.min_opening) {
        throw Error(ErrorCode::kObjectMissed, "gripper closed to min_opening without contact");
      } else {
        g.opening = close_by(g);
        r.command = Command::kClose;
      }
      break;
    case Mode::kHoldingSlipWatch:
      r.command = Command::kHold;
      if (order == VisionOrder::kRelease) {
        r.state.mode = Mode::kReleasingOnNoContact;
      } else if (slip) {
        r.state.mode = Mode::kSlipCorrecting;
      }
      break;
    case Mode::kSlipCorrecting:
      g.opening = close_by(g);
      r.command = Command::kClose;
      r.state.mode = Mode::kHoldingSlipWatch;
      break;
    case Mode::kReleasingOnNoContact:
      if (!contact_left && !contact_right) {
        r.state.mode = Mode::kDone;
        r.command = Command::kHold;
      } else {
        g.opening = std::min(g.opening + g.close_step, GripperModel::kMaxOpening);
        r.command = Command::kOpen;
      }
      break;
    case Mode::kDone:
      break;
  }
  return r;
}

std::string to_csv(const ControllerTrace& trace) {
  std::string out = "tick,mode,opening_mm,contact_l,contact_r,slip,command\n";
  for (const auto& rec : trace.records) {
    out += std::to_string(rec.tick);
    out += ',';
    out += to_string(rec.mode);
    out += ',';
    out += format_number(rec.opening_mm);
    out += ',';
    out += format_flag(rec.contact_left);
    out += ',';
    out += format_flag(rec.contact_right);
    out += ',';
    out += format_flag(rec.slip);
    out += ',';
    out += to_string(rec.command);
    out += '\n';
  }
  return out;
}

ControllerTrace trace_from_csv(std::string_view csv) {
  ControllerTrace trace;
  bool header = true;
  for (std::string_view line : split(csv, '\n')) {
    if (!line.empty() && line.back() == '\r') {
      line.remove_suffix(1);
    }
    if (line.empty()) {
      continue;
    }
    if (header) {
      header = false;
      if (line != "tick,mode,opening_mm,contact_l,contact_r,slip,command") {
        throw Error(ErrorCode::kParse, "unexpected trace header");
      }
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 7) {
      throw Error(ErrorCode::kParse, "trace row must have 7 fields");
    }
    TraceRecord rec;
    rec.tick = parse_number<int>(f[0], "tick");
    rec.mode = parse_mode(f[1]);
    rec.opening_mm = parse_number<double>(f[2], "opening");
    rec.contact_left = parse_flag(f[3]);
    rec.contact_right = parse_flag(f[4]);
    rec.slip = parse_flag(f[5]);
    rec.command = parse_command(f[6]);
    if (!trace.records.empty() && rec.tick <= trace.back().tick) {
      throw Error(ErrorCode::kParse, "trace ticks must be strictly increasing");
    }
    trace.records.push_back(rec);
  }
  return trace;
}

void ManipulationScenario::validate() const {
  gripper.validate();
  sensor.validate();
  tactile.validate();
  if (!(object_width_mm >= 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "object_width_mm must be non-negative");
  }
  if (max_ticks <= 0) {
    throw Error(ErrorCode::kInvalidConfig, "max_ticks must be positive");
  }
  for (int t : slip_ticks) {
    if (t < 0) {
      throw Error(ErrorCode::kInvalidConfig, "slip ticks must be non-negative");
    }
  }
  for (const auto& o : orders) {
    if (o.tick < 0) {
      throw Error(ErrorCode::kInvalidConfig, "order ticks must be non-negative");
    }
  }
}

ControllerTrace run_manipulation(const ManipulationScenario& scenario) {
  scenario.validate();
  const RgbImage background = tactile::sensor_background(scenario.sensor);
  const GrayImage baseline = tactile::to_gray(background);

  ControllerState state;
  state.gripper = scenario.gripper;
  ControllerTrace trace;
  int slip_offset = 0;
  std::array<std::deque<GrayImage>, 2> history;

  for (int tick = 0; tick < scenario.max_ticks; ++tick) {
    VisionOrder order = VisionOrder::kNone;
    for (const auto& o : scenario.orders) {
      if (o.tick == tick) {
        order = o.order;
      }
    }
    slip_offset += scenario.slip_px *
                   static_cast<int>(std::count(scenario.slip_ticks.begin(),
                                               scenario.slip_ticks.end(), tick));

    std::array<GrayImage, 2> gray;
    for (int side = 0; side < 2; ++side) {
      gray[side] = tactile::to_gray(tactile::simulate_tactile_frame(
          background, state.gripper.opening, scenario.object_width_mm, slip_offset,
          frame_seed(scenario.seed, tick, side), scenario.sensor));
      history[side].push_back(gray[side]);
      if (history[side].size() > 4) {
        history[side].pop_front();
      }
    }

    const SensorQuery query = sensors_needed(state.mode, order);
    TraceRecord rec;
    rec.tick = tick;
    rec.mode = state.mode;
    bool left = false;
    bool right = false;
    bool slip = false;
    if (query.contact) {
      left = tactile::detect_contact(gray[0], baseline, scenario.tactile);
      right = tactile::detect_contact(gray[1], baseline, scenario.tactile);
      rec.contact_left = left;
      rec.contact_right = right;
    }
    if (query.slip) {
      if (history[0].size() == 4) {
        for (const auto& h : history) {
          const tactile::TactileSequence seq({h[0], h[1], h[2], h[3]});
          slip = slip || tactile::detect_slip(seq, scenario.tactile);
        }
      }
      rec.slip = slip;
    }

    StepResult result;
    try {
      result = step(state, order, left, right, slip);
    } catch (const Error& e) {
      rec.opening_mm = state.gripper.opening;
      rec.command = Command::kNone;
      trace.records.push_back(rec);
      throw ManipulationError(e.code(), e.what(), std::move(trace));
    }
    rec.opening_mm = result.state.gripper.opening;
    rec.command = result.command;
    trace.records.push_back(rec);

    const bool grasped = state.mode == Mode::kClosingOnContact &&
                         result.state.mode == Mode::kHoldingSlipWatch;
    if (grasped || slip) {
      history[0].clear();
      history[1].clear();
    }
    if (state.mode == Mode::kDone) {
      return trace;
    }
    state = result.state;
  }
  throw ManipulationError(ErrorCode::kTimeout,
                          "no Done within " + std::to_string(scenario.max_ticks) + " ticks",
                          std::move(trace));
}

}  // namespace wastegrasp::control
