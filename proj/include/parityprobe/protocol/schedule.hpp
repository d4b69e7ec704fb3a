#pragma once

#include "parityprobe/protocol/device.hpp"
#include "parityprobe/types.hpp"

#include <json.hpp>

#include <array>
#include <string>
#include <variant>
#include <vector>

namespace parityprobe {

enum class GateAxis { X, Y };
enum class Selectivity { Unconditional, Fock0 };

struct Displace {
  Complex amplitude;
};

struct FreeEvolve {
  double duration_ns;
};

struct QubitGate {
  int target;  // 0..2 register, 3 ancilla
  GateAxis axis;
  double angle;  // radians
  Selectivity selectivity = Selectivity::Unconditional;
};

struct AncillaMeasure {
  std::string label;
};

struct CavityReset {};

/// Cavity-empty check: outcome is compared against the preceding
/// measurement to form the herald bit.
struct Herald {
  std::string label;
};

using Segment =
    std::variant<Displace, FreeEvolve, QubitGate, AncillaMeasure, CavityReset,
                 Herald>;

/// Per-qubit summary of the mapping-window gate placement.
struct ScheduleTimings {
  double window_ns = 0.0;           // conditional-evolution time T
  double selective_ns = 0.0;        // fock0-selective pulse window
  int min_chi_qubit = -1;           // measured qubit setting T
  std::array<double, 3> partial_echo_ns{};  // forward-window X pair gaps
  Complex d1, d2, undo, final_reset;
  double max_mean_photon = 0.0;     // peak |pointer|^2 along the schedule
};

class PulseSchedule {
 public:
  PulseSchedule() = default;
  PulseSchedule(std::vector<Segment> segments, ScheduleTimings timings);

  const std::vector<Segment>& segments() const { return segments_; }
  const ScheduleTimings& timings() const { return timings_; }
  double total_duration_ns() const;
  bool has_herald() const;

  nlohmann::ordered_json to_json() const;

 private:
  std::vector<Segment> segments_;
  ScheduleTimings timings_;
};

/// Assemble the full subset-parity schedule: displace, mapping window with
/// partial/full echoes, pointer recentering, fock0-selective ancilla flip,
/// inverse mapping, unconditional cavity reset displacement, readout, and
/// the optional herald check.
PulseSchedule build_schedule(const SubsetParitySpec& spec,
                             const DeviceParams& params,
                             bool include_herald = false,
                             bool enforce_truncation = true);

/// Poisson tail mass P(N >= cutoff) for a coherent state of the given mean
/// photon number; used for Fock-truncation diagnostics.
double poisson_tail(double mean, int cutoff);

}  // namespace parityprobe
