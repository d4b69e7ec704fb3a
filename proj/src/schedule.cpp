#include "parityprobe/protocol/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace parityprobe {

namespace {

// Cyclic cavity frequency (MHz) seen by a given qubit configuration.
double pointer_rate(const DeviceParams& p, const std::array<int, 4>& bits) {
  double f = 0.0;
  for (int k = 0; k < kNumQubits; ++k) f -= p.chi[k] * bits[k];
  return f;
}

// Classical coherent-pointer walker: tracks one qubit configuration's
// cavity pointer through displacements, pi flips, and free evolution.
// Fock0-selective gates are skipped (they act only at vacuum) except that
// they never move the pointer anyway.
struct PointerWalker {
  const DeviceParams& params;
  std::array<int, 4> bits;
  Complex p{0.0, 0.0};
  double max_n = 0.0;

  void run(const std::vector<Segment>& segments, int skip_index = -1) {
    for (std::size_t i = 0; i < segments.size(); ++i) {
      if (static_cast<int>(i) == skip_index) continue;
      std::visit(
          [&](const auto& seg) {
            using T = std::decay_t<decltype(seg)>;
            if constexpr (std::is_same_v<T, Displace>) {
              p += seg.amplitude;
              max_n = std::max(max_n, std::norm(p));
            } else if constexpr (std::is_same_v<T, FreeEvolve>) {
              const double f = pointer_rate(params, bits);
              p *= std::exp(Complex(0.0, -2.0 * kPi * 1e-3 * f *
                                             seg.duration_ns));
            } else if constexpr (std::is_same_v<T, QubitGate>) {
              if (seg.selectivity == Selectivity::Unconditional &&
                  std::abs(seg.angle - kPi) < 1e-12)
                bits[seg.target] ^= 1;
            }
          },
          segments[i]);
    }
  }
};

struct GateEvent {
  double time_ns;
  QubitGate gate;
};

// Expand a conditional-evolution window of the given length into
// FreeEvolve segments interleaved with instantaneous gates.
void emit_window(std::vector<Segment>& out, double length_ns,
                 std::vector<GateEvent> events) {
  std::stable_sort(events.begin(), events.end(),
                   [](const GateEvent& a, const GateEvent& b) {
                     return a.time_ns < b.time_ns;
                   });
  double t = 0.0;
  for (const auto& ev : events) {
    if (ev.time_ns < -1e-9 || ev.time_ns > length_ns + 1e-9)
      throw ValidationError("gate event outside its window");
    if (ev.time_ns > t + 1e-12)
      out.push_back(FreeEvolve{ev.time_ns - t});
    t = std::max(t, ev.time_ns);
    out.push_back(ev.gate);
  }
  if (length_ns > t + 1e-12) out.push_back(FreeEvolve{length_ns - t});
}

void echo_pair(std::vector<GateEvent>& events, int target, double center,
               double separation) {
  const QubitGate flip{target, GateAxis::X, kPi, Selectivity::Unconditional};
  events.push_back({center - separation / 2.0, flip});
  events.push_back({center + separation / 2.0, flip});
}

}  // namespace

PulseSchedule::PulseSchedule(std::vector<Segment> segments,
                             ScheduleTimings timings)
    : segments_(std::move(segments)), timings_(timings) {
  std::set<std::string> labels;
  for (const auto& s : segments_) {
    if (const auto* f = std::get_if<FreeEvolve>(&s)) {
      if (f->duration_ns < 0.0)
        throw ValidationError("segment duration must be >= 0");
    } else if (const auto* m = std::get_if<AncillaMeasure>(&s)) {
      if (!labels.insert(m->label).second)
        throw ValidationError("duplicate measurement label " + m->label);
    } else if (const auto* h = std::get_if<Herald>(&s)) {
      if (!labels.insert(h->label).second)
        throw ValidationError("duplicate measurement label " + h->label);
    }
  }
}

double PulseSchedule::total_duration_ns() const {
  double t = 0.0;
  for (const auto& s : segments_)
    if (const auto* f = std::get_if<FreeEvolve>(&s)) t += f->duration_ns;
  return t;
}

bool PulseSchedule::has_herald() const {
  for (const auto& s : segments_)
    if (std::holds_alternative<Herald>(s)) return true;
  return false;
}

nlohmann::ordered_json PulseSchedule::to_json() const {
  nlohmann::ordered_json j;
  j["total_duration_ns"] = total_duration_ns();
  j["window_ns"] = timings_.window_ns;
  j["segments"] = nlohmann::ordered_json::array();
  for (const auto& s : segments_) {
    nlohmann::ordered_json seg;
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, Displace>) {
            seg["type"] = "displace";
            seg["re"] = v.amplitude.real();
            seg["im"] = v.amplitude.imag();
          } else if constexpr (std::is_same_v<T, FreeEvolve>) {
            seg["type"] = "free";
            seg["duration_ns"] = v.duration_ns;
          } else if constexpr (std::is_same_v<T, QubitGate>) {
            seg["type"] = "gate";
            seg["target"] = v.target;
            seg["axis"] = v.axis == GateAxis::X ? "X" : "Y";
            seg["angle"] = v.angle;
            seg["selective"] = v.selectivity == Selectivity::Fock0;
          } else if constexpr (std::is_same_v<T, AncillaMeasure>) {
            seg["type"] = "measure";
            seg["label"] = v.label;
          } else if constexpr (std::is_same_v<T, CavityReset>) {
            seg["type"] = "cavity_reset";
          } else if constexpr (std::is_same_v<T, Herald>) {
            seg["type"] = "herald";
            seg["label"] = v.label;
          }
        },
        s);
    j["segments"].push_back(seg);
  }
  return j;
}

double poisson_tail(double mean, int cutoff) {
  if (mean <= 0.0) return 0.0;
  // 1 - CDF(cutoff - 1) via the stable pmf recurrence.
  double pmf = std::exp(-mean);
  double cdf = pmf;
  for (int k = 1; k < cutoff; ++k) {
    pmf *= mean / k;
    cdf += pmf;
  }
  return std::max(0.0, 1.0 - cdf);
}

PulseSchedule build_schedule(const SubsetParitySpec& spec,
                             const DeviceParams& params, bool include_herald,
                             bool enforce_truncation) {
  spec.validate();
  params.validate();

  int min_q = -1;
  for (int k = 0; k < 3; ++k) {
    if (!spec.subset[k]) continue;
    if (!(params.chi[k] > 0.0))
      throw ValidationError("measured qubit needs a positive dispersive shift");
    if (min_q < 0 || params.chi[k] < params.chi[min_q]) min_q = k;
  }
  const double chi_min = params.chi[min_q];
  const double window_ns = 1e3 * spec.theta / (2.0 * kPi * chi_min);
  const double t_sel = params.selective_gate_ns;

  ScheduleTimings timings;
  timings.window_ns = window_ns;
  timings.selective_ns = t_sel;
  timings.min_chi_qubit = min_q;

  std::vector<Segment> segs;
  const Complex alpha0(std::sqrt(spec.n0), 0.0);
  timings.d1 = alpha0;
  segs.push_back(Displace{alpha0});

  // Forward mapping window: the slowest measured qubit evolves the whole
  // window; faster measured qubits are partially echoed so each contributes
  // the same conditional pointer rotation theta; unmeasured qubits are
  // fully echoed.
  std::vector<GateEvent> fwd;
  for (int k = 0; k < 3; ++k) {
    if (spec.subset[k]) {
      if (k == min_q) continue;
      const double sep =
          1e3 * spec.theta * (1.0 / chi_min - 1.0 / params.chi[k]) /
          (4.0 * kPi);
      timings.partial_echo_ns[k] = sep;
      if (sep > 1e-12) echo_pair(fwd, k, window_ns / 2.0, sep);
    } else {
      echo_pair(fwd, k, window_ns / 2.0, window_ns / 2.0);
    }
  }
  emit_window(segs, window_ns, std::move(fwd));

  // Recenter the odd-parity pointer onto vacuum. Any odd configuration
  // works: they coincide after the echoed window.
  PointerWalker odd{params, {0, 0, 0, 0}};
  odd.bits[min_q] = 1;
  odd.run(segs);
  timings.d2 = -odd.p;
  const int d2_index = static_cast<int>(segs.size());
  segs.push_back(Displace{timings.d2});

  // Selective window: flip the ancilla on the vacuum component while the
  // register qubits are echoed.
  std::vector<GateEvent> sel;
  for (int k = 0; k < 3; ++k) echo_pair(sel, k, t_sel / 2.0, t_sel / 2.0);
  sel.push_back(
      {t_sel / 2.0, QubitGate{kAncilla, GateAxis::X, kPi, Selectivity::Fock0}});
  emit_window(segs, t_sel, std::move(sel));

  // Undo the recentering: send the odd pointer back to where it would sit
  // had D2 never been applied, so displacement phases cancel per
  // configuration.
  PointerWalker odd2{params, {0, 0, 0, 0}};
  odd2.bits[min_q] = 1;
  odd2.run(segs, d2_index);
  timings.undo = odd2.p;
  segs.push_back(Displace{timings.undo});

  // Inverse mapping window: each measured qubit unwinds its conditional
  // rotation (net -theta); the ancilla, now correlated with the register,
  // is echoed so its shift contributes only a common rotation.
  std::vector<GateEvent> inv;
  const QubitGate min_flip{min_q, GateAxis::X, kPi, Selectivity::Unconditional};
  inv.push_back({0.0, min_flip});
  inv.push_back({window_ns, min_flip});
  for (int k = 0; k < 3; ++k) {
    if (spec.subset[k]) {
      if (k == min_q) continue;
      const double sep =
          1e3 * spec.theta * (1.0 / chi_min + 1.0 / params.chi[k]) /
          (4.0 * kPi);
      echo_pair(inv, k, window_ns / 2.0, sep);
    } else {
      echo_pair(inv, k, window_ns / 2.0, window_ns / 2.0);
    }
  }
  echo_pair(inv, kAncilla, window_ns / 2.0, window_ns / 2.0);
  emit_window(segs, window_ns, std::move(inv));

  // All configurations now share one pointer position; one displacement
  // returns the cavity to vacuum unconditionally.
  PointerWalker ground{params, {0, 0, 0, 0}};
  ground.run(segs);
  timings.final_reset = -ground.p;
  segs.push_back(Displace{timings.final_reset});

  auto readout_delay = [&](std::vector<Segment>& out) {
    std::vector<GateEvent> ev;
    for (int k = 0; k < 3; ++k)
      echo_pair(ev, k, params.readout_ns / 2.0, params.readout_ns / 2.0);
    emit_window(out, params.readout_ns, std::move(ev));
  };

  segs.push_back(AncillaMeasure{"m0"});
  readout_delay(segs);

  if (include_herald) {
    std::vector<GateEvent> hsel;
    for (int k = 0; k < 3; ++k) echo_pair(hsel, k, t_sel / 2.0, t_sel / 2.0);
    hsel.push_back({t_sel / 2.0, QubitGate{kAncilla, GateAxis::X, kPi,
                                           Selectivity::Fock0}});
    emit_window(segs, t_sel, std::move(hsel));
    segs.push_back(Herald{"h0"});
    readout_delay(segs);
  } else {
    segs.push_back(CavityReset{});
  }

  // Peak photon number over all register configurations, for the
  // truncation diagnostic.
  double max_n = 0.0;
  for (int r = 0; r < 8; ++r) {
    PointerWalker w{params, {(r >> 2) & 1, (r >> 1) & 1, r & 1, 0}};
    w.run(segs);
    max_n = std::max(max_n, w.max_n);
  }
  timings.max_mean_photon = max_n;
  if (enforce_truncation && poisson_tail(max_n, params.fock_cutoff) > 1e-8)
    throw TruncationError(
        "fock_cutoff too small: coherent tail mass above 1e-8 at peak mean "
        "photon number " +
        std::to_string(max_n));

  return PulseSchedule(std::move(segs), timings);
}

}  // namespace parityprobe
