#include <doctest.h>

#include "parityprobe/linalg.hpp"
#include "parityprobe/protocol/schedule.hpp"
#include "parityprobe/protocol/simulate.hpp"
#include "parityprobe/serialize.hpp"

#include <cmath>

using namespace parityprobe;

namespace {

DeviceParams small_ideal() {
  DeviceParams p = DeviceParams::ideal();
  p.fock_cutoff = 36;
  return p;
}

DeviceParams small_noisy() {
  DeviceParams p = DeviceParams::reference();
  p.fock_cutoff = 36;
  return p;
}

SubsetParitySpec zzz_small() {
  SubsetParitySpec s;
  s.subset = {true, true, true};
  s.theta = kPi;
  s.n0 = 2.0;
  return s;
}

double instrument_fidelity(const QuantumInstrument& a,
                           const QuantumInstrument& b) {
  return trace_fidelity(psd_clip(hermitize(qi_channel(a).choi()), 1e-4) / 8.0,
                        psd_clip(hermitize(qi_channel(b).choi()), 1e-4) / 8.0);
}

}  // namespace

TEST_CASE("device and operator specs") {
  DeviceParams p = DeviceParams::reference();
  CHECK_NOTHROW(p.validate());
  p.qubit_t1_us[0] = -1.0;
  CHECK_THROWS_AS(p.validate(), ValidationError);

  SubsetParitySpec s = SubsetParitySpec::from_label("ZIZ", 2.0 * kPi / 5.0, 5.0);
  CHECK(s.subset == std::array<bool, 3>{true, false, true});
  CHECK(s.label() == "ZIZ");
  CHECK(s.subset_size() == 2);
  CHECK_THROWS_AS(SubsetParitySpec::from_label("III", kPi, 5.0),
                  ValidationError);
  // three-qubit measurements require the full-swing angle
  SubsetParitySpec bad = zzz_small();
  bad.theta = 2.0 * kPi / 5.0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);

  const auto sep = pointer_separation(5.0, 2.0 * kPi / 5.0);
  CHECK(sep.delta == doctest::Approx(10.0 * (1.0 - std::cos(2.0 * kPi / 5.0))));
  CHECK(sep.overlap == doctest::Approx(std::exp(-sep.delta)));
  CHECK(sep.overlap == doctest::Approx(1.04e-3).epsilon(0.05));
}

TEST_CASE("schedule construction") {
  const DeviceParams p = DeviceParams::reference();
  SubsetParitySpec s = zzz_small();
  s.n0 = 5.0;
  const PulseSchedule sched = build_schedule(s, p, true);
  // T = theta / (2 pi chi_min), chi_min = 0.613 MHz
  CHECK(sched.timings().window_ns == doctest::Approx(815.66).epsilon(1e-3));
  CHECK(sched.timings().min_chi_qubit == 0);
  CHECK(sched.has_herald());
  CHECK(sched.total_duration_ns() > 2.0 * sched.timings().window_ns);

  // two-qubit subset at theta = 2 pi / 5
  const SubsetParitySpec ziz =
      SubsetParitySpec::from_label("ZIZ", 2.0 * kPi / 5.0, 5.0);
  const PulseSchedule s2 = build_schedule(ziz, p, false);
  CHECK(s2.timings().window_ns == doctest::Approx(326.26).epsilon(1e-3));
  CHECK_FALSE(s2.has_herald());

  // truncation guard
  DeviceParams tight = p;
  tight.fock_cutoff = 10;
  CHECK_THROWS_AS(build_schedule(s, tight, false), TruncationError);
  CHECK_NOTHROW(build_schedule(s, tight, false, false));

  CHECK(poisson_tail(8.0, 36) < 1e-10);
  CHECK(poisson_tail(8.0, 12) > poisson_tail(8.0, 24));

  const Json j = sched.to_json();
  CHECK(j.contains("segments"));
  CHECK(j.at("window_ns").get<double>() ==
        doctest::Approx(815.66).epsilon(1e-3));
}

TEST_CASE("noiseless simulation matches the projective instrument") {
  const SubsetParitySpec s = zzz_small();
  const PulseSchedule sched = build_schedule(s, small_ideal(), false);
  SimulateOptions opts;
  opts.noise = false;
  const SimulationResult res = simulate_protocol(sched, small_ideal(), opts);
  CHECK(res.tp_defect < 1e-9);
  CHECK(instrument_fidelity(res.unheralded, ideal_instrument(s)) >= 0.999);

  // ground preparation clicks never; flipped qubit always clicks
  const RealVector p0 = outcome_distribution(res.unheralded, {0, 0, 0});
  CHECK(p0(0) == doctest::Approx(1.0).epsilon(1e-3));
  const RealVector p1 = outcome_distribution(res.unheralded, {kPi, 0, 0});
  CHECK(p1(1) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("echoed qubit does not influence the outcome") {
  const SubsetParitySpec ziz =
      SubsetParitySpec::from_label("ZIZ", 2.0 * kPi / 5.0, 2.0);
  const PulseSchedule sched = build_schedule(ziz, small_ideal(), false);
  SimulateOptions opts;
  opts.noise = false;
  const QuantumInstrument qi =
      simulate_instrument(sched, small_ideal(), opts);
  const RealVector a = outcome_distribution(qi, {0.0, 0.0, 0.0});
  const RealVector b = outcome_distribution(qi, {0.0, 2.1, 0.0});
  CHECK(std::abs(a(1) - b(1)) < 1e-6);
}

TEST_CASE("noisy simulation: herald branch and step convergence") {
  const SubsetParitySpec s = zzz_small();
  const DeviceParams dev = small_noisy();
  const PulseSchedule sched = build_schedule(s, dev, true);
  SimulateOptions opts;
  opts.herald = true;
  opts.step_ns = 4.0;
  const SimulationResult coarse = simulate_protocol(sched, dev, opts);
  REQUIRE(coarse.heralded.has_value());
  CHECK(coarse.herald_probability > 0.5);
  CHECK(coarse.herald_probability <= 1.0 + 1e-9);
  CHECK(coarse.tp_defect < 1e-6);

  opts.step_ns = 2.0;
  const SimulationResult fine = simulate_protocol(sched, dev, opts);
  const double drift =
      (qi_channel(coarse.unheralded).choi() - qi_channel(fine.unheralded).choi())
          .norm() / 8.0;
  CHECK(drift < 2e-4);  // halving the step barely moves the Choi matrix

  // heralding can only improve agreement with the ideal measurement
  const QuantumInstrument ideal = ideal_instrument(s);
  CHECK(instrument_fidelity(*fine.heralded, ideal) >=
        instrument_fidelity(fine.unheralded, ideal));
}

TEST_CASE("sampled shots are deterministic and match the distribution") {
  const SubsetParitySpec s = zzz_small();
  const DeviceParams dev = small_ideal();
  const PulseSchedule sched = build_schedule(s, dev, false);
  SimulateOptions opts;
  opts.noise = false;

  const std::array<double, 3> prep{0.7, 0.0, 0.0};
  const OutcomeRecord r1 = simulate_shots(sched, dev, prep, 2000, 99, opts);
  const OutcomeRecord r2 = simulate_shots(sched, dev, prep, 2000, 99, opts);
  CHECK(r1.counts == r2.counts);
  CHECK(r1.shots == 2000);

  const QuantumInstrument qi = simulate_instrument(sched, dev, opts);
  const double p_click = outcome_distribution(qi, prep)(1);
  const double freq = static_cast<double>(r1.clicks()) / 2000.0;
  CHECK(std::abs(freq - p_click) < 0.05);  // ~4 sigma binomial slack
}
