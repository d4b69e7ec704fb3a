// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Criteria cover ideal-protocol equivalence, the product-state
// sufficiency of the binary detector distance, tomography round trips,
// ordering/heralding properties, quantitative bands on the reference
// device, specificity closed forms, and the projector chi-matrix pattern.

#include "parityprobe/channel.hpp"
#include "parityprobe/cli/pipeline.hpp"
#include "parityprobe/instrument.hpp"
#include "parityprobe/linalg.hpp"
#include "parityprobe/metrics/metrics.hpp"
#include "parityprobe/pauli.hpp"
#include "parityprobe/povm.hpp"
#include "parityprobe/protocol/device.hpp"
#include "parityprobe/protocol/schedule.hpp"
#include "parityprobe/protocol/simulate.hpp"
#include "parityprobe/rng.hpp"
#include "parityprobe/tomo/estimators.hpp"
#include "parityprobe/tomo/rotations.hpp"
#include "parityprobe/tomo/synth.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

using namespace parityprobe;

namespace {

int g_failures = 0;

void report(int n, const std::string& what, bool pass,
            const std::string& detail) {
  std::printf("criterion %d [%s] %s -- %s\n", n, pass ? "PASS" : "FAIL",
              what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::vector<SubsetParitySpec> all_operators() {
  std::vector<SubsetParitySpec> ops;
  for (int mask = 1; mask < 8; ++mask) {
    SubsetParitySpec s;
    for (int q = 0; q < 3; ++q) s.subset[q] = (mask >> q) & 1;
    s.theta = (s.subset_size() == 3) ? kPi : 2.0 * kPi / 5.0;
    s.n0 = 5.0;
    ops.push_back(s);
  }
  return ops;
}

Matrix parity_projector(const std::string& word, int sign) {
  const Matrix p = PauliString(word).matrix();
  const Index d = p.rows();
  return 0.5 * (Matrix::Identity(d, d) + static_cast<double>(sign) * p);
}

Povm random_binary(Index d, std::uint64_t seed) {
  auto gen = seeded_engine(seed, 0);
  const Matrix u = haar_unitary(d, gen);
  RealVector lam(d);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (Index i = 0; i < d; ++i) lam(i) = uni(gen);
  return Povm::binary(hermitize(
      u * lam.asDiagonal().toDenseMatrix().cast<Complex>() * u.adjoint()));
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), f, a, b, c);
  return buf;
}

// 1. Noiseless protocol reproduces the ideal projective instruments.
void criterion_1() {
  const auto start = std::chrono::steady_clock::now();
  const DeviceParams dev = DeviceParams::ideal();
  SimulateOptions opt;
  opt.noise = false;
  double min_fj = 1.0, max_theta = 0.0;
  for (const SubsetParitySpec& spec : all_operators()) {
    const PulseSchedule sched = build_schedule(spec, dev);
    const SimulationResult res = simulate_protocol(sched, dev, opt);
    const double fj = j_measures(qi_channel(res.unheralded),
                                 qi_channel(ideal_instrument(spec)))
                          .fidelity;
    const Povm det = povm_from_instrument(res.unheralded);
    const SpecificityReport sr =
        specificity(det.first(), PauliString(spec.label()));
    min_fj = std::min(min_fj, fj);
    max_theta = std::max(max_theta, sr.theta_s_deg);
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  const bool pass = min_fj >= 0.999 && max_theta <= 0.1 && secs <= 600.0;
  report(1, "noiseless protocol equals ideal projectors", pass,
         fmt("min F_J %.6f, max theta_s %.4f deg, %.1f s", min_fj, max_theta,
             secs));
}

// 2. Binary detector distance: optimizer matches max|eig(E - E')| and
// entangled inputs never beat product-state inputs.
void criterion_2() {
  double worst_gap = 0.0, worst_excess = -1.0;
  bool pass = true;
  OptimizerOptions opt;
  opt.restarts = 48;
  opt.force_iterative = true;
  std::uint64_t seed = 1000;
  for (Index d : {2, 4, 8}) {
    for (int pair = 0; pair < 200; ++pair) {
      const Povm a = random_binary(d, seed++);
      const Povm b = random_binary(d, seed++);
      Eigen::SelfAdjointEigenSolver<Matrix> es(
          hermitize(a.first() - b.first()));
      const double analytic = es.eigenvalues().cwiseAbs().maxCoeff();
      opt.seed = seed;
      const double numeric = detector_s_distance(a, b, opt).value;
      worst_gap = std::max(worst_gap, std::abs(numeric - analytic));
      const double brute = s_measure_bruteforce(
          a, b, 100000, seed, SMode::Distance, SSpace::SystemReference);
      worst_excess = std::max(worst_excess, brute - analytic);
      if (std::abs(numeric - analytic) >= 1e-6 || brute > analytic + 1e-8)
        pass = false;
    }
  }
  report(2, "binary S-distance analytic/optimizer/entangled agreement", pass,
         fmt("max |opt-analytic| %.2e, max entangled excess %.2e", worst_gap,
             worst_excess));
}

// 3. Tomography round trips at exact probabilities and at 2000 shots.
void criterion_3() {
  const Povm truth = Povm::binary(parity_projector("ZZZ", +1));
  const RotationSet over = RotationSet::overcomplete();
  const RotationSet complete = RotationSet::complete();

  const auto exact = detector_tomography(
      synth_detector_dataset(truth, over, 0, 5), over,
      DetectorFitMode::Inversion);
  const double exact_err = trace_distance(exact.povm.first(), truth.first());

  // Exact-probability instrument round trip on the noiseless simulation.
  SubsetParitySpec zzz = SubsetParitySpec::from_label("ZZZ", kPi, 2.0);
  DeviceParams dev = DeviceParams::ideal();
  dev.fock_cutoff = 36;
  SimulateOptions sopt;
  sopt.noise = false;
  const QuantumInstrument sim =
      simulate_instrument(build_schedule(zzz, dev), dev, sopt);
  Matrix e_tomo = Matrix::Zero(8, 8);
  e_tomo(0, 0) = 1.0;
  const auto instr = instrument_tomography(
      synth_instrument_dataset(sim, complete, over, e_tomo, 0, 5), complete,
      over, e_tomo);
  const double instr_fj =
      j_measures(qi_channel(instr.instrument), qi_channel(sim)).fidelity;

  // Channel-level reconstruction error at 2000 shots per rotation.
  std::vector<double> errs;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto fit = detector_tomography(
        synth_detector_dataset(truth, over, 2000, s), over,
        DetectorFitMode::Constrained);
    errs.push_back(j_measures(detector_channel(fit.povm),
                              detector_channel(truth))
                       .distance);
  }
  std::sort(errs.begin(), errs.end());
  const double median = 0.5 * (errs[9] + errs[10]);

  const bool pass = exact_err < 1e-8 && instr_fj >= 0.999 && median <= 0.03;
  report(3, "tomography round trips", pass,
         fmt("exact err %.2e, instrument F_J %.6f, shot median %.4f",
             exact_err, instr_fj, median));
}

// 4 + 5. One full noisy reference-device study feeds both the ordering /
// heralding checks and the quantitative bands.
void criteria_4_5() {
  ExperimentConfig cfg;
  cfg.operators = all_operators();
  cfg.herald = HeraldSetting::Both;
  cfg.seed = 21;
  cfg.output_dir =
      (std::filesystem::temp_directory_path() / "parityprobe_acceptance")
          .string();
  cfg.s_restarts = 24;
  cfg.instrument_s_measures = true;
  std::filesystem::remove_all(cfg.output_dir);
  std::vector<RunArtifacts> runs;
  try {
    runs = run_experiment(cfg);
  } catch (const std::exception& e) {
    report(4, "F_S <= F_J and heralded >= unheralded on the noisy device",
           false, std::string("study failed: ") + e.what());
    report(5, "reference-device quantitative bands", false,
           "study failed");
    return;
  }

  bool order_pass = true, band_pass = true;
  std::string order_note = "all pairs ordered", band_note;
  double zzz_assign = 0.0, zzz_fj = 0.0, max_theta = 0.0;
  for (const RunArtifacts& r : runs) {
    const MetricReport& m = r.report;
    if (m.det_f_s > m.det_f_j + 1e-9 ||
        (m.qi_f_s && *m.qi_f_s > m.qi_f_j + 1e-6)) {
      order_pass = false;
      order_note = "F_S > F_J on " + m.op;
    }
    if (!m.herald) {
      const MetricReport* h = nullptr;
      for (const RunArtifacts& o : runs)
        if (o.report.op == m.op && o.report.herald) h = &o.report;
      if (!h) continue;
      if (h->det_f_j < m.det_f_j || h->det_f_s < m.det_f_s ||
          h->assignment.fidelity < m.assignment.fidelity) {
        order_pass = false;
        order_note = "heralding did not improve " + m.op;
      }
      max_theta = std::max(max_theta, m.spec_report.theta_s_deg);
      if (m.op == "ZZZ") {
        zzz_assign = m.assignment.fidelity;
        zzz_fj = m.qi_f_j;
      }
    }
  }
  report(4, "F_S <= F_J and heralded >= unheralded on the noisy device",
         order_pass, order_note);

  band_pass = zzz_assign >= 0.84 && zzz_assign <= 0.94 && zzz_fj >= 0.70 &&
              zzz_fj <= 0.90 && max_theta <= 6.0;
  band_note = fmt("ZZZ assignment %.4f, ZZZ instrument F_J %.4f, "
                  "max theta_s %.2f deg",
                  zzz_assign, zzz_fj, max_theta);
  report(5, "reference-device quantitative bands", band_pass, band_note);
}

// 6. Specificity and depolarized-detector closed forms.
void criterion_6() {
  const Index d = 8;
  const Matrix e = 0.5 * Matrix::Identity(d, d) +
                   0.4 * PauliString("ZZZ").matrix() +
                   0.1 * PauliString("XII").matrix();
  const SpecificityReport sr = specificity(e, PauliString("ZZZ"));

  const Matrix p0 = parity_projector("ZZZ", +1);
  const double eps = 0.04;
  const Povm ideal = Povm::binary(p0);
  const Povm noisy = Povm::binary(
      (1.0 - eps) * p0 + eps * (Matrix::Identity(d, d) - p0));
  OptimizerOptions opt;
  opt.restarts = 48;
  const double fs = detector_s_fidelity(ideal, noisy, opt).value;
  const double ds = detector_s_distance(ideal, noisy, opt).value;

  const bool pass = std::abs(sr.theta_s_deg - 14.04) <= 0.01 &&
                    std::abs(sr.c_max - 0.4123) <= 1e-4 &&
                    std::abs(fs - 0.96) <= 1e-6 && std::abs(ds - 0.04) <= 1e-6;
  report(6, "specificity and depolarized closed forms", pass,
         fmt("theta_s %.4f deg, c_max %.5f", sr.theta_s_deg, sr.c_max) +
             fmt(", F_S %.7f, D_S %.7f", fs, ds));
}

// 7. Chi-matrix pattern of the ideal projector branches.
void criterion_7() {
  const auto labels = pauli_labels(3);
  Index i_iii = -1, i_zzz = -1;
  for (std::size_t j = 0; j < labels.size(); ++j) {
    if (labels[j] == "III") i_iii = static_cast<Index>(j);
    if (labels[j] == "ZZZ") i_zzz = static_cast<Index>(j);
  }
  bool pass = true;
  double worst = 0.0;
  for (int sign : {+1, -1}) {
    const Channel branch({parity_projector("ZZZ", sign)},
                         Channel::TraceBehavior::NonIncreasing);
    const Matrix chi = chi_matrix(branch, 3);
    for (Index r = 0; r < 64; ++r)
      for (Index c = 0; c < 64; ++c) {
        const bool corner =
            (r == i_iii || r == i_zzz) && (c == i_iii || c == i_zzz);
        if (corner) {
          const double expected = (r == c || sign > 0) ? 0.25 : -0.25;
          const double dev = std::abs(chi(r, c) - Complex(expected, 0.0));
          worst = std::max(worst, dev);
          if (dev > 1e-9) pass = false;
        } else if (std::abs(chi(r, c)) >= 1e-9) {
          pass = false;
          worst = std::max(worst, std::abs(chi(r, c)));
        }
      }
  }
  report(7, "projector branch chi-matrix pattern", pass,
         fmt("worst deviation %.2e", worst));
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criteria_4_5();
  criterion_6();
  criterion_7();
  if (g_failures > 0) {
    std::printf("acceptance: %d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("acceptance: all criteria passed\n");
  return 0;
}
