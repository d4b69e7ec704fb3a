#include <doctest.h>

#include "parityprobe/linalg.hpp"
#include "parityprobe/metrics/metrics.hpp"
#include "parityprobe/rng.hpp"

#include <cmath>

using namespace parityprobe;

namespace {

Matrix zzz_projector() {
  return 0.5 * (Matrix::Identity(8, 8) + PauliString("ZZZ").matrix());
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

QuantumInstrument flip_instrument(double eps) {
  const Matrix p0 = zzz_projector();
  const Matrix p1 = Matrix::Identity(8, 8) - p0;
  auto branch = [&](const Matrix& keep, const Matrix& leak) {
    return Channel({std::sqrt(1.0 - eps) * keep, std::sqrt(eps) * leak},
                   Channel::TraceBehavior::NonIncreasing);
  };
  return QuantumInstrument(
      std::vector<Channel>{branch(p0, p1), branch(p1, p0)});
}

}  // namespace

TEST_CASE("assignment fit recovers offset and contrast") {
  SubsetParitySpec spec = SubsetParitySpec::from_label("ZZZ", kPi, 5.0);
  const double offset = 0.03, contrast = 0.88;
  std::vector<PreparationRecord> records;
  for (int q = 0; q < 3; ++q)
    for (int i = 0; i < 9; ++i) {
      std::array<double, 3> angles{0, 0, 0};
      angles[static_cast<std::size_t>(q)] = 2.0 * kPi * i / 8.0;
      double prod = 1.0;
      for (int k = 0; k < 3; ++k) prod *= std::cos(angles[k]);
      records.push_back({angles, offset + 0.5 * contrast * (1.0 - prod)});
    }
  const AssignmentFit fit = assignment_fidelity(records, spec);
  CHECK(fit.offset == doctest::Approx(offset).epsilon(1e-9));
  CHECK(fit.contrast == doctest::Approx(contrast).epsilon(1e-9));
  // perfect detector scores 1
  std::vector<PreparationRecord> ideal;
  for (const auto& r : records) {
    double prod = 1.0;
    for (int k = 0; k < 3; ++k) prod *= std::cos(r.angles[k]);
    ideal.push_back({r.angles, 0.5 * (1.0 - prod)});
  }
  CHECK(assignment_fidelity(ideal, spec).fidelity ==
        doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("specificity closed forms") {
  const PauliString zzz("ZZZ");
  const Matrix e = 0.5 * Matrix::Identity(8, 8) + 0.4 * zzz.matrix() +
                   0.1 * PauliString("XII").matrix();
  const SpecificityReport rep = specificity(e, zzz);
  CHECK(rep.c_i == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(rep.c_t == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(rep.c_o == doctest::Approx(0.1).epsilon(1e-10));
  CHECK(std::abs(rep.theta_s_deg - 14.0362) < 0.01);
  CHECK(std::abs(rep.c_max - 0.412311) < 1e-4);
  CHECK_FALSE(rep.wrong_sign);

  // realized axis has unit coefficient norm and reproduces c_max
  const Matrix axis = rep.sigma_max(zzz);
  CHECK((e - rep.c_i * Matrix::Identity(8, 8) - rep.c_max * axis).norm() <
        1e-9);

  // anti-aligned effect is flagged
  const SpecificityReport bad =
      specificity(Matrix(0.5 * Matrix::Identity(8, 8) - 0.3 * zzz.matrix()),
                  zzz);
  CHECK(bad.wrong_sign);
  CHECK(bad.theta_s_deg >= 90.0);

  // a perfect projector has zero specificity angle
  const SpecificityReport perfect = specificity(zzz_projector(), zzz);
  CHECK(perfect.theta_s_deg == doctest::Approx(0.0));
  CHECK(perfect.c_max == doctest::Approx(0.5));
}

TEST_CASE("depolarized detector closed forms") {
  const double eps = 0.04;
  const Matrix p0 = zzz_projector();
  const Matrix flipped =
      (1.0 - eps) * p0 + eps * (Matrix::Identity(8, 8) - p0);
  const Povm ideal = Povm::binary(p0);
  const Povm noisy = Povm::binary(flipped);
  OptimizerOptions opt;
  opt.restarts = 48;
  CHECK(std::abs(detector_s_fidelity(ideal, noisy, opt).value - 0.96) < 1e-6);
  CHECK(std::abs(detector_s_distance(ideal, noisy, opt).value - 0.04) < 1e-6);
}

TEST_CASE("j measures") {
  const Channel id = Channel::identity(4);
  const JMeasures same = j_measures(id, id);
  CHECK(same.fidelity == doctest::Approx(1.0));
  CHECK(same.distance == doctest::Approx(0.0).epsilon(1e-9));

  auto gen = seeded_engine(4, 0);
  const Channel rot = Channel::from_unitary(haar_unitary(4, gen));
  const JMeasures diff = j_measures(id, rot);
  CHECK(diff.fidelity < 1.0);
  CHECK(diff.distance > 0.0);
  // Fuchs - van de Graaff between the Jamiolkowski states
  CHECK(1.0 - std::sqrt(diff.fidelity) <= diff.distance + 1e-9);
  CHECK(diff.distance <= std::sqrt(1.0 - diff.fidelity) + 1e-9);
}

TEST_CASE("binary distance optimizer agrees with the analytic value") {
  OptimizerOptions opt;
  opt.restarts = 24;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    for (Index d : {2, 4, 8}) {
      const Povm a = random_binary(d, 100 + seed);
      const Povm b = random_binary(d, 200 + seed);
      const SMeasureResult analytic = detector_s_distance(a, b, opt);
      OptimizerOptions iter = opt;
      iter.force_iterative = true;
      const SMeasureResult numeric = detector_s_distance(a, b, iter);
      CHECK(std::abs(analytic.value - numeric.value) < 1e-6);
      // reported value matches its own witness state
      CHECK(std::abs(detector_distance_objective(a, b, numeric.state) -
                     numeric.value) < 1e-12);
    }
  }
}

TEST_CASE("brute force brackets the optimizers") {
  const Povm a = random_binary(4, 31);
  const Povm b = random_binary(4, 32);
  OptimizerOptions opt;
  opt.restarts = 48;
  const double f_opt = detector_s_fidelity(a, b, opt).value;
  const double f_brute =
      s_measure_bruteforce(a, b, 20000, 5, SMode::Fidelity, SSpace::System);
  CHECK(f_opt <= f_brute + 1e-9);
  CHECK(f_brute - f_opt < 0.1);

  const double d_opt = detector_s_distance(a, b, opt).value;
  const double d_brute =
      s_measure_bruteforce(a, b, 20000, 5, SMode::Distance, SSpace::System);
  CHECK(d_brute <= d_opt + 1e-9);
  // entangled probes cannot beat the product optimum for binary detectors
  const double d_ent = s_measure_bruteforce(a, b, 20000, 5, SMode::Distance,
                                            SSpace::SystemReference);
  CHECK(d_ent <= d_opt + 1e-8);
}

TEST_CASE("instrument worst-case measures: flip-noise closed forms") {
  const double eps = 0.05;
  const QuantumInstrument ideal = flip_instrument(0.0);
  const QuantumInstrument noisy = flip_instrument(eps);
  OptimizerOptions opt;
  opt.restarts = 24;
  opt.seed = 3;

  const SMeasureResult self = qi_s_fidelity(ideal, ideal, opt);
  CHECK(self.value == doctest::Approx(1.0).epsilon(1e-8));

  const SMeasureResult fs = qi_s_fidelity(ideal, noisy, opt);
  CHECK(std::abs(fs.value - (1.0 - eps)) < 1e-6);
  CHECK(std::abs(qi_fidelity_objective(ideal, noisy, fs.state) - fs.value) <
        1e-12);

  const SMeasureResult ds = qi_s_distance(ideal, noisy, opt);
  CHECK(std::abs(ds.value - eps) < 1e-6);

  // worst case is at least as bad as the Jamiolkowski point
  const JMeasures j = j_measures(qi_channel(ideal), qi_channel(noisy));
  CHECK(fs.value <= j.fidelity + 1e-9);
  CHECK(ds.value >= j.distance - 1e-9);

  // brute force brackets from the feasible side
  const double f_brute =
      s_measure_bruteforce(ideal, noisy, 5000, 2, SMode::Fidelity);
  CHECK(fs.value <= f_brute + 1e-9);
}
