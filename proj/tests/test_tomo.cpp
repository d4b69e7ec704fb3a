#include <doctest.h>

#include "parityprobe/linalg.hpp"
#include "parityprobe/pauli.hpp"
#include "parityprobe/rng.hpp"
#include "parityprobe/channel.hpp"
#include "parityprobe/metrics/metrics.hpp"
#include "parityprobe/tomo/estimators.hpp"
#include "parityprobe/tomo/synth.hpp"

#include <algorithm>

using namespace parityprobe;

namespace {

Matrix ground_projector() {
  Matrix e = Matrix::Zero(8, 8);
  e(0, 0) = 1.0;
  return e;
}

Matrix skewed_effect(std::uint64_t seed) {
  auto gen = seeded_engine(seed, 0);
  const Matrix u = haar_unitary(8, gen);
  RealVector lam(8);
  std::uniform_real_distribution<double> uni(0.05, 0.95);
  for (Index i = 0; i < 8; ++i) lam(i) = uni(gen);
  return hermitize(u * lam.asDiagonal().toDenseMatrix().cast<Complex>() *
                   u.adjoint());
}

QuantumInstrument noisy_parity_instrument(double flip) {
  const Matrix p0 =
      0.5 * (Matrix::Identity(8, 8) + PauliString("ZZZ").matrix());
  const Matrix p1 = Matrix::Identity(8, 8) - p0;
  auto branch = [&](const Matrix& keep, const Matrix& leak) {
    return Channel({std::sqrt(1.0 - flip) * keep, std::sqrt(flip) * leak},
                   Channel::TraceBehavior::NonIncreasing);
  };
  return QuantumInstrument(
      std::vector<Channel>{branch(p0, p1), branch(p1, p0)});
}

}  // namespace

TEST_CASE("rotation sets") {
  const RotationSet c = RotationSet::complete();
  const RotationSet o = RotationSet::overcomplete();
  CHECK(c.size() == 64);
  CHECK(o.size() == 216);
  for (const auto& u : o.unitaries())
    CHECK((u * u.adjoint() - Matrix::Identity(8, 8)).norm() < 1e-12);
  CHECK(o.index_of("I.I.I") == 0);
  CHECK_THROWS_AS(o.index_of("bogus"), ValidationError);

  // ground-probe design spans the full operator space
  Eigen::CompleteOrthogonalDecomposition<RealMatrix> cod(
      o.design_matrix(ground_projector()));
  CHECK(cod.rank() == 64);
}

TEST_CASE("detector tomography, exact probabilities") {
  const Matrix e = skewed_effect(7);
  const Povm truth = Povm::binary(e);
  const RotationSet rot = RotationSet::overcomplete();
  const TomographyDataset data = synth_detector_dataset(truth, rot, 0, 1);
  const auto fit = detector_tomography(data, rot, DetectorFitMode::Inversion);
  CHECK(trace_distance(fit.povm.first(), e) < 1e-8);
  CHECK((fit.raw_effect - e).norm() < 1e-8);
}

TEST_CASE("detector tomography, finite shots") {
  // near-projective effect, like the simulated parity detector
  const Matrix p0 =
      0.5 * (Matrix::Identity(8, 8) + PauliString("ZZZ").matrix());
  const Matrix e = 0.9 * p0 + 0.05 * Matrix::Identity(8, 8);
  const Povm truth = Povm::binary(e);
  const RotationSet rot = RotationSet::overcomplete();
  std::vector<double> errs;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const TomographyDataset data =
        synth_detector_dataset(truth, rot, 2000, seed);
    const auto fit =
        detector_tomography(data, rot, DetectorFitMode::Constrained);
    CHECK(fit.diagnostics.converged);
    // constrained reconstruction is a valid effect
    const auto ev = hermitian_eigenvalues(fit.povm.first());
    CHECK(ev.minCoeff() >= -1e-9);
    CHECK(ev.maxCoeff() <= 1.0 + 1e-9);
    errs.push_back(trace_distance(fit.povm.first(), e));
    // channel-level error is much smaller than the raw effect error
    const JMeasures j =
        j_measures(detector_channel(fit.povm), detector_channel(truth));
    CHECK(j.distance < 0.05);
  }
  std::sort(errs.begin(), errs.end());
  CHECK(errs[2] < 0.12);  // median over seeds, binomial-noise scale
}

TEST_CASE("state tomography recovers an entangled state") {
  Vector ghz = Vector::Zero(8);
  ghz(0) = Complex(1.0 / std::sqrt(2.0), 0.0);
  ghz(7) = Complex(1.0 / std::sqrt(2.0), 0.0);
  const Matrix rho = ghz * ghz.adjoint();
  const RotationSet rot = RotationSet::overcomplete();

  // a slightly biased readout effect still yields the right state when the
  // same effect is used in the fit
  Matrix e_tomo = ground_projector();
  e_tomo = 0.95 * e_tomo + 0.02 * Matrix::Identity(8, 8);
  const TomographyDataset data = synth_state_dataset(rho, e_tomo, rot, 0, 1);
  const auto fit = state_tomography(data, rot, e_tomo);
  CHECK(trace_fidelity(fit.rho, rho) > 1.0 - 1e-7);
  CHECK(fit.rho.trace().real() == doctest::Approx(1.0));
}

TEST_CASE("instrument tomography round trip at exact probabilities") {
  const QuantumInstrument truth = noisy_parity_instrument(0.07);
  const RotationSet prep = RotationSet::complete();
  const RotationSet post = RotationSet::overcomplete();
  const InstrumentDataset data =
      synth_instrument_dataset(truth, prep, post, ground_projector(), 0, 1);
  const auto fit = instrument_tomography(data, prep, post, ground_projector());
  CHECK(fit.diagnostics.converged);
  const Matrix c_true = hermitize(qi_channel(truth).choi()) / 8.0;
  const Matrix c_fit = hermitize(qi_channel(fit.instrument).choi()) / 8.0;
  CHECK(trace_fidelity(psd_clip(c_true, 1e-6), psd_clip(c_fit, 1e-6)) >=
        0.999);
}

TEST_CASE("dataset json round trips") {
  const Povm truth = Povm::binary(skewed_effect(9));
  const RotationSet rot = RotationSet::overcomplete();
  TomographyDataset data = synth_detector_dataset(truth, rot, 500, 4);
  data.operator_label = "ZZZ";
  data.herald = true;
  const TomographyDataset back = TomographyDataset::from_json(data.to_json());
  CHECK(back.operator_label == "ZZZ");
  CHECK(back.herald);
  REQUIRE(back.rows.size() == data.rows.size());
  for (std::size_t i = 0; i < data.rows.size(); ++i) {
    CHECK(back.rows[i].label == data.rows[i].label);
    CHECK(back.rows[i].clicks == data.rows[i].clicks);
    CHECK(back.rows[i].shots == data.rows[i].shots);
  }

  const QuantumInstrument qi = noisy_parity_instrument(0.03);
  const InstrumentDataset idata = synth_instrument_dataset(
      qi, RotationSet::complete(), rot, ground_projector(), 200, 5);
  const InstrumentDataset iback = InstrumentDataset::from_json(idata.to_json());
  REQUIRE(iback.preps.size() == idata.preps.size());
  CHECK(iback.preps[3].prep_label == idata.preps[3].prep_label);
  CHECK(iback.preps[3].outcome_probability[1] ==
        doctest::Approx(idata.preps[3].outcome_probability[1]));
  CHECK(iback.preps[3].tomograms[0].rows.size() ==
        idata.preps[3].tomograms[0].rows.size());
}
