#include "parityprobe/tomo/synth.hpp"

#include "parityprobe/rng.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace parityprobe {

namespace {

double clamp01(double p) { return std::clamp(p, 0.0, 1.0); }

// One dataset row: exact probability or a binomial draw from a dedicated
// stream so row order never affects other rows.
TomographyDataset::Row make_row(const std::string& label, double p,
                                std::int64_t shots, std::uint64_t seed,
                                std::uint64_t stream) {
  p = clamp01(p);
  if (shots <= 0) return {label, p, 0.0};
  auto gen = seeded_engine(seed, stream);
  std::binomial_distribution<std::int64_t> bin(shots, p);
  return {label, double(bin(gen)), double(shots)};
}

Matrix ground8() {
  Matrix rho = Matrix::Zero(8, 8);
  rho(0, 0) = 1.0;
  return rho;
}

TomographyDataset dataset_from_probs(
    const RotationSet& rotations,
    const std::function<double(const Matrix&)>& click_probability,
    std::int64_t shots, std::uint64_t seed, std::uint64_t stream_base) {
  TomographyDataset d;
  d.seed = seed;
  for (std::size_t i = 0; i < rotations.size(); ++i) {
    const Matrix& u = rotations.unitaries()[i];
    d.rows.push_back(make_row(rotations.labels()[i], click_probability(u),
                              shots, seed, stream_base + i));
  }
  return d;
}

}  // namespace

TomographyDataset synth_detector_dataset(const Povm& povm,
                                         const RotationSet& rotations,
                                         std::int64_t shots,
                                         std::uint64_t seed) {
  const Matrix rho0 = ground8();
  TomographyDataset d = dataset_from_probs(
      rotations,
      [&](const Matrix& u) {
        return (povm.first() * u * rho0 * u.adjoint()).trace().real();
      },
      shots, seed, 0);
  d.operator_label = "detector";
  return d;
}

TomographyDataset synth_state_dataset(const Matrix& rho, const Matrix& e_tomo,
                                      const RotationSet& rotations,
                                      std::int64_t shots, std::uint64_t seed) {
  TomographyDataset d = dataset_from_probs(
      rotations,
      [&](const Matrix& u) {
        return (e_tomo * u * rho * u.adjoint()).trace().real();
      },
      shots, seed, 0);
  d.operator_label = "state";
  return d;
}

InstrumentDataset synth_instrument_dataset(const QuantumInstrument& qi,
                                           const RotationSet& prep_rotations,
                                           const RotationSet& post_rotations,
                                           const Matrix& e_tomo,
                                           std::int64_t shots,
                                           std::uint64_t seed) {
  InstrumentDataset d;
  d.seed = seed;
  const Matrix rho0 = ground8();
  std::uint64_t stream = 0;
  for (std::size_t p = 0; p < prep_rotations.size(); ++p) {
    const Matrix& up = prep_rotations.unitaries()[p];
    const Matrix rho = up * rho0 * up.adjoint();
    InstrumentDataset::PrepBlock block;
    block.prep_label = prep_rotations.labels()[p];
    for (int b = 0; b < 2; ++b) {
      const Matrix out = qi.branch(b).apply(rho);
      const double q = out.trace().real();
      block.outcome_probability[b] = q;
      const Matrix post = (q > 1e-12) ? Matrix(out / q) : rho0;
      auto tomo = dataset_from_probs(
          post_rotations,
          [&](const Matrix& u) {
            return (e_tomo * u * post * u.adjoint()).trace().real();
          },
          shots, seed, stream);
      stream += post_rotations.size();
      tomo.operator_label = "post." + block.prep_label;
      block.tomograms[b] = std::move(tomo);
    }
    d.preps.push_back(std::move(block));
  }
  return d;
}

}  // namespace parityprobe
