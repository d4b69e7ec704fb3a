#pragma once

#include "parityprobe/instrument.hpp"
#include "parityprobe/povm.hpp"
#include "parityprobe/tomo/dataset.hpp"
#include "parityprobe/tomo/rotations.hpp"

#include <cstdint>

namespace parityprobe {

/// Detector-tomography dataset from a binary POVM: click probabilities on
/// rotated ground-state probes, binomially sampled (shots > 0) or exact
/// (shots == 0). Deterministic per seed.
TomographyDataset synth_detector_dataset(const Povm& povm,
                                         const RotationSet& rotations,
                                         std::int64_t shots,
                                         std::uint64_t seed);

/// State-tomography dataset for a given register state measured through the
/// effect e_tomo after each post-rotation.
TomographyDataset synth_state_dataset(const Matrix& rho, const Matrix& e_tomo,
                                      const RotationSet& rotations,
                                      std::int64_t shots, std::uint64_t seed);

/// Instrument-tomography dataset: preparations from the complete rotation
/// set, conditioned post-measurement tomograms from the overcomplete set.
InstrumentDataset synth_instrument_dataset(const QuantumInstrument& qi,
                                           const RotationSet& prep_rotations,
                                           const RotationSet& post_rotations,
                                           const Matrix& e_tomo,
                                           std::int64_t shots,
                                           std::uint64_t seed);

}  // namespace parityprobe
