#pragma once

#include "parityprobe/instrument.hpp"
#include "parityprobe/povm.hpp"
#include "parityprobe/tomo/dataset.hpp"
#include "parityprobe/tomo/rotations.hpp"
#include "parityprobe/types.hpp"

namespace parityprobe {

/// Constrained least-squares fit did not reach the KKT tolerance within the
/// iteration cap.
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FitDiagnostics {
  double residual = 0.0;    // sqrt of final sum of squared residuals
  double kkt = 0.0;         // projected-gradient stationarity measure
  long iterations = 0;
  bool converged = true;
};

enum class DetectorFitMode { Inversion, Constrained };

struct DetectorTomographyResult {
  Povm povm;
  Matrix raw_effect;  // inversion-mode effect before any projection
  FitDiagnostics diagnostics;
};

/// Reconstruct a binary detector effect from click frequencies on rotated
/// ground-state probes. Inversion mode is the unconstrained pseudo-inverse
/// solution; constrained mode projects onto 0 <= E <= I.
DetectorTomographyResult detector_tomography(
    const TomographyDataset& data, const RotationSet& rotations,
    DetectorFitMode mode = DetectorFitMode::Constrained);

struct StateTomographyResult {
  Matrix rho;
  FitDiagnostics diagnostics;
};

/// Least-squares state fit constrained to the PSD, unit-trace cone. The
/// measurement effect defaults to the ideal ground-state projector.
StateTomographyResult state_tomography(const TomographyDataset& data,
                                       const RotationSet& rotations,
                                       const Matrix& e_tomo);

struct InstrumentTomographyResult {
  QuantumInstrument instrument;
  FitDiagnostics diagnostics;
};

/// Two-stage instrument reconstruction: per-(preparation, outcome) state
/// fits, then a constrained fit of the branch Choi pair with both branches
/// PSD and the branch sum trace-preserving.
InstrumentTomographyResult instrument_tomography(
    const InstrumentDataset& data, const RotationSet& prep_rotations,
    const RotationSet& post_rotations, const Matrix& e_tomo);

/// Solver knobs shared by the constrained fits.
struct SolverOptions {
  double kkt_tol = 1e-8;
  long max_iterations = 100000;
};

}  // namespace parityprobe
