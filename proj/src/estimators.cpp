#include "parityprobe/tomo/estimators.hpp"

#include "parityprobe/linalg.hpp"
#include "parityprobe/pauli.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace parityprobe {

namespace {

// Click frequencies aligned with the rotation-set ordering. Every rotation
// in the set must be present exactly once.
RealVector aligned_frequencies(const TomographyDataset& data,
                               const RotationSet& rotations) {
  data.validate();
  std::unordered_map<std::string, double> by_label;
  for (const auto& r : data.rows) {
    if (!by_label.emplace(r.label, r.frequency()).second)
      throw ValidationError("duplicate rotation row: " + r.label);
  }
  RealVector m(static_cast<Index>(rotations.size()));
  for (std::size_t i = 0; i < rotations.size(); ++i) {
    auto it = by_label.find(rotations.labels()[i]);
    if (it == by_label.end())
      throw ValidationError("dataset is missing rotation " +
                            rotations.labels()[i]);
    m(static_cast<Index>(i)) = it->second;
  }
  return m;
}

Matrix ground_projector() {
  Matrix rho = Matrix::Zero(8, 8);
  rho(0, 0) = 1.0;
  return rho;
}

// Euclidean projection of a Hermitian matrix onto {0 <= E <= I}.
Matrix project_effect(const Matrix& e) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(e));
  RealVector ev = es.eigenvalues().cwiseMax(0.0).cwiseMin(1.0);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

// Euclidean projection of a real vector onto the probability simplex.
RealVector project_simplex(RealVector v) {
  const Index n = v.size();
  RealVector u = v;
  std::sort(u.data(), u.data() + n, std::greater<double>());
  double cum = 0.0, tau = 0.0;
  int k = 0;
  for (Index i = 0; i < n; ++i) {
    cum += u(i);
    const double t = (cum - 1.0) / double(i + 1);
    if (u(i) - t > 0.0) {
      tau = t;
      k = int(i) + 1;
    }
  }
  (void)k;
  return (v.array() - tau).cwiseMax(0.0);
}

// Euclidean projection of a Hermitian matrix onto {rho >= 0, Tr rho = 1}.
Matrix project_state(const Matrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(rho));
  RealVector ev = project_simplex(es.eigenvalues());
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

// Accelerated projected-gradient minimization of ||A x - m||^2 over
// {x : reconstruct(x) in C}, with the projection supplied in matrix space.
template <typename Project>
FitDiagnostics fista(const RealMatrix& a, const RealVector& m, RealVector& x,
                     Project project, const SolverOptions& opts) {
  const RealMatrix gram = a.transpose() * a;
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(gram);
  const double lip = 2.0 * es.eigenvalues().maxCoeff();
  const double step = 1.0 / std::max(lip, 1e-12);

  auto project_vec = [&](const RealVector& v) { return project(v); };
  x = project_vec(x);
  RealVector y = x, x_prev = x;
  double t = 1.0;
  FitDiagnostics diag;
  for (long it = 1; it <= opts.max_iterations; ++it) {
    const RealVector grad = 2.0 * (gram * y - a.transpose() * m);
    RealVector x_new = project_vec(y - step * grad);
    const double t_new = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = x_new + ((t - 1.0) / t_new) * (x_new - x_prev);
    x_prev = x_new;
    x = x_new;
    t = t_new;

    const RealVector g_at_x = 2.0 * (gram * x - a.transpose() * m);
    const double kkt = (x - project_vec(x - step * g_at_x)).norm() / step;
    diag.kkt = kkt;
    diag.iterations = it;
    if (kkt <= opts.kkt_tol * std::max(1.0, lip)) {
      diag.converged = true;
      diag.residual = (a * x - m).norm();
      return diag;
    }
  }
  diag.converged = false;
  diag.residual = (a * x - m).norm();
  return diag;
}

}  // namespace

DetectorTomographyResult detector_tomography(const TomographyDataset& data,
                                             const RotationSet& rotations,
                                             DetectorFitMode mode) {
  const RealMatrix a = rotations.design_matrix(ground_projector());
  const RealVector m = aligned_frequencies(data, rotations);
  Eigen::CompleteOrthogonalDecomposition<RealMatrix> cod(a);
  if (cod.rank() < a.cols())
    throw ValidationError("rank-deficient tomography design matrix");
  RealVector c = cod.solve(m);
  const Matrix raw = pauli_reconstruct(c, 3);

  FitDiagnostics diag;
  diag.residual = (a * c - m).norm();
  if (mode == DetectorFitMode::Inversion) {
    // Unconstrained solution: completeness holds by construction but the
    // effect may stray outside [0, I]; positivity is not enforced.
    return DetectorTomographyResult{Povm::binary(raw, 1e9), raw, diag};
  }
  SolverOptions opts;
  auto project = [&](const RealVector& v) {
    return pauli_expand(project_effect(pauli_reconstruct(v, 3)), 3);
  };
  diag = fista(a, m, c, project, opts);
  if (!diag.converged)
    throw ConvergenceError("constrained detector fit: KKT residual " +
                           std::to_string(diag.kkt) + " after iteration cap");
  return DetectorTomographyResult{
      Povm::binary(project_effect(pauli_reconstruct(c, 3))), raw, diag};
}

StateTomographyResult state_tomography(const TomographyDataset& data,
                                       const RotationSet& rotations,
                                       const Matrix& e_tomo) {
  // m_i = Tr[E_tomo R_i rho R_i^dag] = sum_j x_j Tr[E_tomo R_i sigma_j
  // R_i^dag] with rho = sum_j x_j sigma_j.
  const auto basis = pauli_basis_matrices(3);
  RealMatrix a(static_cast<Index>(rotations.size()),
               static_cast<Index>(basis.size()));
  for (std::size_t i = 0; i < rotations.size(); ++i) {
    const Matrix probe_e = rotations.unitaries()[i].adjoint() * e_tomo *
                           rotations.unitaries()[i];
    for (std::size_t j = 0; j < basis.size(); ++j)
      a(static_cast<Index>(i), static_cast<Index>(j)) =
          (probe_e * basis[j]).trace().real();
  }
  const RealVector m = aligned_frequencies(data, rotations);
  Eigen::CompleteOrthogonalDecomposition<RealMatrix> cod(a);
  if (cod.rank() < a.cols())
    throw ValidationError("rank-deficient tomography design matrix");
  RealVector x = cod.solve(m);

  SolverOptions opts;
  auto project = [&](const RealVector& v) {
    return pauli_expand(project_state(pauli_reconstruct(v, 3)), 3);
  };
  FitDiagnostics diag = fista(a, m, x, project, opts);
  if (!diag.converged)
    throw ConvergenceError("constrained state fit: KKT residual " +
                           std::to_string(diag.kkt) + " after iteration cap");
  return StateTomographyResult{project_state(pauli_reconstruct(x, 3)), diag};
}

namespace {

Matrix apply_choi(const Matrix& choi, const Matrix& rho) {
  Matrix out = Matrix::Zero(8, 8);
  for (int r = 0; r < 8; ++r)
    for (int rp = 0; rp < 8; ++rp) {
      const Complex w = rho(r, rp);
      if (w == Complex(0.0, 0.0)) continue;
      for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
          out(i, j) += w * choi(i * 8 + r, j * 8 + rp);
    }
  return out;
}

// Projection onto {C0 >= 0, C1 >= 0, Tr_out(C0 + C1) = I} by Dykstra
// alternation between the PSD cones and the affine trace constraint.
void project_choi_pair(std::array<Matrix, 2>& c, int sweeps = 60,
                       double tol = 1e-12) {
  std::array<Matrix, 2> inc_psd{Matrix::Zero(64, 64), Matrix::Zero(64, 64)};
  std::array<Matrix, 2> inc_aff{Matrix::Zero(64, 64), Matrix::Zero(64, 64)};
  const Matrix id8 = Matrix::Identity(8, 8);
  for (int s = 0; s < sweeps; ++s) {
    for (int b = 0; b < 2; ++b) {
      const Matrix y = c[b] + inc_psd[b];
      c[b] = psd_clip(hermitize(y), 1e30);
      inc_psd[b] = y - c[b];
    }
    Matrix defect = -id8;
    for (int b = 0; b < 2; ++b) {
      c[b] += inc_aff[b];
      defect += partial_trace_first(c[b], 8, 8);
    }
    double viol = defect.cwiseAbs().maxCoeff();
    for (int b = 0; b < 2; ++b) {
      const Matrix corr = kron(Matrix::Identity(8, 8), defect) / 16.0;
      inc_aff[b] = corr;
      c[b] -= corr;
    }
    // feasibility of the PSD side after the affine correction
    double psd_viol = 0.0;
    for (int b = 0; b < 2; ++b)
      psd_viol = std::max(psd_viol, std::max(0.0, -min_eigenvalue(c[b])));
    if (viol < tol && psd_viol < tol) break;
  }
}

}  // namespace

InstrumentTomographyResult instrument_tomography(
    const InstrumentDataset& data, const RotationSet& prep_rotations,
    const RotationSet& post_rotations, const Matrix& e_tomo) {
  const std::size_t np = prep_rotations.size();
  if (data.preps.size() != np)
    throw ValidationError("instrument dataset preparation count mismatch");

  // Stage 1: per-(preparation, outcome) state fits, weighted by the
  // observed outcome probability.
  std::vector<Matrix> rho_p(np);
  std::vector<std::array<Matrix, 2>> w(np);
  const Matrix ground = ground_projector();
  for (std::size_t p = 0; p < np; ++p) {
    const auto& block = data.preps[p];
    const Matrix& u = prep_rotations.unitaries()[prep_rotations.index_of(
        block.prep_label)];
    rho_p[p] = u * ground * u.adjoint();
    for (int b = 0; b < 2; ++b) {
      const double q = block.outcome_probability[b];
      if (q < 1e-9) {
        w[p][b] = Matrix::Zero(8, 8);
        continue;
      }
      w[p][b] =
          q * state_tomography(block.tomograms[b], post_rotations, e_tomo)
                  .rho;
    }
  }

  // Warm start: linear inversion of the branch action on the preparation
  // span, assembled into Choi form.
  std::array<Matrix, 2> choi{Matrix::Zero(64, 64), Matrix::Zero(64, 64)};
  {
    Matrix prep_mat(static_cast<Index>(np), 64);
    for (std::size_t p = 0; p < np; ++p)
      for (int r = 0; r < 8; ++r)
        for (int rp = 0; rp < 8; ++rp)
          prep_mat(static_cast<Index>(p), r * 8 + rp) = rho_p[p](r, rp);
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(prep_mat);
    if (cod.rank() < 64)
      throw ValidationError("preparation set does not span the input space");
    for (int b = 0; b < 2; ++b) {
      Matrix rhs(static_cast<Index>(np), 64);
      for (std::size_t p = 0; p < np; ++p)
        for (int i = 0; i < 8; ++i)
          for (int j = 0; j < 8; ++j)
            rhs(static_cast<Index>(p), i * 8 + j) = w[p][b](i, j);
      const Matrix table = cod.solve(rhs);  // row (r, rp) -> vec F(e_rr')
      for (int r = 0; r < 8; ++r)
        for (int rp = 0; rp < 8; ++rp)
          for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j)
              choi[b](i * 8 + r, j * 8 + rp) = table(r * 8 + rp, i * 8 + j);
      choi[b] = hermitize(choi[b]);
    }
  }

  // Stage 2: accelerated projected gradient on the Choi pair.
  SolverOptions opts;
  double lip = 0.0;
  for (std::size_t p = 0; p < np; ++p) lip += 2.0;  // pure states: |rho|=1
  const double step = 1.0 / lip;

  auto gradient = [&](const std::array<Matrix, 2>& c) {
    std::array<Matrix, 2> g{Matrix::Zero(64, 64), Matrix::Zero(64, 64)};
    for (std::size_t p = 0; p < np; ++p) {
      const Matrix rc = rho_p[p].conjugate();
      for (int b = 0; b < 2; ++b)
        g[b] += kron(apply_choi(c[b], rho_p[p]) - w[p][b], rc);
    }
    return g;
  };
  auto residual = [&](const std::array<Matrix, 2>& c) {
    double r2 = 0.0;
    for (std::size_t p = 0; p < np; ++p)
      for (int b = 0; b < 2; ++b)
        r2 += (apply_choi(c[b], rho_p[p]) - w[p][b]).squaredNorm();
    return std::sqrt(r2);
  };

  project_choi_pair(choi);
  std::array<Matrix, 2> y = choi, prev = choi;
  double t = 1.0;
  FitDiagnostics diag;
  for (long it = 1; it <= opts.max_iterations; ++it) {
    auto g = gradient(y);
    std::array<Matrix, 2> next{y[0] - 2.0 * step * g[0],
                               y[1] - 2.0 * step * g[1]};
    project_choi_pair(next);
    const double t_new = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    for (int b = 0; b < 2; ++b)
      y[b] = next[b] + ((t - 1.0) / t_new) * (next[b] - prev[b]);
    prev = next;
    choi = next;
    t = t_new;

    auto gx = gradient(choi);
    std::array<Matrix, 2> probe{choi[0] - 2.0 * step * gx[0],
                                choi[1] - 2.0 * step * gx[1]};
    project_choi_pair(probe);
    double kkt = 0.0;
    for (int b = 0; b < 2; ++b)
      kkt += (choi[b] - probe[b]).squaredNorm();
    kkt = std::sqrt(kkt) / (2.0 * step);
    diag.kkt = kkt;
    diag.iterations = it;
    if (kkt <= opts.kkt_tol * lip) break;
    if (it == opts.max_iterations) {
      diag.converged = false;
      diag.residual = residual(choi);
      throw ConvergenceError("instrument fit: KKT residual " +
                             std::to_string(kkt) + " after iteration cap");
    }
  }
  diag.converged = true;
  diag.residual = residual(choi);

  std::vector<Channel> branches;
  Matrix gram = Matrix::Zero(8, 8);
  for (int b = 0; b < 2; ++b) {
    branches.emplace_back(kraus_from_choi(choi[b], 8, 8, 1e-7),
                          Channel::TraceBehavior::Unchecked);
    gram += branches.back().kraus_gram();
  }
  const double defect = (gram - Matrix::Identity(8, 8)).cwiseAbs().maxCoeff();
  return InstrumentTomographyResult{
      QuantumInstrument(std::move(branches), {"0", "1"},
                        std::max(1e-7, defect * (1.0 + 1e-9))),
      diag};
}

}  // namespace parityprobe
