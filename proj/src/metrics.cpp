#include "parityprobe/metrics/metrics.hpp"

#include "parityprobe/linalg.hpp"
#include "parityprobe/rng.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>

namespace parityprobe {

namespace {

constexpr double kProbFloor = 1e-14;

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

// ---- sphere optimizer ------------------------------------------------

struct SphereRun {
  double value = 0.0;
  Vector state;
  long iterations = 0;
  bool converged = false;
};

// Projected gradient descent on the unit sphere with backtracking.
// Minimizes `value`; pass negated objectives to maximize.
SphereRun sphere_descent(
    Index dim, std::mt19937_64& gen,
    const std::function<double(const Vector&)>& value,
    const std::function<Vector(const Vector&)>& gradient, long max_iterations,
    double grad_tol) {
  Vector psi = haar_state(dim, gen);
  double f = value(psi);
  double eta = 0.1;
  SphereRun run;
  for (long it = 1; it <= max_iterations; ++it) {
    run.iterations = it;
    Vector g = gradient(psi);
    Vector gt = g - (psi.dot(g)) * psi;  // tangent component
    const double gn = gt.norm();
    if (gn < grad_tol * std::max(1.0, std::abs(f))) {
      run.converged = true;
      break;
    }
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      Vector trial = (psi - eta * gt).normalized();
      const double ft = value(trial);
      if (ft < f - 0.25 * eta * gn * gn) {
        psi = trial;
        f = ft;
        eta *= 1.8;
        accepted = true;
        break;
      }
      eta *= 0.5;
    }
    if (!accepted) {
      run.converged = true;  // no descent direction at line-search floor
      break;
    }
  }
  run.value = f;
  run.state = psi;
  return run;
}

SMeasureResult multistart(
    Index dim, const OptimizerOptions& opts, bool maximize,
    const std::function<double(const Vector&)>& value,
    const std::function<Vector(const Vector&)>& gradient) {
  const double sign = maximize ? -1.0 : 1.0;
  auto val = [&](const Vector& v) { return sign * value(v); };
  auto grad = [&](const Vector& v) { return Vector(sign * gradient(v)); };

  std::vector<SphereRun> runs;
  long total_it = 0;
  for (int r = 0; r < opts.restarts; ++r) {
    auto gen = seeded_engine(opts.seed, static_cast<std::uint64_t>(r));
    runs.push_back(sphere_descent(dim, gen, val, grad, opts.max_iterations,
                                  opts.grad_tol));
    total_it += runs.back().iterations;
  }
  std::sort(runs.begin(), runs.end(),
            [](const SphereRun& a, const SphereRun& b) {
              return a.value < b.value;
            });
  SMeasureResult res;
  res.value = sign * runs.front().value;
  res.state = runs.front().state;
  res.restarts = opts.restarts;
  res.iterations = total_it;
  const std::size_t k = std::min<std::size_t>(3, runs.size());
  res.best3_spread = runs[k - 1].value - runs[0].value;
  res.converged =
      runs.front().converged && res.best3_spread <= opts.agreement_tol;
  return res;
}

RealVector outcome_probs(const Povm& p, const Vector& psi) {
  const Index d = p.dim();
  if (psi.size() == d) {
    RealVector out(static_cast<Index>(p.num_outcomes()));
    for (std::size_t i = 0; i < p.num_outcomes(); ++i)
      out(static_cast<Index>(i)) =
          std::max(0.0, (psi.adjoint() * p.effect(i) * psi)(0, 0).real());
    return out;
  }
  // System (x) reference state: probabilities depend only on the reduced
  // system state.
  const Index dref = psi.size() / d;
  Eigen::Map<const Matrix> m(psi.data(), dref, d);  // m(ref, sys), column-major
  const Matrix rho = m.transpose() * m.conjugate();
  RealVector out(static_cast<Index>(p.num_outcomes()));
  for (std::size_t i = 0; i < p.num_outcomes(); ++i)
    out(static_cast<Index>(i)) =
        std::max(0.0, (p.effect(i) * rho).trace().real());
  return out;
}

// ---- instrument helpers ----------------------------------------------

// psi in C^{d*d} interpreted as a d x d matrix Psi with psi[(r, s)] =
// Psi(r, s), index (r s) = r * d + s; (K (x) I) psi = vec(K Psi).
Matrix psi_matrix(const Vector& psi, Index d) {
  Matrix m(d, d);
  for (Index r = 0; r < d; ++r)
    for (Index s = 0; s < d; ++s) m(r, s) = psi(r * d + s);
  return m;
}

Vector vec_rowmajor(const Matrix& m) {
  const Index d = m.rows();
  Vector v(d * d);
  for (Index r = 0; r < d; ++r)
    for (Index s = 0; s < d; ++s) v(r * d + s) = m(r, s);
  return v;
}

// Columns vec(K_m Psi) for all Kraus operators of a branch: a low-rank
// factor of the branch output (F (x) id)(|psi><psi|), in the same row-major
// vectorization as psi_matrix.
Matrix branch_factor(const Channel& branch, const Matrix& psi_mat) {
  const Index d = branch.dim_in();
  const Index cols = static_cast<Index>(branch.kraus().size());
  Matrix x(d * d, cols);
  for (Index m = 0; m < cols; ++m)
    x.col(m) = vec_rowmajor(branch.kraus()[static_cast<std::size_t>(m)] *
                            psi_mat);
  return x;
}

double qi_root_fidelity(const QuantumInstrument& q1,
                        const QuantumInstrument& q2, const Matrix& psi_mat) {
  double f = 0.0;
  for (std::size_t b = 0; b < q1.num_outcomes(); ++b)
    f += root_fidelity_factored(branch_factor(q1.branch(b), psi_mat),
                                branch_factor(q2.branch(b), psi_mat));
  return f;
}

// Euclidean gradient of sum_b ||X_b^dag Y_b||_* with respect to conj(Psi).
Matrix qi_root_fidelity_gradient(const QuantumInstrument& q1,
                                 const QuantumInstrument& q2,
                                 const Matrix& psi_mat) {
  const Index d = psi_mat.rows();
  Matrix grad = Matrix::Zero(d, d);
  for (std::size_t b = 0; b < q1.num_outcomes(); ++b) {
    const auto& ks = q1.branch(b).kraus();
    const auto& ls = q2.branch(b).kraus();
    const Matrix x = branch_factor(q1.branch(b), psi_mat);
    const Matrix y = branch_factor(q2.branch(b), psi_mat);
    Eigen::JacobiSVD<Matrix> svd(x.adjoint() * y,
                                 Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Matrix w = svd.matrixU() * svd.matrixV().adjoint();
    for (Index m = 0; m < static_cast<Index>(ks.size()); ++m)
      for (Index l = 0; l < static_cast<Index>(ls.size()); ++l) {
        const Complex wml = w(m, l);
        if (std::abs(wml) < 1e-15) continue;
        grad += std::conj(wml) *
                    (ks[static_cast<std::size_t>(m)].adjoint() *
                     ls[static_cast<std::size_t>(l)] * psi_mat) +
                wml * (ls[static_cast<std::size_t>(l)].adjoint() *
                       ks[static_cast<std::size_t>(m)] * psi_mat);
      }
  }
  return grad;
}

// (K (x) I) S and S (K (x) I) by block contraction.
Matrix kron_left(const Matrix& k, const Matrix& s) {
  const Index d = k.rows();
  Matrix out = Matrix::Zero(s.rows(), s.cols());
  for (Index r = 0; r < d; ++r)
    for (Index c = 0; c < k.cols(); ++c) {
      if (k(r, c) == Complex(0, 0)) continue;
      out.middleRows(r * d, d) += k(r, c) * s.middleRows(c * d, d);
    }
  return out;
}

Matrix kron_right(const Matrix& s, const Matrix& k) {
  const Index d = k.rows();
  Matrix out = Matrix::Zero(s.rows(), s.cols());
  for (Index r = 0; r < d; ++r)
    for (Index c = 0; c < k.cols(); ++c) {
      if (k(r, c) == Complex(0, 0)) continue;
      out.middleCols(c * d, d) += k(r, c) * s.middleCols(r * d, d);
    }
  return out;
}

double qi_trace_distance(const QuantumInstrument& q1,
                         const QuantumInstrument& q2, const Matrix& psi_mat,
                         std::vector<Matrix>* deltas = nullptr) {
  double dist = 0.0;
  for (std::size_t b = 0; b < q1.num_outcomes(); ++b) {
    const Matrix x = branch_factor(q1.branch(b), psi_mat);
    const Matrix y = branch_factor(q2.branch(b), psi_mat);
    const Matrix delta = x * x.adjoint() - y * y.adjoint();
    dist += 0.5 * hermitian_eigenvalues(delta).cwiseAbs().sum();
    if (deltas) deltas->push_back(delta);
  }
  return dist;
}

}  // namespace

// ---- assignment ---------------------------------------------------------

AssignmentFit assignment_fidelity(const std::vector<PreparationRecord>& records,
                                  const SubsetParitySpec& spec) {
  if (records.size() < 2)
    throw ValidationError("assignment fit needs at least two preparations");
  RealMatrix a(static_cast<Index>(records.size()), 2);
  RealVector m(static_cast<Index>(records.size()));
  for (std::size_t i = 0; i < records.size(); ++i) {
    double prod = 1.0;
    for (int k = 0; k < 3; ++k)
      if (spec.subset[k]) prod *= std::cos(records[i].angles[k]);
    a(static_cast<Index>(i), 0) = 1.0;
    a(static_cast<Index>(i), 1) = 0.5 * (1.0 - prod);
    m(static_cast<Index>(i)) = records[i].click_frequency;
  }
  const RealVector x = a.colPivHouseholderQr().solve(m);
  AssignmentFit fit;
  fit.offset = x(0);
  fit.contrast = x(1);
  fit.fidelity = 0.5 * (1.0 + fit.contrast) -
                 std::abs(fit.offset + 0.5 * fit.contrast - 0.5);
  return fit;
}

// ---- specificity ---------------------------------------------------------

SpecificityReport specificity(const Matrix& e, const PauliString& target) {
  const Index n = target.num_qubits();
  if (e.rows() != target.dim())
    throw DimensionError("effect and target dimensions differ");
  const double dim = static_cast<double>(target.dim());
  SpecificityReport rep;
  rep.c_i = e.trace().real() / dim;
  rep.c_t = (e * target.matrix()).trace().real() / dim;
  Matrix residual = e - rep.c_i * Matrix::Identity(e.rows(), e.cols()) -
                    rep.c_t * target.matrix();
  const RealVector coeffs = pauli_expand(hermitize(residual), n);
  rep.c_o = coeffs.norm();
  if (rep.c_o > 1e-12) {
    rep.sigma_o = residual / rep.c_o;
    rep.sigma_o_defined = true;
  }
  rep.c_max = std::hypot(rep.c_t, rep.c_o);
  rep.wrong_sign = rep.c_t <= 0.0;
  rep.theta_s_deg = std::atan2(rep.c_o, rep.c_t) * 180.0 / kPi;
  return rep;
}

Matrix SpecificityReport::sigma_max(const PauliString& target) const {
  if (c_max <= 1e-12)
    throw ValidationError("sigma_max undefined for vanishing c_max");
  Matrix m = c_t * target.matrix();
  if (sigma_o_defined) m += c_o * sigma_o;
  return m / c_max;
}

// ---- J-measures -----------------------------------------------------------

JMeasures j_measures(const Channel& ch1, const Channel& ch2) {
  if (ch1.dim_in() != ch2.dim_in() || ch1.dim_out() != ch2.dim_out())
    throw DimensionError("channel dimensions differ");
  const Matrix j1 = psd_clip(hermitize(jamiolkowski(ch1)), 1e-5);
  const Matrix j2 = psd_clip(hermitize(jamiolkowski(ch2)), 1e-5);
  return JMeasures{clamp01(trace_fidelity(j1, j2)), trace_distance(j1, j2)};
}

// ---- detector S-measures ---------------------------------------------------

double detector_fidelity_objective(const Povm& p1, const Povm& p2,
                                   const Vector& psi) {
  const RealVector p = outcome_probs(p1, psi);
  const RealVector q = outcome_probs(p2, psi);
  double f = 0.0;
  for (Index i = 0; i < p.size(); ++i) f += std::sqrt(p(i) * q(i));
  return clamp01(f * f);
}

double detector_distance_objective(const Povm& p1, const Povm& p2,
                                   const Vector& psi) {
  const RealVector p = outcome_probs(p1, psi);
  const RealVector q = outcome_probs(p2, psi);
  return 0.5 * (p - q).cwiseAbs().sum();
}

SMeasureResult detector_s_fidelity(const Povm& p1, const Povm& p2,
                                   OptimizerOptions opts) {
  if (p1.dim() != p2.dim() || p1.num_outcomes() != p2.num_outcomes())
    throw DimensionError("POVM shapes differ");
  auto value = [&](const Vector& psi) {
    return detector_fidelity_objective(p1, p2, psi);
  };
  auto gradient = [&](const Vector& psi) {
    RealVector p = outcome_probs(p1, psi);
    RealVector q = outcome_probs(p2, psi);
    double f = 0.0;
    Vector g = Vector::Zero(psi.size());
    for (std::size_t i = 0; i < p1.num_outcomes(); ++i) {
      const double pi = std::max(p(static_cast<Index>(i)), kProbFloor);
      const double qi = std::max(q(static_cast<Index>(i)), kProbFloor);
      f += std::sqrt(pi * qi);
      g += std::sqrt(qi / pi) * (p1.effect(i) * psi) +
           std::sqrt(pi / qi) * (p2.effect(i) * psi);
    }
    return Vector(2.0 * f * g);  // d(f^2) = 2 f df
  };
  return multistart(p1.dim(), opts, /*maximize=*/false, value, gradient);
}

SMeasureResult detector_s_distance(const Povm& p1, const Povm& p2,
                                   OptimizerOptions opts) {
  if (p1.dim() != p2.dim() || p1.num_outcomes() != p2.num_outcomes())
    throw DimensionError("POVM shapes differ");
  if (p1.num_outcomes() == 2 && !opts.force_iterative) {
    // Binary analytic path: the worst-case total variation equals the
    // largest-magnitude eigenvalue of the effect difference, achieved on a
    // product state.
    const Matrix delta = p1.first() - p2.first();
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(delta));
    Index best = 0;
    es.eigenvalues().cwiseAbs().maxCoeff(&best);
    SMeasureResult res;
    res.value = std::abs(es.eigenvalues()(best));
    res.state = es.eigenvectors().col(best);
    res.restarts = 0;
    res.converged = true;
    return res;
  }
  // Sign-fixing ascent for general outcome counts.
  SMeasureResult res;
  res.restarts = opts.restarts;
  std::vector<double> finals;
  for (int r = 0; r < res.restarts; ++r) {
    auto gen = seeded_engine(opts.seed, 1000 + static_cast<std::uint64_t>(r));
    Vector psi = haar_state(p1.dim(), gen);
    double prev = -1.0;
    for (long it = 0; it < 200; ++it) {
      ++res.iterations;
      const RealVector p = outcome_probs(p1, psi);
      const RealVector q = outcome_probs(p2, psi);
      Matrix m = Matrix::Zero(p1.dim(), p1.dim());
      for (std::size_t i = 0; i < p1.num_outcomes(); ++i) {
        const double s =
            (p(static_cast<Index>(i)) >= q(static_cast<Index>(i))) ? 0.5
                                                                   : -0.5;
        m += s * (p1.effect(i) - p2.effect(i));
      }
      Eigen::SelfAdjointEigenSolver<Matrix> es(m);
      psi = es.eigenvectors().col(p1.dim() - 1);
      const double v = detector_distance_objective(p1, p2, psi);
      if (v <= prev + 1e-14) break;
      prev = v;
    }
    const double v = detector_distance_objective(p1, p2, psi);
    if (v > res.value) {
      res.value = v;
      res.state = psi;
    }
    finals.push_back(v);
  }
  std::sort(finals.rbegin(), finals.rend());
  res.best3_spread = finals[0] - finals[std::min<std::size_t>(2, finals.size() - 1)];
  res.converged = res.best3_spread <= opts.agreement_tol;
  return res;
}

// ---- instrument S-measures --------------------------------------------------

double qi_fidelity_objective(const QuantumInstrument& q1,
                             const QuantumInstrument& q2, const Vector& psi) {
  const Matrix pm = psi_matrix(psi, q1.dim_in());
  const double f = qi_root_fidelity(q1, q2, pm);
  return clamp01(f * f);
}

double qi_distance_objective(const QuantumInstrument& q1,
                             const QuantumInstrument& q2, const Vector& psi) {
  return qi_trace_distance(q1, q2, psi_matrix(psi, q1.dim_in()));
}

SMeasureResult qi_s_fidelity(const QuantumInstrument& q1,
                             const QuantumInstrument& q2,
                             OptimizerOptions opts) {
  if (q1.dim_in() != q2.dim_in() || q1.num_outcomes() != q2.num_outcomes())
    throw DimensionError("instrument shapes differ");
  const Index d = q1.dim_in();
  auto value = [&](const Vector& psi) {
    return qi_fidelity_objective(q1, q2, psi);
  };
  auto gradient = [&](const Vector& psi) {
    const Matrix pm = psi_matrix(psi, d);
    const double f = qi_root_fidelity(q1, q2, pm);
    return Vector(2.0 * f * vec_rowmajor(qi_root_fidelity_gradient(q1, q2, pm)));
  };
  return multistart(d * d, opts, /*maximize=*/false, value, gradient);
}

SMeasureResult qi_s_distance(const QuantumInstrument& q1,
                             const QuantumInstrument& q2,
                             OptimizerOptions opts) {
  if (q1.dim_in() != q2.dim_in() || q1.num_outcomes() != q2.num_outcomes())
    throw DimensionError("instrument shapes differ");
  const Index d = q1.dim_in();
  SMeasureResult res;
  res.restarts = std::max(opts.restarts / 4, 1);
  std::vector<double> finals;
  for (int r = 0; r < res.restarts; ++r) {
    auto gen = seeded_engine(opts.seed, 2000 + static_cast<std::uint64_t>(r));
    Vector psi = haar_state(d * d, gen);
    double prev = -1.0;
    for (long it = 0; it < 100; ++it) {
      ++res.iterations;
      std::vector<Matrix> deltas;
      qi_trace_distance(q1, q2, psi_matrix(psi, d), &deltas);
      Matrix m = Matrix::Zero(d * d, d * d);
      for (std::size_t b = 0; b < deltas.size(); ++b) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(deltas[b]);
        Matrix s = Matrix::Zero(d * d, d * d);
        for (Index i = 0; i < d * d; ++i)
          s += (es.eigenvalues()(i) >= 0.0 ? 0.5 : -0.5) *
               es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
        for (const auto& k : q1.branch(b).kraus())
          m += kron_right(kron_left(k.adjoint(), s), k);
        for (const auto& k : q2.branch(b).kraus())
          m -= kron_right(kron_left(k.adjoint(), s), k);
      }
      Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(m));
      Vector cand = es.eigenvectors().col(d * d - 1);
      // The eigenvector is stored with index (r s) = r * d + s already
      // matching psi_matrix's row-major convention.
      const double v = qi_distance_objective(q1, q2, cand);
      if (v <= prev + 1e-14) break;
      psi = cand;
      prev = v;
    }
    const double v = qi_distance_objective(q1, q2, psi);
    if (v > res.value) {
      res.value = v;
      res.state = psi;
    }
    finals.push_back(v);
  }
  std::sort(finals.rbegin(), finals.rend());
  res.best3_spread =
      finals[0] - finals[std::min<std::size_t>(2, finals.size() - 1)];
  res.converged = res.best3_spread <= opts.agreement_tol;
  return res;
}

// ---- brute force -------------------------------------------------------------

double s_measure_bruteforce(const Povm& p1, const Povm& p2,
                            std::int64_t n_samples, std::uint64_t seed,
                            SMode mode, SSpace space) {
  if (n_samples < 1) throw ValidationError("n_samples must be >= 1");
  const Index dim =
      (space == SSpace::System) ? p1.dim() : p1.dim() * p1.dim();
  auto gen = seeded_engine(seed, 0);
  double best = (mode == SMode::Fidelity) ? 2.0 : -1.0;
  for (std::int64_t s = 0; s < n_samples; ++s) {
    const Vector psi = haar_state(dim, gen);
    const double v = (mode == SMode::Fidelity)
                         ? detector_fidelity_objective(p1, p2, psi)
                         : detector_distance_objective(p1, p2, psi);
    best = (mode == SMode::Fidelity) ? std::min(best, v) : std::max(best, v);
  }
  return best;
}

double s_measure_bruteforce(const QuantumInstrument& q1,
                            const QuantumInstrument& q2,
                            std::int64_t n_samples, std::uint64_t seed,
                            SMode mode) {
  if (n_samples < 1) throw ValidationError("n_samples must be >= 1");
  const Index dim = q1.dim_in() * q1.dim_in();
  auto gen = seeded_engine(seed, 0);
  double best = (mode == SMode::Fidelity) ? 2.0 : -1.0;
  for (std::int64_t s = 0; s < n_samples; ++s) {
    const Vector psi = haar_state(dim, gen);
    const double v = (mode == SMode::Fidelity)
                         ? qi_fidelity_objective(q1, q2, psi)
                         : qi_distance_objective(q1, q2, psi);
    best = (mode == SMode::Fidelity) ? std::min(best, v) : std::max(best, v);
  }
  return best;
}

}  // namespace parityprobe
