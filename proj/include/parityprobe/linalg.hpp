#pragma once

#include "parityprobe/types.hpp"

#include <vector>

namespace parityprobe {

/// Largest absolute deviation from Hermiticity, max |H - H^dag|.
double hermiticity_defect(const Matrix& h);

bool is_hermitian(const Matrix& h, double tol = kHermTol);

/// Symmetrize (H + H^dag)/2.
Matrix hermitize(const Matrix& h);

/// Eigenvalues of a Hermitian matrix, ascending.
RealVector hermitian_eigenvalues(const Matrix& h);

double min_eigenvalue(const Matrix& h);

/// Clip eigenvalues in [-tol, 0) to zero; eigenvalues below -tol throw.
Matrix psd_clip(const Matrix& h, double tol = kPsdTol);

/// Principal square root of a PSD Hermitian matrix via eigendecomposition,
/// with small negative eigenvalues clipped to zero.
Matrix sqrtm_psd(const Matrix& h, double tol = kPsdTol);

Matrix kron(const Matrix& a, const Matrix& b);

/// Trace out the second factor of a bipartite operator on C^{da} (x) C^{db}.
Matrix partial_trace_second(const Matrix& m, Index da, Index db);

/// Trace out the first factor.
Matrix partial_trace_first(const Matrix& m, Index da, Index db);

/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2. Inputs must be
/// Hermitian PSD; sub-normalized operators are allowed and compared as-is.
double trace_fidelity(const Matrix& rho, const Matrix& sigma);

/// Trace distance (1/2)||rho - sigma||_1.
double trace_distance(const Matrix& rho, const Matrix& sigma);

/// Nuclear norm ||M||_1 of an arbitrary matrix.
double nuclear_norm(const Matrix& m);

/// sqrt(F(rho, sigma)) = ||sqrt(rho) sqrt(sigma)||_1 computed from low-rank
/// factorizations rho = X X^dag, sigma = Y Y^dag. Only the small Gram matrix
/// X^dag Y is decomposed.
double root_fidelity_factored(const Matrix& x, const Matrix& y);

std::vector<Matrix> computational_basis_projectors(Index dim);

}  // namespace parityprobe
