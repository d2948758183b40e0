#pragma once

#include <complex>

#include <Eigen/Dense>

namespace nhdkr {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

namespace numerics {

inline constexpr double kDefaultTol = 1e-10;

struct HermitianEigenDecomposition {
  Eigen::VectorXd eigenvalues;      // ascending
  ComplexMatrix eigenvectors;       // orthonormal columns
  double residual = 0.0;            // max_j |A v_j - lambda_j v_j| / |A|
};

struct EigenDecomposition {
  ComplexVector eigenvalues;
  ComplexMatrix right_eigenvectors;  // unit-norm columns
  double residual = 0.0;
};

/// Largest entry of |A - A^dagger|.
double hermiticity_defect(const ComplexMatrix& a);

/// Max column norm of A V - V diag(lambda), relative to the Frobenius norm of A.
double eigen_residual(const ComplexMatrix& a, const ComplexMatrix& vectors,
                      const ComplexVector& values);

bool all_finite(const ComplexMatrix& a);

/// Eigendecomposition of a Hermitian matrix (LAPACK zheevd).
///
/// Throws NonHermitianInput when max|A - A^dagger| > tol, DimensionMismatch for
/// non-square input and ConvergenceFailure when the driver reports failure.
HermitianEigenDecomposition hermitian_eig(const ComplexMatrix& a,
                                          double tol = kDefaultTol);

/// Right eigenpairs of a general complex matrix (LAPACK zgeev: Hessenberg
/// reduction plus shifted QR).
///
/// Defective or nearly defective matrices are not rejected; the residual field
/// reports how well A v = lambda v holds so callers can filter.
EigenDecomposition general_eig(const ComplexMatrix& a, double tol = kDefaultTol);

/// e^{c H} for Hermitian H and complex scalar c, via V diag(e^{c lambda}) V^dagger.
ComplexMatrix exp_scaled_hermitian(const ComplexMatrix& h, cplx c,
                                   double tol = kDefaultTol);

}  // namespace numerics
}  // namespace nhdkr
