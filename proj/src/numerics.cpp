#include "nhdkr/numerics.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nhdkr/errors.hpp"

namespace nhdkr::numerics {
namespace {

lapack_complex_double* as_lapack(cplx* p) {
  return reinterpret_cast<lapack_complex_double*>(p);
}

void require_square(const ComplexMatrix& a, const char* who) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw DimensionMismatch(std::string(who) + ": expected a non-empty square matrix, got " +
                            std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

}  // namespace

double hermiticity_defect(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

double eigen_residual(const ComplexMatrix& a, const ComplexMatrix& vectors,
                      const ComplexVector& values) {
  const double scale = std::max(a.norm(), std::numeric_limits<double>::min());
  const ComplexMatrix r = a * vectors - vectors * values.asDiagonal();
  return r.colwise().norm().maxCoeff() / scale;
}

bool all_finite(const ComplexMatrix& a) {
  return a.allFinite();
}

HermitianEigenDecomposition hermitian_eig(const ComplexMatrix& a, double tol) {
  require_square(a, "hermitian_eig");
  if (!all_finite(a)) throw InvalidParams("hermitian_eig: non-finite entries");
  const double defect = hermiticity_defect(a);
  if (defect > tol) {
    throw NonHermitianInput("hermitian_eig: |A - A^dagger| = " + std::to_string(defect) +
                            " exceeds tolerance");
  }

  const auto n = static_cast<lapack_int>(a.rows());
  // Symmetrize so that the tolerated defect does not leak into the driver.
  ComplexMatrix work = 0.5 * (a + a.adjoint());
  Eigen::VectorXd w(n);
  const lapack_int info =
      LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'U', n, as_lapack(work.data()), n, w.data());
  if (info != 0) {
    throw ConvergenceFailure("hermitian_eig: zheevd failed with info = " + std::to_string(info));
  }

  HermitianEigenDecomposition out;
  out.eigenvalues = std::move(w);
  out.eigenvectors = std::move(work);
  out.residual = eigen_residual(a, out.eigenvectors, out.eigenvalues.cast<cplx>());
  return out;
}

EigenDecomposition general_eig(const ComplexMatrix& a, double /*tol*/) {
  require_square(a, "general_eig");
  if (!all_finite(a)) throw InvalidParams("general_eig: non-finite entries");

  const auto n = static_cast<lapack_int>(a.rows());
  ComplexMatrix work = a;
  ComplexVector w(n);
  ComplexMatrix vr(n, n);
  const lapack_int info =
      LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', n, as_lapack(work.data()), n, as_lapack(w.data()),
                    nullptr, 1, as_lapack(vr.data()), n);
  if (info != 0) {
    throw ConvergenceFailure("general_eig: zgeev failed with info = " + std::to_string(info));
  }
  // zgeev already normalizes, but a defective block can leave tiny columns.
  for (Eigen::Index j = 0; j < vr.cols(); ++j) {
    const double nrm = vr.col(j).norm();
    if (nrm > 0.0) vr.col(j) /= nrm;
  }

  EigenDecomposition out;
  out.eigenvalues = std::move(w);
  out.right_eigenvectors = std::move(vr);
  out.residual = eigen_residual(a, out.right_eigenvectors, out.eigenvalues);
  return out;
}

ComplexMatrix exp_scaled_hermitian(const ComplexMatrix& h, cplx c, double tol) {
  const auto eig = hermitian_eig(h, tol);
  ComplexVector phases(eig.eigenvalues.size());
  for (Eigen::Index k = 0; k < phases.size(); ++k) phases[k] = std::exp(c * eig.eigenvalues[k]);
  return eig.eigenvectors * phases.asDiagonal() * eig.eigenvectors.adjoint();
}

}  // namespace nhdkr::numerics
