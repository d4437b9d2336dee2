#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#ifndef lapack_complex_float
#define lapack_complex_float std::complex<float>
#endif
#ifndef lapack_complex_double
#define lapack_complex_double std::complex<double>
#endif
#include <lapacke.h>

#include "floqopt/errors.hpp"

// Thin wrappers over the LAPACK Hermitian eigensolvers. Matrices are taken
// by value because LAPACK overwrites its input.
namespace floqopt::lapack {

struct HermitianEigen {
  Eigen::VectorXd values;    // ascending
  Eigen::MatrixXcd vectors;  // column j pairs with values[j]
};

struct SymmetricEigen {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

inline void check_info(lapack_int info, const char* routine) {
  if (info != 0) {
    throw NumericalError(std::string(routine) + " failed (info=" + std::to_string(info) + ")");
  }
}

/// Full eigendecomposition (divide and conquer).
inline HermitianEigen eigh(Eigen::MatrixXcd a) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  HermitianEigen out;
  out.values.resize(n);
  check_info(LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n, a.data(), n, out.values.data()),
             "zheevd");
  out.vectors = std::move(a);
  return out;
}

/// Eigenpairs with eigenvalues in (lo, hi].
inline SymmetricEigen eigh_range(Eigen::MatrixXd a, double lo, double hi) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  Eigen::VectorXd w(n);
  Eigen::MatrixXd z(n, n);
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
  lapack_int found = 0;
  check_info(LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'V', 'L', n, a.data(), n, lo, hi, 0, 0, 0.0,
                            &found, w.data(), z.data(), n, support.data()),
             "dsyevr");
  return {w.head(found), z.leftCols(found)};
}

inline HermitianEigen eigh_range(Eigen::MatrixXcd a, double lo, double hi) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  Eigen::VectorXd w(n);
  Eigen::MatrixXcd z(n, n);
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
  lapack_int found = 0;
  check_info(LAPACKE_zheevr(LAPACK_COL_MAJOR, 'V', 'V', 'L', n, a.data(), n, lo, hi, 0, 0, 0.0,
                            &found, w.data(), z.data(), n, support.data()),
             "zheevr");
  return {w.head(found), z.leftCols(found)};
}

}  // namespace floqopt::lapack
