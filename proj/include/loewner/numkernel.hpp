// Dense complex linear-algebra kernel shared by every layer above it.
//
// Everything is built on Eigen dense types templated on the real scalar.
// Three operations are exposed:
//
//   solve_shifted      x = M^{-1} rhs via column-pivoted elimination, with an
//                      explicit pivot floor so near-singular shifts surface as
//                      SingularMatrix instead of silent garbage.
//   eig_hermitian      full eigendecomposition of a Hermitian matrix, with a
//                      symmetry precheck (NotHermitian carries the defect).
//   hermitian_defect   max-norm distance from a matrix to its adjoint.
//
// The sesquilinear pairing used throughout is linear in the FIRST slot:
//   pairing(x, y) = sum_j x_j * conj(y_j).

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

namespace loewner {

template <typename Scalar>
using CMatrixT = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using CVectorT = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;
template <typename Scalar>
using RVectorT = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Complex = std::complex<double>;
using CMatrix = CMatrixT<double>;
using CVector = CVectorT<double>;
using RVector = RVectorT<double>;

// Default tolerances for the kernel operations.  tol_herm scales with the
// matrix magnitude; the others are absolute on normalized quantities.
inline constexpr double tol_solve = 1e-12;
inline constexpr double tol_eig = 1e-10;
inline constexpr double tol_herm_base = 1e-12;

struct SingularMatrix : std::domain_error {
  using std::domain_error::domain_error;
};
struct NotHermitian : std::domain_error {
  using std::domain_error::domain_error;
};

// pairing(x, y) = <x, y> = sum_j x_j conj(y_j); linear in x, antilinear in y.
// Eigen's dot() conjugates its *object*, so the arguments swap.
template <typename DX, typename DY>
auto pairing(const Eigen::MatrixBase<DX>& x, const Eigen::MatrixBase<DY>& y) {
  return y.dot(x);
}

// Max-norm distance to the adjoint: 0 exactly iff the matrix is Hermitian.
template <typename Derived>
double hermitian_defect(const Eigen::MatrixBase<Derived>& m) {
  return (m.derived() - m.derived().adjoint()).cwiseAbs().maxCoeff();
}

inline double tol_herm(double scale) { return tol_herm_base * (1.0 + scale); }

// Solve M x = rhs by LU with partial (column-wise max) pivoting.  A pivot
// smaller than max(1e-300, |M|_max * 1e-20) means the shift sits on (or
// numerically on) the spectrum, which callers treat as an input violation.
template <typename Scalar>
CVectorT<Scalar> solve_shifted(const CMatrixT<Scalar>& m, const CVectorT<Scalar>& rhs) {
  if (m.rows() != m.cols() || m.rows() != rhs.size())
    throw std::invalid_argument("solve_shifted: matrix must be square and match rhs length");
  Eigen::PartialPivLU<CMatrixT<Scalar>> lu(m);
  const Scalar scale = m.cwiseAbs().maxCoeff();
  const Scalar floor = std::max(Scalar(1e-300), scale * Scalar(1e-20));
  const Scalar min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (!(min_pivot >= floor)) {
    std::ostringstream msg;
    msg << "solve_shifted: pivot " << min_pivot << " below floor " << floor
        << "; shift lies on the spectrum";
    throw SingularMatrix(msg.str());
  }
  return lu.solve(rhs);
}

template <typename Scalar>
struct HermitianEigenT {
  RVectorT<Scalar> values;   // ascending
  CMatrixT<Scalar> vectors;  // unitary, columns aligned with values
};
using HermitianEigen = HermitianEigenT<double>;

// Eigendecomposition with a symmetry gate: refuses matrices whose Hermitian
// defect exceeds tol_herm(|M|_max).  The input is symmetrized exactly before
// factorization so roundoff-level defects cannot leak into the spectrum.
template <typename Scalar>
HermitianEigenT<Scalar> eig_hermitian(const CMatrixT<Scalar>& m) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("eig_hermitian: matrix must be square");
  const Scalar defect = hermitian_defect(m);
  const Scalar scale = m.size() > 0 ? m.cwiseAbs().maxCoeff() : Scalar(0);
  if (defect > tol_herm_base * (Scalar(1) + scale)) {
    std::ostringstream msg;
    msg << "eig_hermitian: matrix is not Hermitian (defect " << defect << ")";
    throw NotHermitian(msg.str());
  }
  CMatrixT<Scalar> sym = (m + m.adjoint()) / Scalar(2);
  Eigen::SelfAdjointEigenSolver<CMatrixT<Scalar>> es(sym);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eig_hermitian: eigensolver failed to converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

}  // namespace loewner
