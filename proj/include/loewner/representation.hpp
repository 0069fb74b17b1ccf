// Finite-dimensional structured realizations of two-variable Pick functions
// (holomorphic maps of the upper bi-half-plane with nonnegative imaginary
// part), together with atomic measures on the line as the commutative
// special case.
//
// A realization is a triple (A, Y, alpha): A Hermitian, Y a positive
// contraction (0 <= Y <= I), alpha a vector.  The function it realizes is
//
//   h(z1, z2) = < (A - z_Y)^{-1} alpha, alpha >,   z_Y = z1*Y + z2*(I - Y),
//
// which is well defined for Im z1, Im z2 > 0 because Im z_Y is then positive
// definite.  A measure sum_j w_j * delta_{t_j} embeds as the diagonal
// realization A = diag(t), Y = I, alpha_j = sqrt(w_j), realizing the one-
// variable Cauchy transform h(z1, z2) = sum_j w_j / (t_j - z1).
//
// The imaginary part of h admits the certificate
//
//   Im h(z) = < Im(z_Y) u, u >,   u = (A - z_Y)^{-1} alpha,
//
// manifestly nonnegative on the bi-half-plane; pick_certificate evaluates the
// worst case over a sample set.

#pragma once

#include "loewner/numkernel.hpp"

#include <cmath>
#include <limits>
#include <span>
#include <sstream>
#include <utility>
#include <vector>

namespace loewner {

inline constexpr double tol_pick = 1e-10;

// A direction in the open positive quadrant; rays enter the bi-half-plane as
// z = i*s*(b1, b2), s > 0.
struct Direction {
  double b1 = 1.0;
  double b2 = 1.0;
};

inline void validate_direction(const Direction& b) {
  if (!(b.b1 > 0.0) || !(b.b2 > 0.0) || !std::isfinite(b.b1) || !std::isfinite(b.b2))
    throw std::invalid_argument("Direction: both components must be finite and positive");
}

inline Direction normalized(const Direction& b) {
  validate_direction(b);
  const double s = b.b1 + b.b2;
  return {b.b1 / s, b.b2 / s};
}

// Aperture of the ray through b relative to the diagonal: |b| / min(b1, b2).
inline double aperture_of(const Direction& b) {
  validate_direction(b);
  return std::hypot(b.b1, b.b2) / std::min(b.b1, b.b2);
}

struct HalfPlanePoint2 {
  Complex z1{0.0, 1.0};
  Complex z2{0.0, 1.0};
};

inline void validate_half_plane(const HalfPlanePoint2& z) {
  if (!(z.z1.imag() > 0.0) || !(z.z2.imag() > 0.0))
    throw std::invalid_argument("HalfPlanePoint2: both coordinates must have Im > 0");
}

// Purely atomic measure on the real line: (position, weight) pairs.
struct DiscreteMeasure {
  std::vector<std::pair<double, double>> atoms;
};

inline void validate_measure(const DiscreteMeasure& m) {
  for (const auto& [t, w] : m.atoms) {
    if (!std::isfinite(t)) throw std::invalid_argument("DiscreteMeasure: atom positions must be finite");
    if (!(w >= 0.0) || !std::isfinite(w))
      throw std::invalid_argument("DiscreteMeasure: atom weights must be finite and nonnegative");
  }
}

// Structured realization (A, Y, alpha).
struct TypeIRep {
  CMatrix A;
  CMatrix Y;
  CVector alpha;

  Eigen::Index dim() const { return A.rows(); }
};

// Validates the three structural invariants; diagnostics name the violated
// one so loaders can forward them verbatim.
inline void validate(const TypeIRep& rep) {
  const Eigen::Index d = rep.A.rows();
  if (d < 1) throw std::invalid_argument("TypeIRep: dimension must be at least 1");
  if (rep.A.cols() != d || rep.Y.rows() != d || rep.Y.cols() != d || rep.alpha.size() != d)
    throw std::invalid_argument("TypeIRep: A, Y, alpha dimensions must agree");
  if (!rep.A.allFinite() || !rep.Y.allFinite() || !rep.alpha.allFinite())
    throw std::invalid_argument("TypeIRep: entries must be finite");
  const double da = hermitian_defect(rep.A);
  if (da > tol_herm(rep.A.cwiseAbs().maxCoeff())) {
    std::ostringstream msg;
    msg << "TypeIRep: A must be Hermitian (defect " << da << ")";
    throw std::invalid_argument(msg.str());
  }
  const double dy = hermitian_defect(rep.Y);
  if (dy > tol_herm(rep.Y.cwiseAbs().maxCoeff())) {
    std::ostringstream msg;
    msg << "TypeIRep: Y must be Hermitian (defect " << dy << ")";
    throw std::invalid_argument(msg.str());
  }
  const auto ey = eig_hermitian(rep.Y);
  const double lo = ey.values.minCoeff();
  const double hi = ey.values.maxCoeff();
  if (lo < -tol_eig || hi > 1.0 + tol_eig) {
    std::ostringstream msg;
    msg << "TypeIRep: Y must be a positive contraction (eigenvalues in [" << lo << ", " << hi
        << "])";
    throw std::invalid_argument(msg.str());
  }
}

// z_Y = z1*Y + z2*(I - Y).
inline CMatrix z_weighted(const TypeIRep& rep, Complex z1, Complex z2) {
  const Eigen::Index d = rep.dim();
  return z1 * rep.Y + z2 * (CMatrix::Identity(d, d) - rep.Y);
}

// b_Y = b1*Y + b2*(I - Y) for a real direction; Hermitian with spectrum in
// [min(b1,b2), max(b1,b2)], hence positive definite.
inline CMatrix weighted_matrix(const TypeIRep& rep, const Direction& b) {
  return z_weighted(rep, Complex(b.b1, 0.0), Complex(b.b2, 0.0));
}

// h(z) = <(A - z_Y)^{-1} alpha, alpha>.  For exact bi-half-plane inputs the
// resolvent exists; a SingularMatrix escaping from here signals an input that
// violated that precondition.
inline Complex evaluate(const TypeIRep& rep, const HalfPlanePoint2& z) {
  const CMatrix m = rep.A - z_weighted(rep, z.z1, z.z2);
  const CVector u = solve_shifted(m, rep.alpha);
  return pairing(u, rep.alpha);
}

inline Complex evaluate(const TypeIRep& rep, Complex z1, Complex z2) {
  return evaluate(rep, HalfPlanePoint2{z1, z2});
}

// Diagonal embedding of an atomic measure: Cauchy transform in z1 only.
inline TypeIRep from_discrete_measure(const DiscreteMeasure& m) {
  validate_measure(m);
  const Eigen::Index d = static_cast<Eigen::Index>(m.atoms.size());
  if (d < 1) throw std::invalid_argument("DiscreteMeasure: at least one atom required");
  TypeIRep rep;
  rep.A = CMatrix::Zero(d, d);
  rep.Y = CMatrix::Identity(d, d);
  rep.alpha = CVector::Zero(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    rep.A(j, j) = m.atoms[j].first;
    rep.alpha(j) = std::sqrt(m.atoms[j].second);
  }
  return rep;
}

// Block-diagonal direct sum: realizes the sum of the two functions.
inline TypeIRep direct_sum(const TypeIRep& a, const TypeIRep& b) {
  const Eigen::Index da = a.dim(), db = b.dim();
  TypeIRep out;
  out.A = CMatrix::Zero(da + db, da + db);
  out.Y = CMatrix::Zero(da + db, da + db);
  out.alpha = CVector(da + db);
  out.A.topLeftCorner(da, da) = a.A;
  out.A.bottomRightCorner(db, db) = b.A;
  out.Y.topLeftCorner(da, da) = a.Y;
  out.Y.bottomRightCorner(db, db) = b.Y;
  out.alpha.head(da) = a.alpha;
  out.alpha.tail(db) = b.alpha;
  return out;
}

// Direct evaluation of the measure's Cauchy transform (no linear algebra).
inline Complex evaluate(const DiscreteMeasure& m, const HalfPlanePoint2& z) {
  Complex acc = 0.0;
  for (const auto& [t, w] : m.atoms) acc += w / (Complex(t, 0.0) - z.z1);
  return acc;
}

// Im h at one point through the resolvent identity; exact up to solve error.
inline double imag_part_certificate(const TypeIRep& rep, const HalfPlanePoint2& z) {
  const CMatrix zy = z_weighted(rep, z.z1, z.z2);
  const CVector u = solve_shifted(CMatrix(rep.A - zy), rep.alpha);
  const CMatrix im_zy = (zy - zy.adjoint()) / Complex(0.0, 2.0);
  return pairing(CVector(im_zy * u), u).real();
}

// Worst-case Im h over a sample set; nonnegative (within tol_pick) for every
// valid realization.
inline double pick_certificate(const TypeIRep& rep, std::span<const HalfPlanePoint2> samples) {
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& z : samples) {
    validate_half_plane(z);
    worst = std::min(worst, imag_part_certificate(rep, z));
  }
  return worst;
}

}  // namespace loewner
