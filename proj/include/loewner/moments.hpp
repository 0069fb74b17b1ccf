// Vector- and scalar-moment calculus along rays z = i*s*b into the
// bi-half-plane.
//
// With b_Y = b1*Y + b2*(I-Y) (positive definite for b in the open quadrant),
// the vector moments and their symmetrized square-root form are
//
//   R_k(b)  = (b_Y^{-1} A)^{k-1} b_Y^{-1} alpha,            k >= 1
//   X_b     = b_Y^{-1/2} A b_Y^{-1/2}        (Hermitian),
//   beta_k  = X_b^k        b_Y^{-1/2} alpha,                k >= 0
//
// linked by beta_{k-1} = b_Y^{1/2} R_k.  The scalar moments are
//
//   r_k(b) = < R_{ceil(k/2)}, A R_{floor(k/2)} >,  with  A R_0 := alpha,
//
// real by symmetry, and in square-root form
//
//   r_{2k-1}(b) = |beta_{k-1}|^2   (odd moments are nonnegative),
//   r_{2k}(b)   = < beta_{k-1}, X_b beta_{k-1} >.
//
// They are homogeneous of degree -k along rays: r_k(i s b) = (i s)^{-k} r_k(b).
// The exact finite telescoping identity behind every asymptotic expansion is
//
//   h(isb) + sum_{k=1}^{2N-1} (is)^{-k} r_k(b)
//       = (is)^{-2(N-1)} < [ (X_b - is)^{-1} + (is)^{-1} ] beta_{N-1}, beta_{N-1} >,
//
// and telescope_residual measures it through two independent routes (direct
// evaluation on the left, resolvent of X_b on the right).
//
// For an atomic measure (diagonal embedding, Y = I) everything collapses to
// power sums: r_k(b) = m_{k-1} / b1^k with m_j = sum w t^j.

#pragma once

#include "loewner/numkernel.hpp"
#include "loewner/representation.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace loewner {

inline constexpr double tol_real = 1e-10;
inline constexpr double tol_tel = 1e-9;

struct NotReal : std::domain_error {
  using std::domain_error::domain_error;
};

// Solve b_Y x = v through the Cholesky factorization (b_Y is Hermitian
// positive definite for any quadrant direction).
inline CVector weighted_inverse_apply(const TypeIRep& rep, const Direction& b, const CVector& v) {
  validate_direction(b);
  return weighted_matrix(rep, b).llt().solve(v);
}

// R_k(b) = (b_Y^{-1} A)^{k-1} b_Y^{-1} alpha.
inline CVector vector_moment(const TypeIRep& rep, const Direction& b, int k) {
  if (k < 1) throw std::invalid_argument("vector_moment: order must be >= 1");
  validate_direction(b);
  const Eigen::LLT<CMatrix> llt(weighted_matrix(rep, b));
  CVector x = llt.solve(rep.alpha);
  for (int j = 1; j < k; ++j) x = llt.solve(CVector(rep.A * x));
  return x;
}

// Square roots b_Y^{+1/2}, b_Y^{-1/2} via the spectral decomposition.
// Eigenvalues are floored at min(b1,b2)*(1 - 1e-12): the exact spectrum lies
// in [min(b1,b2), max(b1,b2)], so the floor only clips roundoff.
struct WeightedSqrt {
  CMatrix half;
  CMatrix inv_half;
};

inline WeightedSqrt weighted_sqrt(const TypeIRep& rep, const Direction& b) {
  validate_direction(b);
  const auto es = eig_hermitian(CMatrix(weighted_matrix(rep, b)));
  const double floor = std::min(b.b1, b.b2) * (1.0 - 1e-12);
  RVector vals = es.values.cwiseMax(floor);
  const RVector rt = vals.cwiseSqrt();
  WeightedSqrt out;
  out.half = es.vectors * rt.asDiagonal().toDenseMatrix().cast<Complex>() * es.vectors.adjoint();
  out.inv_half =
      es.vectors * rt.cwiseInverse().asDiagonal().toDenseMatrix().cast<Complex>() * es.vectors.adjoint();
  return out;
}

// X_b = b_Y^{-1/2} A b_Y^{-1/2}, symmetrized to kill roundoff defect.
inline CMatrix x_weighted(const TypeIRep& rep, const Direction& b) {
  const CMatrix ih = weighted_sqrt(rep, b).inv_half;
  CMatrix x = ih * rep.A * ih;
  return (x + x.adjoint()) / 2.0;
}

// beta_k(b) = X_b^k b_Y^{-1/2} alpha.
inline CVector beta(const TypeIRep& rep, const Direction& b, int k) {
  if (k < 0) throw std::invalid_argument("beta: index must be >= 0");
  const WeightedSqrt ws = weighted_sqrt(rep, b);
  const CMatrix x = x_weighted(rep, b);
  CVector v = ws.inv_half * rep.alpha;
  for (int j = 0; j < k; ++j) v = x * v;
  return v;
}

namespace detail {
inline double require_real(Complex v, const char* what) {
  if (std::abs(v.imag()) > tol_real * (1.0 + std::abs(v.real()))) {
    std::ostringstream msg;
    msg << what << ": imaginary defect " << v.imag() << " exceeds tolerance";
    throw NotReal(msg.str());
  }
  return v.real();
}
}  // namespace detail

// r_k(b) through the vector-moment route.
inline double scalar_moment(const TypeIRep& rep, const Direction& b, int k) {
  if (k < 1) throw std::invalid_argument("scalar_moment: order must be >= 1");
  const int hi = (k + 1) / 2;
  const int lo = k / 2;
  const CVector rhi = vector_moment(rep, b, hi);
  const CVector arl = lo == 0 ? rep.alpha : CVector(rep.A * vector_moment(rep, b, lo));
  return detail::require_real(pairing(rhi, arl), "scalar_moment");
}

// r_k(b) through the square-root route: |beta|^2 for odd k, <beta, X beta>
// for even k.  Independent of scalar_moment except for shared eigensolves.
inline double scalar_moment_sqrt(const TypeIRep& rep, const Direction& b, int k) {
  if (k < 1) throw std::invalid_argument("scalar_moment_sqrt: order must be >= 1");
  const int m = (k + 1) / 2;
  const CVector bm = beta(rep, b, m - 1);
  if (k % 2 == 1) return bm.squaredNorm();
  const CMatrix x = x_weighted(rep, b);
  return detail::require_real(pairing(CVector(x * bm), bm), "scalar_moment_sqrt");
}

// One moment with its health indicators: the imaginary defect discarded by
// the realness cast and the gap between the two independent routes.
struct ScalarMomentDiagnostics {
  double value = 0.0;
  double imag_defect = 0.0;
  double route_gap = 0.0;
};

inline ScalarMomentDiagnostics scalar_moment_diagnostics(const TypeIRep& rep, const Direction& b,
                                                         int k) {
  if (k < 1) throw std::invalid_argument("scalar_moment_diagnostics: order must be >= 1");
  const int hi = (k + 1) / 2;
  const int lo = k / 2;
  const CVector rhi = vector_moment(rep, b, hi);
  const CVector arl = lo == 0 ? rep.alpha : CVector(rep.A * vector_moment(rep, b, lo));
  const Complex raw = pairing(rhi, arl);
  ScalarMomentDiagnostics d;
  d.value = raw.real();
  d.imag_defect = std::abs(raw.imag());
  d.route_gap = std::abs(d.value - scalar_moment_sqrt(rep, b, k));
  return d;
}

// Power sums of an atomic measure: m_j = sum_a w_a t_a^j.
inline double power_sum(const DiscreteMeasure& m, int j) {
  double acc = 0.0;
  for (const auto& [t, w] : m.atoms) acc += w * std::pow(t, j);
  return acc;
}

// Measure specialization: r_k(b) = m_{k-1} / b1^k (only z1 enters).
inline double scalar_moment(const DiscreteMeasure& m, const Direction& b, int k) {
  if (k < 1) throw std::invalid_argument("scalar_moment: order must be >= 1");
  validate_direction(b);
  return power_sum(m, k - 1) / std::pow(b.b1, k);
}

inline CVector vector_moment(const DiscreteMeasure& m, const Direction& b, int k) {
  if (k < 1) throw std::invalid_argument("vector_moment: order must be >= 1");
  validate_direction(b);
  const Eigen::Index d = static_cast<Eigen::Index>(m.atoms.size());
  CVector v(d);
  for (Eigen::Index j = 0; j < d; ++j)
    v(j) = std::sqrt(m.atoms[j].second) * std::pow(m.atoms[j].first, k - 1) / std::pow(b.b1, k);
  return v;
}

// |LHS - RHS| of the exact telescoping identity at depth N and height s.
// The two sides share no intermediate quantities beyond the realization
// itself: LHS evaluates h directly, RHS goes through the resolvent of X_b.
inline double telescope_residual(const TypeIRep& rep, const Direction& b, double s, int N) {
  if (N < 1) throw std::invalid_argument("telescope_residual: depth must be >= 1");
  if (!(s > 0.0)) throw std::invalid_argument("telescope_residual: height must be positive");
  const Complex is(0.0, s);

  Complex lhs = evaluate(rep, Complex(0.0, s * b.b1), Complex(0.0, s * b.b2));
  Complex pw = 1.0;
  for (int k = 1; k <= 2 * N - 1; ++k) {
    pw /= is;
    lhs += pw * scalar_moment(rep, b, k);
  }

  const CVector bn = beta(rep, b, N - 1);
  const CMatrix x = x_weighted(rep, b);
  const Eigen::Index d = rep.dim();
  const CVector resolv =
      solve_shifted(CMatrix(x - is * CMatrix::Identity(d, d)), bn);
  const Complex rhs =
      std::pow(is, -2 * (N - 1)) * pairing(CVector(resolv + bn / is), bn);

  return std::abs(lhs - rhs);
}

// Convenience bundle for callers that also want the pass bound
// tol_tel * |h(isb)| + tol_tel.
struct TelescopeCheck {
  double residual = 0.0;
  double bound = 0.0;
  bool pass = false;
};

inline TelescopeCheck telescope_check(const TypeIRep& rep, const Direction& b, double s, int N) {
  TelescopeCheck out;
  out.residual = telescope_residual(rep, b, s, N);
  const Complex h = evaluate(rep, Complex(0.0, s * b.b1), Complex(0.0, s * b.b2));
  out.bound = tol_tel * std::abs(h) + tol_tel;
  out.pass = out.residual <= out.bound;
  return out;
}

}  // namespace loewner
