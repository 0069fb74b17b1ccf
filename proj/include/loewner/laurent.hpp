// Homogeneous Laurent polynomials in two variables and least-squares
// recovery of their coefficients from samples over quadrant directions.
//
// A homogeneous Laurent polynomial of degree k is
//
//   L(b) = sum_{n1 + n2 = k, n1, n2 >= 0}  c_n * b1^{-n1} * b2^{-n2},
//
// the natural coefficient layer at order k of a ray expansion.  Moment data
// r_k(b) (scalar) or R_k(b) (vector) sampled over a direction panel either is
// such a polynomial — fit residual at roundoff — or is not, in which case the
// misfit is the detection signal.  The fit is therefore calibrated for
// *decision* quality:
//
//   * each row is scaled by the inverse sample magnitude (floored relative to
//     the largest sample), so the residual reads as "largest relative
//     deviation" and is comparable across wildly different row scales;
//   * columns are normalized before the column-pivoted QR solve, so the
//     monomials' huge dynamic range near the quadrant walls cannot poison the
//     conditioning;
//   * the reported relative_residual is the max-norm of the weighted misfit
//     over the max-norm of the weighted data.
//
// Sample panels come from chebyshev_directions, which clusters directions
// toward (but strictly inside) the quadrant walls where non-polynomial
// behavior is most visible.

#pragma once

#include "loewner/moments.hpp"
#include "loewner/numkernel.hpp"
#include "loewner/representation.hpp"

#include <cmath>
#include <map>
#include <span>
#include <tuple>
#include <utility>
#include <vector>

namespace loewner {

inline constexpr double tol_poly = 1e-8;
// Residuals at or above this are a firm "not a polynomial of this degree";
// the band (tol_poly, nonpoly_floor) is indeterminate.
inline constexpr double nonpoly_floor = 1e-3;

struct DegenerateDesign : std::domain_error {
  using std::domain_error::domain_error;
};

struct MultiIndex {
  int n1 = 0;
  int n2 = 0;
  int order() const { return n1 + n2; }
  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  friend bool operator<(const MultiIndex& a, const MultiIndex& b) {
    return std::tie(a.n1, a.n2) < std::tie(b.n1, b.n2);
  }
};

template <typename Coeff>
struct HomogeneousLaurentT {
  int degree = 0;
  std::map<MultiIndex, Coeff> coeffs;  // keys satisfy order() == degree
};
using HomogeneousLaurent = HomogeneousLaurentT<Complex>;
using VectorHomogeneousLaurent = HomogeneousLaurentT<CVector>;

inline Complex eval_laurent(const HomogeneousLaurent& L, Complex z1, Complex z2) {
  Complex acc = 0.0;
  for (const auto& [n, c] : L.coeffs)
    acc += c * std::pow(z1, -n.n1) * std::pow(z2, -n.n2);
  return acc;
}

inline CVector eval_laurent(const VectorHomogeneousLaurent& L, Complex z1, Complex z2) {
  if (L.coeffs.empty()) return CVector();
  CVector acc = CVector::Zero(L.coeffs.begin()->second.size());
  for (const auto& [n, c] : L.coeffs)
    acc += c * std::pow(z1, -n.n1) * std::pow(z2, -n.n2);
  return acc;
}

template <typename Coeff>
auto eval_laurent(const HomogeneousLaurentT<Coeff>& L, const Direction& b) {
  return eval_laurent(L, Complex(b.b1, 0.0), Complex(b.b2, 0.0));
}

// Largest coefficient magnitude and largest imaginary part, for reality
// checks on layers that must be real.
inline double max_abs_coeff(const HomogeneousLaurent& L) {
  double m = 0.0;
  for (const auto& [n, c] : L.coeffs) m = std::max(m, std::abs(c));
  return m;
}
inline double max_imag_coeff(const HomogeneousLaurent& L) {
  double m = 0.0;
  for (const auto& [n, c] : L.coeffs) m = std::max(m, std::abs(c.imag()));
  return m;
}
inline bool real_coefficients(const HomogeneousLaurent& L, double rel = 1e-8) {
  return max_imag_coeff(L) <= rel * (1.0 + max_abs_coeff(L));
}

// Degree-m panel of directions clustered toward the quadrant walls:
// u_i = 1/2 + 0.45 cos(pi (2i+1) / (2m)), b = (u_i, 1 - u_i).  All strictly
// inside (0.05, 0.95) and already normalized to b1 + b2 = 1.
inline std::vector<Direction> chebyshev_directions(int count) {
  if (count < 1) throw std::invalid_argument("chebyshev_directions: count must be >= 1");
  std::vector<Direction> dirs;
  dirs.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double u = 0.5 + 0.45 * std::cos(M_PI * (2.0 * i + 1.0) / (2.0 * count));
    dirs.push_back({u, 1.0 - u});
  }
  return dirs;
}

// Default panel size for a degree-k fit: twice the minimum sample count.
inline std::vector<Direction> default_directions(int k) {
  return chebyshev_directions(4 * (k + 1));
}

struct FitResult {
  HomogeneousLaurent coeffs;
  double relative_residual = 0.0;
  int sample_count = 0;
};

struct VectorFitResult {
  VectorHomogeneousLaurent coeffs;
  double relative_residual = 0.0;
  int sample_count = 0;
};

namespace detail {

// Shared weighted, column-normalized QR fit.  data is (#samples) x d:
// d = 1 recovers the scalar fit, d > 1 is a simultaneous multi-RHS fit with
// one shared row weighting from the row norms.
struct FitCore {
  Eigen::MatrixXcd coeffs;  // (k+1) x d, row j <-> multi-index (k-j, j)
  double relative_residual = 0.0;
};

inline FitCore fit_core(std::span<const Direction> dirs, const Eigen::MatrixXcd& data, int k) {
  if (k < 0) throw std::invalid_argument("fit: degree must be >= 0");
  const int m = static_cast<int>(dirs.size());
  const int cols = k + 1;
  if (m < 2 * cols)
    throw std::invalid_argument("fit: at least 2(k+1) samples required for a degree-k fit");
  if (data.rows() != m) throw std::invalid_argument("fit: one sample per direction required");
  for (const auto& b : dirs) {
    validate_direction(b);
    if (std::abs(b.b1 + b.b2 - 1.0) > 1e-12)
      throw std::invalid_argument("fit: directions must be normalized to b1 + b2 = 1");
  }

  // Row weights: inverse sample magnitude with a relative floor.  All-zero
  // data keeps unit weights and fits exactly to zero coefficients.
  Eigen::VectorXd rown(m);
  for (int i = 0; i < m; ++i) rown(i) = data.row(i).norm();
  const double vmax = rown.maxCoeff();
  Eigen::VectorXd w(m);
  if (vmax > 0.0)
    for (int i = 0; i < m; ++i) w(i) = 1.0 / std::max(rown(i), 1e-14 * vmax);
  else
    w.setOnes();

  Eigen::MatrixXd design(m, cols);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < cols; ++j)
      design(i, j) = std::pow(dirs[i].b1, -(double)(k - j)) * std::pow(dirs[i].b2, -(double)j);

  const Eigen::MatrixXd dw = w.asDiagonal() * design;
  const Eigen::MatrixXcd vw = w.asDiagonal() * data;

  Eigen::VectorXd coln = dw.colwise().norm();
  for (int j = 0; j < cols; ++j)
    if (coln(j) == 0.0) coln(j) = 1.0;
  const Eigen::MatrixXcd dn = (dw * coln.cwiseInverse().asDiagonal()).cast<Complex>();

  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(dn);
  if (qr.rank() < cols)
    throw DegenerateDesign("fit: direction panel yields a rank-deficient design matrix");

  FitCore out;
  const Eigen::MatrixXcd xn = qr.solve(vw);
  out.coeffs = coln.cwiseInverse().asDiagonal() * xn;

  const Eigen::MatrixXcd misfit = dn * xn - vw;
  const double num = misfit.cwiseAbs().maxCoeff();
  const double den = std::max(vw.cwiseAbs().maxCoeff(), 1e-300);
  out.relative_residual = num / den;
  return out;
}

}  // namespace detail

// Least-squares fit of scalar samples by a degree-k homogeneous Laurent
// polynomial.  Directions must be normalized (b1 + b2 = 1) by the caller and
// number at least 2(k+1).
inline FitResult fit_homogeneous(std::span<const std::pair<Direction, Complex>> samples, int k) {
  std::vector<Direction> dirs;
  Eigen::MatrixXcd data(static_cast<Eigen::Index>(samples.size()), 1);
  dirs.reserve(samples.size());
  for (size_t i = 0; i < samples.size(); ++i) {
    dirs.push_back(samples[i].first);
    data(static_cast<Eigen::Index>(i), 0) = samples[i].second;
  }
  const auto core = detail::fit_core(dirs, data, k);
  FitResult out;
  out.coeffs.degree = k;
  for (int j = 0; j <= k; ++j) out.coeffs.coeffs[{k - j, j}] = core.coeffs(j, 0);
  out.relative_residual = core.relative_residual;
  out.sample_count = static_cast<int>(samples.size());
  return out;
}

// Simultaneous fit of vector samples (all of one dimension) by a degree-k
// homogeneous Laurent polynomial with vector coefficients.
inline VectorFitResult fit_vector_homogeneous(
    std::span<const std::pair<Direction, CVector>> samples, int k) {
  if (samples.empty()) throw std::invalid_argument("fit: at least one sample required");
  const Eigen::Index d = samples.front().second.size();
  std::vector<Direction> dirs;
  Eigen::MatrixXcd data(static_cast<Eigen::Index>(samples.size()), d);
  dirs.reserve(samples.size());
  for (size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].second.size() != d)
      throw std::invalid_argument("fit: all vector samples must share one dimension");
    dirs.push_back(samples[i].first);
    data.row(static_cast<Eigen::Index>(i)) = samples[i].second.transpose();
  }
  const auto core = detail::fit_core(dirs, data, k);
  VectorFitResult out;
  out.coeffs.degree = k;
  for (int j = 0; j <= k; ++j) out.coeffs.coeffs[{k - j, j}] = core.coeffs.row(j).transpose();
  out.relative_residual = core.relative_residual;
  out.sample_count = static_cast<int>(samples.size());
  return out;
}

enum class PolyVerdict { Polynomial, NotPolynomial, Indeterminate };

inline PolyVerdict poly_verdict(double residual, double tol = tol_poly,
                                double reject = nonpoly_floor) {
  if (residual <= tol) return PolyVerdict::Polynomial;
  if (residual >= reject) return PolyVerdict::NotPolynomial;
  return PolyVerdict::Indeterminate;
}

inline bool is_polynomial(const FitResult& f, double tol = tol_poly) {
  return f.relative_residual <= tol;
}
inline bool is_polynomial(const VectorFitResult& f, double tol = tol_poly) {
  return f.relative_residual <= tol;
}

inline const char* to_string(PolyVerdict v) {
  switch (v) {
    case PolyVerdict::Polynomial: return "Polynomial";
    case PolyVerdict::NotPolynomial: return "NotPolynomial";
    default: return "Indeterminate";
  }
}

// Evaluates a fitted vector coefficient layer at genuinely complex points and
// compares against the resolvent chain (z_Y^{-1} A)^{k-1} z_Y^{-1} alpha.
// A successful degree-k fit of R_k must extend off the real quadrant: max
// relative deviation over the test points.
inline double complex_extension_check(const VectorHomogeneousLaurent& fit, const TypeIRep& rep,
                                      int k,
                                      std::span<const std::pair<Complex, Complex>> points) {
  if (k < 1) throw std::invalid_argument("complex_extension_check: order must be >= 1");
  double worst = 0.0;
  for (const auto& [z1, z2] : points) {
    const CMatrix zy = z_weighted(rep, z1, z2);
    CVector exact = solve_shifted(zy, rep.alpha);
    for (int j = 1; j < k; ++j) exact = solve_shifted(zy, CVector(rep.A * exact));
    const CVector predicted = eval_laurent(fit, z1, z2);
    const double rel = (predicted - exact).norm() / std::max(exact.norm(), 1e-300);
    worst = std::max(worst, rel);
  }
  return worst;
}

}  // namespace loewner
