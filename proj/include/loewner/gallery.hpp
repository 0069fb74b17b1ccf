// Concrete model families used throughout the tests and the CLI:
//
//   * counterexample_rep(n, t): the cyclic-shift family whose moment
//     expansion exists to all orders along every ray, yet whose order-(2n-1)
//     scalar coefficient fails to be a homogeneous Laurent polynomial the
//     moment the weight at one site is perturbed (t != 1).  Orders below the
//     perturbation horizon have exact closed forms (closed_form_vector_moment)
//     because the orbit of the cyclic walk cannot reach the perturbed site.
//
//   * heavy_tail_measure(p, J): truncated power-law measure sum j^{-p} at the
//     integers, the standard source of functions with finitely many finite
//     moments.
//
//   * random_rep / random_measure / random_gallery: deterministic seeded
//     generators (explicit bit-derived uniforms and Box-Muller normals, so
//     every platform draws identical models from identical seeds).
//
//   * quasi_points: a low-discrepancy Halton panel in the bi-half-plane for
//     positivity sweeps.

#pragma once

#include "loewner/numkernel.hpp"
#include "loewner/representation.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <vector>

namespace loewner {

struct OrderTooHigh : std::domain_error {
  using std::domain_error::domain_error;
};

// Parameters of the cyclic-shift family: dimension 2(n-1), weight t at the
// antipodal site.  t = 1 is the unperturbed (fully polynomial) member.
struct CounterexampleSpec {
  int n = 3;
  double t = 0.5;
};

inline void validate(const CounterexampleSpec& spec) {
  if (spec.n < 2) throw std::invalid_argument("CounterexampleSpec: n must be >= 2");
  if (!(spec.t > 0.0) || !(spec.t <= 1.0))
    throw std::invalid_argument("CounterexampleSpec: t must lie in (0, 1]");
}

// A = S + S^{-1} for the cyclic shift S on Z_{2(n-1)} (collisions summed, so
// n = 2 gives the 2x2 matrix with off-diagonal 2), Y = I except Y(n-1, n-1)
// = t, alpha = e_0.
inline TypeIRep counterexample_rep(const CounterexampleSpec& spec) {
  validate(spec);
  const Eigen::Index d = 2 * (spec.n - 1);
  TypeIRep rep;
  rep.A = CMatrix::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    rep.A(j, (j + 1) % d) += 1.0;
    rep.A(j, (j + d - 1) % d) += 1.0;
  }
  rep.Y = CMatrix::Identity(d, d);
  rep.Y(spec.n - 1, spec.n - 1) = spec.t;
  rep.alpha = CVector::Zero(d);
  rep.alpha(0) = 1.0;
  return rep;
}

// Closed form for the vector moments of the cyclic family at orders below the
// perturbation horizon (1 <= k < n):
//
//   R_k(b) = b1^{-k} sum_{l=0}^{k-1} C(k-1, l) e_{(-(k-1) + 2l) mod 2(n-1)},
//
// with coefficients landing on one site summed.  Valid because a (k-1)-step
// cyclic walk from site 0 stays within distance n-2 of the start, where the
// weight matrix acts as the scalar b1.
inline CVector closed_form_vector_moment(const CounterexampleSpec& spec, int k,
                                         const Direction& b) {
  validate(spec);
  validate_direction(b);
  if (k < 1 || k >= spec.n) {
    std::ostringstream msg;
    msg << "closed_form_vector_moment: order " << k << " outside the closed-form range [1, "
        << spec.n - 1 << "]";
    throw OrderTooHigh(msg.str());
  }
  const Eigen::Index d = 2 * (spec.n - 1);
  CVector v = CVector::Zero(d);
  unsigned long long binom = 1;  // C(k-1, l), updated multiplicatively
  for (int l = 0; l <= k - 1; ++l) {
    const Eigen::Index site = ((-(k - 1) + 2 * l) % d + d) % d;
    v(site) += static_cast<double>(binom);
    binom = binom * (k - 1 - l) / (l + 1);
  }
  return v / std::pow(b.b1, k);
}

// Truncated power-law measure: atoms (j, j^{-p}), j = 1..J.
inline DiscreteMeasure heavy_tail_measure(double p, int J) {
  if (J < 1) throw std::invalid_argument("heavy_tail_measure: at least one atom required");
  if (!(p > 0.0)) throw std::invalid_argument("heavy_tail_measure: exponent must be positive");
  DiscreteMeasure m;
  m.atoms.reserve(J);
  for (int j = 1; j <= J; ++j)
    m.atoms.emplace_back(static_cast<double>(j), std::pow(static_cast<double>(j), -p));
  return m;
}

// Deterministic random source: uniforms from the top 53 bits of a mt19937_64
// draw, normals via explicit Box-Muller.  The standard distributions are
// implementation-defined, so they are not used anywhere.
class DeterministicRng {
 public:
  explicit DeterministicRng(std::uint64_t seed) : eng_(seed) {}

  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform01();  // in (0, 1], keeps the log finite
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * M_PI * u2);
    have_spare_ = true;
    return r * std::cos(2.0 * M_PI * u2);
  }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Seeded random realization: A = (G + G*)/2 with iid complex-Gaussian G,
// Y diagonal with iid uniform [0,1) entries, alpha complex Gaussian
// normalized to unit length.  Identical seeds give identical models.
inline TypeIRep random_rep(int dim, std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("random_rep: dimension must be >= 1");
  DeterministicRng rng(seed);
  TypeIRep rep;
  CMatrix g(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int k = 0; k < dim; ++k) g(j, k) = Complex(rng.gaussian(), rng.gaussian());
  rep.A = (g + g.adjoint()) / 2.0;
  rep.Y = CMatrix::Zero(dim, dim);
  for (int j = 0; j < dim; ++j) rep.Y(j, j) = rng.uniform01();
  rep.alpha = CVector(dim);
  for (int j = 0; j < dim; ++j) rep.alpha(j) = Complex(rng.gaussian(), rng.gaussian());
  const double nrm = rep.alpha.norm();
  if (nrm > 0.0) rep.alpha /= nrm;
  else rep.alpha(0) = 1.0;
  return rep;
}

// Seeded random atomic measure: positions uniform in [-5, 5], weights in
// (0.1, 1.1).
inline DiscreteMeasure random_measure(int atoms, std::uint64_t seed) {
  if (atoms < 1) throw std::invalid_argument("random_measure: at least one atom required");
  DeterministicRng rng(seed);
  DiscreteMeasure m;
  m.atoms.reserve(atoms);
  for (int j = 0; j < atoms; ++j) {
    const double t = -5.0 + 10.0 * rng.uniform01();
    const double w = 0.1 + rng.uniform01();
    m.atoms.emplace_back(t, w);
  }
  return m;
}

// Standard seeded gallery: dims cycle 1..max_dim, seeds run seed0 + index.
inline std::vector<TypeIRep> random_gallery(int count, int max_dim,
                                            std::uint64_t seed0 = 0x5EED5EEDull) {
  std::vector<TypeIRep> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(random_rep(1 + (i % max_dim), seed0 + i));
  return out;
}

// Radical-inverse (Halton) sequence in the given base.
inline double halton(std::uint64_t index, int base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

// Low-discrepancy panel strictly inside the bi-half-plane: real parts in
// [-3, 3], imaginary parts in [0.05, 2.05], bases 2/3 for z1 and 5/7 for z2.
inline std::vector<HalfPlanePoint2> quasi_points(int count) {
  std::vector<HalfPlanePoint2> pts;
  pts.reserve(count);
  for (int i = 1; i <= count; ++i) {
    const auto u = static_cast<std::uint64_t>(i);
    pts.push_back({Complex(-3.0 + 6.0 * halton(u, 2), 0.05 + 2.0 * halton(u, 3)),
                   Complex(-3.0 + 6.0 * halton(u, 5), 0.05 + 2.0 * halton(u, 7))});
  }
  return pts;
}

}  // namespace loewner
