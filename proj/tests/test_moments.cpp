#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "loewner/gallery.hpp"
#include "loewner/moments.hpp"
#include "test_util.hpp"

using namespace loewner;
using testutil::rel_err;

TEST_CASE("cyclic family: pinned scalar moments at b = (1,1)") {
  for (double t : {0.25, 0.5, 0.75, 1.0}) {
    const TypeIRep rep = counterexample_rep({3, t});
    // At b = (1,1) the weight matrix is the identity regardless of t.
    CHECK(rel_err(scalar_moment(rep, {1.0, 1.0}, 3), 2.0) < 1e-12);
    CHECK(rel_err(scalar_moment(rep, {1.0, 1.0}, 5), 8.0) < 1e-12);
    CHECK(rel_err(scalar_moment(rep, {1.0, 1.0}, 1), 1.0) < 1e-12);
  }
}

TEST_CASE("cyclic family: closed form for the first non-polynomial scalar order") {
  // r_5(b) = 4/b1^5 + 4/(b1^4 d(b)), d = t b1 + (1-t) b2, for the n = 3 member.
  const double t = 0.5;
  const TypeIRep rep = counterexample_rep({3, t});
  for (const auto& b : {Direction{2.0, 7.0}, Direction{1.0, 3.0}, Direction{0.3, 0.7}}) {
    const double d = t * b.b1 + (1.0 - t) * b.b2;
    const double want = 4.0 / std::pow(b.b1, 5) + 4.0 / (std::pow(b.b1, 4) * d);
    CHECK(rel_err(scalar_moment(rep, b, 5), want) < 1e-12);
    CHECK(rel_err(scalar_moment_sqrt(rep, b, 5), want) < 1e-12);
  }
}

TEST_CASE("cyclic family: even moments vanish identically") {
  const TypeIRep rep = counterexample_rep({4, 0.3});
  for (const auto& b : {Direction{1.0, 1.0}, Direction{2.0, 5.0}, Direction{0.4, 0.6}}) {
    for (int k : {2, 4, 6}) {
      CHECK(std::abs(scalar_moment(rep, b, k)) < 1e-12);
      CHECK(std::abs(scalar_moment_sqrt(rep, b, k)) < 1e-12);
    }
  }
}

TEST_CASE("homogeneity: r_k(c b) = c^{-k} r_k(b)") {
  const TypeIRep rep = random_rep(5, 2024);
  const Direction b{0.35, 0.65};
  const double c = 3.7;
  for (int k = 1; k <= 6; ++k) {
    const double lhs = scalar_moment(rep, {c * b.b1, c * b.b2}, k);
    const double rhs = scalar_moment(rep, b, k) / std::pow(c, k);
    CHECK(rel_err(lhs, rhs) < 1e-12);
  }
}

TEST_CASE("odd moments are nonnegative and the two routes agree") {
  for (int trial = 0; trial < 12; ++trial) {
    const TypeIRep rep = random_rep(1 + trial % 6, 3000 + trial);
    const Direction b{0.2 + 0.05 * trial, 0.8 - 0.05 * trial};
    for (int k = 1; k <= 7; ++k) {
      const double a = scalar_moment(rep, b, k);
      const double s = scalar_moment_sqrt(rep, b, k);
      CHECK(std::abs(a - s) <= 1e-10 * (1.0 + std::abs(a)));
      if (k % 2 == 1) CHECK(s >= -1e-12);
    }
  }
}

TEST_CASE("square-root bridge: beta_{k-1} = b_Y^{1/2} R_k") {
  const TypeIRep rep = random_rep(6, 77);
  const Direction b{1.0, 2.5};
  const WeightedSqrt ws = weighted_sqrt(rep, b);
  for (int k = 1; k <= 5; ++k) {
    const CVector lhs = beta(rep, b, k - 1);
    const CVector rhs = ws.half * vector_moment(rep, b, k);
    CHECK(rel_err(lhs, rhs) < 1e-10);
  }
}

TEST_CASE("weighted square roots multiply back to the weight matrix") {
  const TypeIRep rep = random_rep(5, 555);
  const Direction b{0.6, 1.7};
  const WeightedSqrt ws = weighted_sqrt(rep, b);
  const CMatrix by = weighted_matrix(rep, b);
  CHECK((ws.half * ws.half - by).cwiseAbs().maxCoeff() < 1e-12 * (1.0 + by.cwiseAbs().maxCoeff()));
  CHECK((ws.half * ws.inv_half - CMatrix::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-12);
  // X_b is Hermitian by construction
  CHECK(hermitian_defect(x_weighted(rep, b)) == 0.0);
}

TEST_CASE("telescoping: 1x1 model is exact at depth 1") {
  TypeIRep rep;
  rep.A = CMatrix::Constant(1, 1, 1.7);
  rep.Y = CMatrix::Constant(1, 1, 1.0);
  rep.alpha = CVector::Constant(1, 1.0);
  for (double s : {10.0, 1e3, 1e5})
    CHECK(telescope_residual(rep, {1.0, 1.0}, s, 1) < 1e-13);
}

TEST_CASE("telescoping: cyclic member and random model at pinned heights") {
  const TypeIRep ce = counterexample_rep({4, 0.3});
  for (int N : {1, 2, 3}) CHECK(telescope_residual(ce, {2.0, 1.0}, 50.0, N) < 1e-10);

  const TypeIRep rnd = random_rep(6, 11);
  CHECK(telescope_residual(rnd, {1.0, 3.0}, 100.0, 2) < 1e-10);
}

TEST_CASE("telescoping: residual within bound across depths and directions") {
  for (int trial = 0; trial < 6; ++trial) {
    const TypeIRep rep = random_rep(1 + trial, 4242 + trial);
    for (int N = 1; N <= 5; ++N) {
      for (const auto& b : {Direction{0.1, 0.9}, Direction{0.5, 0.5}, Direction{0.9, 0.1}}) {
        for (double s : {10.0, 1e3, 1e5}) {
          const TelescopeCheck tc = telescope_check(rep, b, s, N);
          CHECK(tc.pass);
          CHECK(tc.residual <= tc.bound);
        }
      }
    }
  }
}

TEST_CASE("measure moments are power sums over b1") {
  const DiscreteMeasure m = heavy_tail_measure(4.0, 3);
  const double m0 = 1.0 + 1.0 / 16.0 + 1.0 / 81.0;
  const double m1 = 1.0 + 2.0 / 16.0 + 3.0 / 81.0;
  const Direction b{2.0, 5.0};
  CHECK(rel_err(scalar_moment(m, b, 1), m0 / 2.0) < 1e-15);
  CHECK(rel_err(scalar_moment(m, b, 2), m1 / 4.0) < 1e-15);
  // agreement with the diagonal embedding
  const TypeIRep rep = from_discrete_measure(m);
  for (int k = 1; k <= 5; ++k)
    CHECK(rel_err(scalar_moment(m, b, k), scalar_moment(rep, b, k)) < 1e-12);
  for (int k = 1; k <= 3; ++k)
    CHECK(rel_err(vector_moment(m, b, k), vector_moment(rep, b, k)) < 1e-12);
}

TEST_CASE("moment diagnostics stay at roundoff for valid models") {
  const TypeIRep rep = random_rep(5, 99);
  const Direction b{0.45, 0.55};
  for (int k = 1; k <= 6; ++k) {
    const auto d = scalar_moment_diagnostics(rep, b, k);
    CHECK(d.imag_defect <= 1e-12 * (1.0 + std::abs(d.value)));
    CHECK(d.route_gap <= 1e-10 * (1.0 + std::abs(d.value)));
  }
}

TEST_CASE("preconditions are enforced") {
  const TypeIRep rep = random_rep(2, 5);
  CHECK_THROWS_AS(scalar_moment(rep, {1.0, 1.0}, 0), std::invalid_argument);
  CHECK_THROWS_AS(vector_moment(rep, {1.0, 1.0}, 0), std::invalid_argument);
  CHECK_THROWS_AS(beta(rep, {1.0, 1.0}, -1), std::invalid_argument);
  CHECK_THROWS_AS(telescope_residual(rep, {1.0, 1.0}, -2.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(telescope_residual(rep, {1.0, 1.0}, 10.0, 0), std::invalid_argument);
}
