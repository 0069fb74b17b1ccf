#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "loewner/gallery.hpp"
#include "loewner/moments.hpp"
#include "test_util.hpp"

#include <set>

using namespace loewner;
using testutil::rel_err;

TEST_CASE("cyclic construction: pinned matrices for n = 3") {
  const TypeIRep rep = counterexample_rep({3, 0.5});
  REQUIRE(rep.dim() == 4);
  CMatrix wantA = CMatrix::Zero(4, 4);
  // shift + inverse shift on Z/4: A e_j = e_{j+1} + e_{j-1}
  wantA(1, 0) = wantA(3, 0) = 1.0;
  wantA(0, 1) = wantA(2, 1) = 1.0;
  wantA(1, 2) = wantA(3, 2) = 1.0;
  wantA(0, 3) = wantA(2, 3) = 1.0;
  CHECK((rep.A - wantA).cwiseAbs().maxCoeff() == 0.0);
  CHECK(hermitian_defect(rep.A) == 0.0);

  CMatrix wantY = CMatrix::Identity(4, 4);
  wantY(2, 2) = 0.5;
  CHECK((rep.Y - wantY).cwiseAbs().maxCoeff() == 0.0);

  CVector e0 = CVector::Zero(4);
  e0(0) = 1.0;
  CHECK((rep.alpha - e0).cwiseAbs().maxCoeff() == 0.0);

  CHECK_NOTHROW(validate(rep));
}

TEST_CASE("cyclic construction: n = 2 doubles the collided entries") {
  const TypeIRep rep = counterexample_rep({2, 0.7});
  REQUIRE(rep.dim() == 2);
  CHECK(rep.A(0, 1) == Complex{2.0, 0.0});
  CHECK(rep.A(1, 0) == Complex{2.0, 0.0});
  CHECK(rep.A(0, 0) == Complex{0.0, 0.0});
  CHECK(rep.Y(1, 1) == Complex{0.7, 0.0});
  CHECK_NOTHROW(validate(rep));
}

TEST_CASE("cyclic construction: Y spectrum is {t, 1} and parameters are checked") {
  const TypeIRep rep = counterexample_rep({4, 0.25});
  const auto eig = eig_hermitian(rep.Y);
  for (int i = 0; i < eig.values.size(); ++i) {
    const double v = eig.values(i);
    CHECK((std::abs(v - 0.25) < 1e-15 || std::abs(v - 1.0) < 1e-15));
  }
  CHECK_THROWS_AS(counterexample_rep({1, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(counterexample_rep({3, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(counterexample_rep({3, 1.5}), std::invalid_argument);
}

TEST_CASE("closed-form vector moments match the resolvent recursion") {
  for (int n : {3, 4, 5, 6}) {
    for (double t : {0.25, 0.75}) {
      const TypeIRep rep = counterexample_rep({n, t});
      for (const auto& b : {Direction{1.0, 1.0}, Direction{2.0, 7.0}, Direction{0.3, 0.7}}) {
        for (int k = 1; k < n; ++k) {
          const CVector closed = closed_form_vector_moment({n, t}, k, b);
          const CVector computed = vector_moment(rep, b, k);
          CHECK(rel_err(closed, computed) < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("closed-form vector moment: pinned value at k = 2, b = (2,7)") {
  // R_2 = b1^{-2} (e_1 + e_3) for n = 3; at b1 = 2 that is (e_1 + e_3)/4.
  const CVector got = closed_form_vector_moment({3, 0.5}, 2, {2.0, 7.0});
  CVector want = CVector::Zero(4);
  want(1) = 0.25;
  want(3) = 0.25;
  CHECK(rel_err(got, want) < 1e-15);
}

TEST_CASE("closed form refuses orders outside its range") {
  CHECK_THROWS_AS(closed_form_vector_moment({3, 0.5}, 0, {1.0, 1.0}), OrderTooHigh);
  CHECK_THROWS_AS(closed_form_vector_moment({3, 0.5}, 3, {1.0, 1.0}), OrderTooHigh);
  CHECK_THROWS_WITH_AS(closed_form_vector_moment({4, 0.5}, 4, {1.0, 1.0}),
                       doctest::Contains("outside the closed-form range [1, 3]"),
                       OrderTooHigh);
}

TEST_CASE("at t = 1 the weight matrix degenerates to b1 I and every moment is polynomial") {
  const TypeIRep rep = counterexample_rep({3, 1.0});
  // b_Y = b1 I, so R_k = b1^{-k} A^{k-1} e_0 for all k, not only k < n.
  const Direction b{3.0, 11.0};
  for (int k = 1; k <= 8; ++k) {
    CVector want = CVector::Zero(4);
    want(0) = 1.0;
    for (int j = 1; j < k; ++j) want = (rep.A * want).eval();
    want /= std::pow(b.b1, k);
    CHECK(rel_err(vector_moment(rep, b, k), want) < 1e-8);
  }
}

TEST_CASE("heavy-tail measure: atoms t_j = j with weights j^{-p}") {
  const DiscreteMeasure m = heavy_tail_measure(4.0, 100);
  REQUIRE(m.atoms.size() == 100);
  CHECK(m.atoms[0].first == 1.0);
  CHECK(m.atoms[0].second == 1.0);
  CHECK(m.atoms[9].first == 10.0);
  CHECK(rel_err(m.atoms[9].second, 1e-4) < 1e-15);
  CHECK_NOTHROW(validate_measure(m));
  CHECK_THROWS_AS(heavy_tail_measure(4.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(heavy_tail_measure(-1.0, 10), std::invalid_argument);
}

TEST_CASE("deterministic rng: bitwise reproducibility and range") {
  DeterministicRng a(12345), b(12345);
  for (int i = 0; i < 100; ++i) {
    const double u = a.uniform01();
    CHECK(u == b.uniform01());
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  for (int i = 0; i < 100; ++i) CHECK(a.gaussian() == b.gaussian());

  const TypeIRep r1 = random_rep(5, 777);
  const TypeIRep r2 = random_rep(5, 777);
  CHECK((r1.A - r2.A).cwiseAbs().maxCoeff() == 0.0);
  CHECK((r1.Y - r2.Y).cwiseAbs().maxCoeff() == 0.0);
  CHECK((r1.alpha - r2.alpha).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("random models are valid and normalized") {
  for (int dim = 1; dim <= 6; ++dim) {
    const TypeIRep rep = random_rep(dim, 4000 + dim);
    REQUIRE(rep.dim() == dim);
    CHECK_NOTHROW(validate(rep));
    CHECK(std::abs(rep.alpha.norm() - 1.0) < 1e-12);
  }
  const DiscreteMeasure m = random_measure(20, 9);
  CHECK_NOTHROW(validate_measure(m));
  for (const auto& [t, w] : m.atoms) {
    CHECK(t >= -5.0);
    CHECK(t <= 5.0);
    CHECK(w > 0.1 - 1e-15);
    CHECK(w < 1.1);
  }
}

TEST_CASE("gallery enumerates dimensions cyclically with distinct seeds") {
  const auto gallery = random_gallery(10, 4);
  REQUIRE(gallery.size() == 10);
  for (int i = 0; i < 10; ++i) {
    CHECK(gallery[i].dim() == 1 + i % 4);
    CHECK_NOTHROW(validate(gallery[i]));
  }
  // consecutive same-dimension entries differ
  CHECK((gallery[0].A - gallery[4].A).cwiseAbs().maxCoeff() > 1e-6);
}

TEST_CASE("halton sequence: pinned leading terms and quasi points in the bi-half-plane") {
  CHECK(halton(1, 2) == 0.5);
  CHECK(halton(2, 2) == 0.25);
  CHECK(halton(3, 2) == 0.75);
  CHECK(rel_err(halton(1, 3), 1.0 / 3.0) < 1e-15);
  const auto pts = quasi_points(200);
  REQUIRE(pts.size() == 200);
  std::set<std::pair<double, double>> seen;
  for (const auto& p : pts) {
    CHECK(p.z1.imag() > 0.0);
    CHECK(p.z2.imag() > 0.0);
    CHECK(std::abs(p.z1.real()) <= 3.0);
    CHECK(p.z1.imag() <= 2.05);
    seen.insert({p.z1.real(), p.z2.real()});
  }
  CHECK(seen.size() == 200);
}
