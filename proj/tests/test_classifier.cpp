#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "loewner/classifier.hpp"
#include "loewner/gallery.hpp"
#include "test_util.hpp"

using namespace loewner;

TEST_CASE("perturbed cyclic member: the three routes and their first failures") {
  const TypeIRep rep = counterexample_rep({3, 0.5});
  const ClassificationReport report = loewner_profile(rep, ProfileOptions{.max_N = 4});
  REQUIRE(report.entries.size() == 4);

  const Verdict in = Verdict::In, out = Verdict::Out;
  const Verdict want_op[] = {in, in, out, out};
  const Verdict want_bd[] = {in, in, in, out};
  for (int i = 0; i < 4; ++i) {
    CHECK(report.entries[i].N == i + 1);
    CHECK(report.entries[i].op == want_op[i]);
    CHECK(report.entries[i].fn == want_op[i]);  // op and fn agree here
    CHECK(report.entries[i].bd == want_bd[i]);
  }
  CHECK(report.entries[0].o_tail <= tol_limit);

  CHECK(report.moments.first_nonpoly_scalar == 5);
  CHECK(report.moments.first_nonpoly_vector == 5);
  CHECK(report.moments.first_nonexistent == 0);
  CHECK(report.ladder.stop == LadderStop::NotPolynomialLayer);
  CHECK(report.ladder.depth() == 4);
  REQUIRE(report.ladder.rejected.has_value());
  CHECK(report.ladder.rejected->order == 5);
  CHECK(report.discrepancies.empty());
}

TEST_CASE("unperturbed cyclic member is in every class") {
  const TypeIRep rep = counterexample_rep({3, 1.0});
  const ClassificationReport report = loewner_profile(rep, ProfileOptions{.max_N = 3});
  REQUIRE(report.entries.size() == 3);
  for (const auto& e : report.entries) {
    CHECK(e.op == Verdict::In);
    CHECK(e.fn == Verdict::In);
    CHECK(e.bd == Verdict::In);
  }
  CHECK(report.moments.first_nonpoly_scalar == 0);
  CHECK(report.moments.first_nonpoly_vector == 0);
  CHECK(report.ladder.stop == LadderStop::Completed);
  CHECK(report.ladder.depth() == 5);
  CHECK(report.discrepancies.empty());
}

TEST_CASE("heavy-tail measure: moments stop existing at order 4") {
  const DiscreteMeasure m = heavy_tail_measure(4.0, 100000);
  const ClassificationReport report = loewner_profile(m, ProfileOptions{.max_N = 3});
  REQUIRE(report.entries.size() == 3);

  CHECK(report.entries[0].op == Verdict::In);
  CHECK(report.entries[1].op == Verdict::In);
  CHECK(report.entries[2].op == Verdict::Out);

  CHECK(report.entries[0].bd == Verdict::In);
  CHECK(report.entries[1].bd == Verdict::In);
  CHECK(report.entries[2].bd == Verdict::Out);
  CHECK(report.entries[2].j_slope >= slope_unbounded);
  CHECK(report.entries[2].j_growth == Growth::Unbounded);

  CHECK(report.entries[0].fn == Verdict::In);
  CHECK(report.entries[1].fn == Verdict::In);
  CHECK(report.entries[2].fn != Verdict::In);

  CHECK(report.moments.first_nonexistent == 4);
  CHECK(report.discrepancies.empty());
}

TEST_CASE("random gallery: no containment violations, verdicts downward-closed") {
  const auto gallery = random_gallery(50, 4);
  for (const auto& rep : gallery) {
    const ClassificationReport report = loewner_profile(rep, ProfileOptions{.max_N = 3});
    CHECK(report.discrepancies.empty());
    for (size_t i = 1; i < report.entries.size(); ++i) {
      for (auto route : {&PerOrderVerdicts::op, &PerOrderVerdicts::fn, &PerOrderVerdicts::bd}) {
        if (report.entries[i].*route == Verdict::In)
          CHECK(report.entries[i - 1].*route == Verdict::In);
      }
    }
  }
}

TEST_CASE("diagonal embedding of a small measure is in every class") {
  const TypeIRep rep = from_discrete_measure(random_measure(6, 42));
  const ClassificationReport report = loewner_profile(rep, ProfileOptions{.max_N = 3});
  for (const auto& e : report.entries) {
    CHECK(e.op == Verdict::In);
    CHECK(e.fn == Verdict::In);
    CHECK(e.bd == Verdict::In);
  }
  CHECK(report.discrepancies.empty());
}

TEST_CASE("over-truncated measure: ray routes stay indeterminate") {
  // All atoms below |t| = 5: the usable ray window above s0 = 10 is empty,
  // so only the moment route reports.
  const DiscreteMeasure m = random_measure(10, 7);
  const ClassificationReport report = loewner_profile(m, ProfileOptions{.max_N = 2});
  CHECK(report.ladder.stop == LadderStop::NotConverged);
  CHECK(report.ladder.depth() == 0);
  CHECK(report.ladder.detail.find("fewer than 4 levels") != std::string::npos);
  for (const auto& e : report.entries) {
    CHECK(e.op == Verdict::In);  // 10 atoms: every moment exists and fits
    CHECK(e.fn == Verdict::Indeterminate);
    CHECK(e.bd == Verdict::Indeterminate);
  }
  CHECK(report.discrepancies.empty());
}

TEST_CASE("series emulation: convergence from the truncation") {
  const DiscreteMeasure big = heavy_tail_measure(4.0, 100000);
  CHECK(moment_series_converges(big, 0));
  CHECK(moment_series_converges(big, 1));
  CHECK(moment_series_converges(big, 2));
  CHECK_FALSE(moment_series_converges(big, 3));
  CHECK_FALSE(moment_series_converges(big, 4));

  // Below the emulation threshold every moment counts as existing.
  const DiscreteMeasure small = heavy_tail_measure(4.0, 10);
  for (int j = 0; j <= 5; ++j) CHECK(moment_series_converges(small, j));

  // All mass at t = 0: the series is identically zero from order 1 on.
  DiscreteMeasure zero;
  for (int i = 0; i < 40; ++i) zero.atoms.emplace_back(0.0, 1.0);
  CHECK(moment_series_converges(zero, 1));
}

TEST_CASE("moment survey: per-order records for the perturbed member") {
  const TypeIRep rep = counterexample_rep({3, 0.5});
  const MomentReport mr = moment_orders(rep, 5);
  REQUIRE(mr.orders.size() == 5);
  for (int k = 1; k <= 4; ++k) {
    CHECK(mr.orders[k - 1].scalar == PolyVerdict::Polynomial);
    CHECK(mr.orders[k - 1].vector == PolyVerdict::Polynomial);
    CHECK(mr.orders[k - 1].cumulative_ok);
  }
  CHECK(mr.orders[4].scalar == PolyVerdict::NotPolynomial);
  CHECK(mr.orders[4].vector == PolyVerdict::NotPolynomial);
  CHECK(mr.orders[4].scalar_residual >= 1e-3);
  CHECK_FALSE(mr.orders[4].cumulative_ok);
  CHECK(mr.first_indeterminate == 0);

  CHECK_THROWS_AS(moment_orders(rep, 0), std::invalid_argument);
  CHECK_THROWS_AS(moment_orders(heavy_tail_measure(4.0, 10), 0), std::invalid_argument);
  CHECK_THROWS_AS(loewner_profile(rep, ProfileOptions{.max_N = 0}), std::invalid_argument);
}

TEST_CASE("cross-validation rules fire on hand-built reports") {
  const auto entry = [](int N, Verdict op, Verdict fn, Verdict bd) {
    PerOrderVerdicts e;
    e.N = N;
    e.op = op;
    e.fn = fn;
    e.bd = bd;
    return e;
  };

  ClassificationReport disagree;
  disagree.entries = {entry(1, Verdict::In, Verdict::Out, Verdict::In)};
  auto d = cross_validate(disagree);
  REQUIRE(d.size() == 1);
  CHECK(d[0].rule == "operator-function agreement");
  CHECK(d[0].N == 1);

  ClassificationReport contain;
  contain.entries = {entry(1, Verdict::In, Verdict::In, Verdict::Out)};
  d = cross_validate(contain);
  REQUIRE(d.size() == 1);
  CHECK(d[0].rule == "same-order containment");

  ClassificationReport chain;
  chain.entries = {entry(1, Verdict::Out, Verdict::Out, Verdict::Out),
                   entry(2, Verdict::Out, Verdict::Indeterminate, Verdict::In)};
  d = cross_validate(chain);
  REQUIRE(d.size() == 1);
  CHECK(d[0].rule == "one-step containment");
  CHECK(d[0].N == 2);

  ClassificationReport clean;
  clean.entries = {entry(1, Verdict::In, Verdict::In, Verdict::In),
                   entry(2, Verdict::Out, Verdict::Out, Verdict::Indeterminate)};
  CHECK(cross_validate(clean).empty());

  CHECK(to_string(Verdict::In) == std::string("In"));
  CHECK(to_string(Verdict::Indeterminate) == std::string("Indeterminate"));
}
