// Order-N class membership through three independent routes, plus the
// cross-validation rules tying them together.
//
//   operator route   op(N): the moment expansion exists through order 2N-1,
//                    i.e. every scalar coefficient r_k and vector coefficient
//                    R_ceil(k/2) for k <= 2N-1 is a homogeneous Laurent
//                    polynomial over directions (and, for measures, the
//                    underlying moment series converges at every such order).
//
//   function route   fn(N): the residue ladder peels 2N-1 genuine layers off
//                    h itself, every layer has real coefficients, and the
//                    order-(2N-1) tail is actually small at large heights.
//
//   boundedness      bd(N): the ladder reaches order 2N-3 and the functional
//                    J_b(s) = s^{2N-1} Im[h - fitted layers] stays bounded
//                    along every panel direction (growth exponent ~ 0); a
//                    growth exponent >= 0.4 certifies unboundedness.
//
// The three routes pin down nested classes: membership indices line up as
//
//   first failing scalar order  =  2 * (first failing vector index) - 1,
//   op In(N)  =>  bd In(N)      (the same-order class is larger),
//   bd In(N)  =>  op In(N-1)    (one-step containment chain),
//   op and fn agree outright whenever both are determinate.
//
// cross_validate checks exactly those rules and reports violations; an empty
// list is the expected outcome for every model, perturbed or not.
//
// Verdicts are three-valued.  A definite failure anywhere at or below the
// deciding order wins over indeterminate fits (Out), indeterminate fits
// block In; a model is never both In and Out at one order.  Per-order
// verdicts are cumulative (order k counts only if every order below it
// passed), which makes In downward-closed by construction.

#pragma once

#include "loewner/asymptotics.hpp"
#include "loewner/laurent.hpp"
#include "loewner/moments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

namespace loewner {

enum class Verdict { In, Out, Indeterminate };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::In: return "In";
    case Verdict::Out: return "Out";
    default: return "Indeterminate";
  }
}

// Divergence threshold for the truncated-tail series emulation: the last
// half of the atoms contributing more than 1% of the partial sum reads as a
// divergent underlying series.
inline constexpr double series_tail_share = 0.01;
// Below this atom count there is no tail to emulate; finite measures have
// every moment.
inline constexpr int series_min_atoms = 32;

// Does the absolute moment series sum w |t|^j converge, judged from the
// truncation: compare the full partial sum against the first-half partial
// sum in the measure's own (truncation) order.
inline bool moment_series_converges(const DiscreteMeasure& m, int j) {
  const int count = static_cast<int>(m.atoms.size());
  if (count < series_min_atoms) return true;
  double full = 0.0, half = 0.0;
  const int half_count = count / 2;
  for (int a = 0; a < count; ++a) {
    const double term = m.atoms[a].second * std::pow(std::abs(m.atoms[a].first), j);
    full += term;
    if (a < half_count) half += term;
  }
  if (full == 0.0) return true;
  return (full - half) / full <= series_tail_share;
}

// Per-order fit record.  Raw residuals are reported as measured; the
// cumulative flag is what the routes consume (an order only counts when all
// orders below it passed), keeping verdicts monotone even when an isolated
// higher-order coefficient happens to fit.
struct OrderReport {
  int k = 0;
  bool exists = true;
  double scalar_residual = 0.0;
  PolyVerdict scalar = PolyVerdict::Polynomial;
  double vector_residual = 0.0;
  PolyVerdict vector = PolyVerdict::Polynomial;
  bool cumulative_ok = true;
};

struct MomentReport {
  int max_order = 0;
  std::vector<OrderReport> orders;
  // First offending order per track; 0 means none up to max_order.
  int first_nonpoly_scalar = 0;
  int first_nonpoly_vector = 0;  // reported in scalar order k = 2j - 1
  int first_nonexistent = 0;
  // First order with any indeterminate fit before a hard failure; 0 if none.
  int first_indeterminate = 0;
};

namespace detail {

inline void finalize_moment_report(MomentReport& mr) {
  bool ok = true;
  for (auto& o : mr.orders) {
    if (!o.exists && mr.first_nonexistent == 0) mr.first_nonexistent = o.k;
    if (o.scalar == PolyVerdict::NotPolynomial && mr.first_nonpoly_scalar == 0)
      mr.first_nonpoly_scalar = o.k;
    if (o.vector == PolyVerdict::NotPolynomial && mr.first_nonpoly_vector == 0)
      mr.first_nonpoly_vector = o.k;
    const bool hard_fail = !o.exists || o.scalar == PolyVerdict::NotPolynomial ||
                           o.vector == PolyVerdict::NotPolynomial;
    const bool indet = o.scalar == PolyVerdict::Indeterminate ||
                       o.vector == PolyVerdict::Indeterminate;
    if (indet && !hard_fail && mr.first_indeterminate == 0 && ok)
      mr.first_indeterminate = o.k;
    ok = ok && !hard_fail && !indet;
    o.cumulative_ok = ok;
  }
}

}  // namespace detail

// Moment-order survey of a realization: every order exists; polynomiality is
// decided by direction-panel fits of r_k (degree k) and R_ceil(k/2) (degree
// ceil(k/2), shared between the two orders it serves).
inline MomentReport moment_orders(const TypeIRep& rep, int max_order,
                                  double fit_tol = tol_poly) {
  if (max_order < 1) throw std::invalid_argument("moment_orders: max order must be >= 1");
  MomentReport mr;
  mr.max_order = max_order;

  // Vector fits R_j at degree j, cached: order k consumes j = ceil(k/2).
  std::vector<double> vec_residual(max_order / 2 + 2, 0.0);
  for (int j = 1; j <= (max_order + 1) / 2; ++j) {
    const auto dirs = default_directions(j);
    std::vector<std::pair<Direction, CVector>> samples;
    samples.reserve(dirs.size());
    for (const auto& b : dirs) samples.emplace_back(b, vector_moment(rep, b, j));
    vec_residual[j] = fit_vector_homogeneous(samples, j).relative_residual;
  }

  for (int k = 1; k <= max_order; ++k) {
    OrderReport o;
    o.k = k;
    const auto dirs = default_directions(k);
    std::vector<std::pair<Direction, Complex>> samples;
    samples.reserve(dirs.size());
    for (const auto& b : dirs) samples.emplace_back(b, Complex(scalar_moment(rep, b, k), 0.0));
    o.scalar_residual = fit_homogeneous(samples, k).relative_residual;
    o.scalar = poly_verdict(o.scalar_residual, fit_tol);
    o.vector_residual = vec_residual[(k + 1) / 2];
    o.vector = poly_verdict(o.vector_residual, fit_tol);
    mr.orders.push_back(o);
  }
  detail::finalize_moment_report(mr);
  return mr;
}

// Measure variant: existence comes from the series emulation; when an order
// exists its scalar coefficient m_{k-1}/b1^k is fitted over the panel, and
// the vector coefficient is a corner monomial with constant coefficient
// by construction (residual 0, no fit needed).
inline MomentReport moment_orders(const DiscreteMeasure& m, int max_order,
                                  double fit_tol = tol_poly) {
  if (max_order < 1) throw std::invalid_argument("moment_orders: max order must be >= 1");
  MomentReport mr;
  mr.max_order = max_order;
  for (int k = 1; k <= max_order; ++k) {
    OrderReport o;
    o.k = k;
    o.exists = moment_series_converges(m, k - 1);
    if (o.exists) {
      const auto dirs = default_directions(k);
      std::vector<std::pair<Direction, Complex>> samples;
      samples.reserve(dirs.size());
      for (const auto& b : dirs) samples.emplace_back(b, Complex(scalar_moment(m, b, k), 0.0));
      o.scalar_residual = fit_homogeneous(samples, k).relative_residual;
      o.scalar = poly_verdict(o.scalar_residual, fit_tol);
      o.vector_residual = 0.0;
      o.vector = PolyVerdict::Polynomial;
    } else {
      o.scalar = PolyVerdict::Indeterminate;
      o.vector = PolyVerdict::Indeterminate;
    }
    mr.orders.push_back(o);
  }
  detail::finalize_moment_report(mr);
  return mr;
}

struct PerOrderVerdicts {
  int N = 0;
  Verdict op = Verdict::Indeterminate;
  Verdict fn = Verdict::Indeterminate;
  Verdict bd = Verdict::Indeterminate;
  double j_slope = 0.0;      // worst growth exponent of J_N over the panel
  Growth j_growth = Growth::Indeterminate;
  double o_tail = 0.0;       // tail value backing the fn verdict
  double o_tail_height = 0.0;
};

struct Discrepancy {
  int N = 0;
  std::string rule;
  std::string detail;
};

struct ClassificationReport {
  int max_N = 0;
  MomentReport moments;
  ResidueLadder ladder;
  std::vector<PerOrderVerdicts> entries;
  std::vector<Discrepancy> discrepancies;
};

// The fixed containment rules the routes must satisfy; violations are
// reported per order.
inline std::vector<Discrepancy> cross_validate(const ClassificationReport& rep) {
  std::vector<Discrepancy> out;
  for (const auto& e : rep.entries) {
    if (e.op != Verdict::Indeterminate && e.fn != Verdict::Indeterminate && e.op != e.fn) {
      std::ostringstream msg;
      msg << "operator route " << to_string(e.op) << " vs function route " << to_string(e.fn);
      out.push_back({e.N, "operator-function agreement", msg.str()});
    }
    if (e.op == Verdict::In && e.bd == Verdict::Out)
      out.push_back({e.N, "same-order containment",
                     "operator route In but boundedness route Out"});
    if (e.N >= 2 && e.bd == Verdict::In) {
      const auto& prev = rep.entries[static_cast<size_t>(e.N) - 2];
      if (prev.op == Verdict::Out)
        out.push_back({e.N, "one-step containment",
                       "boundedness route In but operator route Out at the order below"});
    }
  }
  return out;
}

namespace detail {

// Route verdicts shared by both model kinds once the moment report, the
// ladder, and per-direction slices are in hand.  ray_usable = false marks a
// model whose ray window is too short for asymptotics (over-truncated
// measure): the operator route still reports, the ray routes stay
// indeterminate rather than reading truncation artifacts as growth.
inline ClassificationReport classify_core(
    MomentReport mr, ResidueLadder ladder, int max_N, const RayGrid& grid_template,
    const std::function<SpectralSlice(const Direction&)>& slicer, bool ray_usable = true) {
  ClassificationReport out;
  out.max_N = max_N;
  out.moments = std::move(mr);
  out.ladder = std::move(ladder);

  // Fixed 9-direction panel for the boundedness functional.
  std::vector<Direction> panel;
  for (int i = 1; i <= 9; ++i) panel.push_back({0.1 * i, 1.0 - 0.1 * i});
  std::vector<SpectralSlice> slices;
  if (ray_usable) {
    slices.reserve(panel.size());
    for (const auto& b : panel) slices.push_back(slicer(b));
  }

  for (int N = 1; N <= max_N; ++N) {
    PerOrderVerdicts e;
    e.N = N;
    const int K = 2 * N - 1;

    // Operator route: cumulative pass through order 2N-1.
    bool hard_fail = false, indet = false;
    for (const auto& o : out.moments.orders) {
      if (o.k > K) break;
      if (!o.exists || o.scalar == PolyVerdict::NotPolynomial ||
          o.vector == PolyVerdict::NotPolynomial)
        hard_fail = true;
      else if (o.scalar == PolyVerdict::Indeterminate || o.vector == PolyVerdict::Indeterminate)
        indet = true;
    }
    e.op = hard_fail ? Verdict::Out : (indet ? Verdict::Indeterminate : Verdict::In);

    if (!ray_usable) {
      out.entries.push_back(e);  // fn and bd stay Indeterminate
      continue;
    }

    // Function route: 2N-1 accepted real layers plus a small tail.
    if (out.ladder.depth() >= K) {
      bool real_layers = true;
      for (int m = 1; m <= K; ++m) real_layers = real_layers && out.ladder.layers[m - 1].real;
      double worst_tail = 0.0, worst_height = 0.0;
      for (const auto& sl : slices) {
        const TailCheck tc = o_tail_check(sl, N, grid_template);
        if (tc.value > worst_tail) {
          worst_tail = tc.value;
          worst_height = tc.height;
        }
      }
      e.o_tail = worst_tail;
      e.o_tail_height = worst_height;
      if (!real_layers)
        e.fn = Verdict::Out;
      else
        e.fn = worst_tail <= tol_limit ? Verdict::In : Verdict::Out;
    } else if (out.ladder.stop == LadderStop::NotPolynomialLayer) {
      e.fn = Verdict::Out;
    } else {
      e.fn = Verdict::Indeterminate;
    }

    // Boundedness route: layers through 2N-3, then the growth of J_N.
    const int need = std::max(2 * N - 3, 0);
    if (out.ladder.depth() >= need) {
      bool any_unbounded = false, any_indet = false;
      double worst = -std::numeric_limits<double>::infinity();
      for (const auto& sl : slices) {
        RayGrid g = grid_template;
        g.b = panel[static_cast<size_t>(&sl - slices.data())];
        const auto jv = imag_remainder_values(sl, N, g);
        const double slope = growth_exponent(g, jv);
        worst = std::max(worst, slope);
        const Growth gr = growth_verdict(slope);
        any_unbounded = any_unbounded || gr == Growth::Unbounded;
        any_indet = any_indet || gr == Growth::Indeterminate;
      }
      e.j_slope = worst;
      e.j_growth = any_unbounded ? Growth::Unbounded
                                 : (any_indet ? Growth::Indeterminate : Growth::Bounded);
      e.bd = any_unbounded ? Verdict::Out
                           : (any_indet ? Verdict::Indeterminate : Verdict::In);
    } else if (out.ladder.stop == LadderStop::NotPolynomialLayer) {
      e.bd = Verdict::Out;
    } else {
      e.bd = Verdict::Indeterminate;
    }

    out.entries.push_back(e);
  }
  out.discrepancies = cross_validate(out);
  return out;
}

}  // namespace detail

struct ProfileOptions {
  int max_N = 3;
  double fit_tol = tol_poly;
  double s0 = 10.0;
  double ratio = 2.0;
  int levels = 20;
};

inline ClassificationReport loewner_profile(const TypeIRep& rep, const ProfileOptions& opt = {}) {
  if (opt.max_N < 1) throw std::invalid_argument("loewner_profile: max order must be >= 1");
  const int M = 2 * opt.max_N - 1;
  const RayGrid grid_template{{1.0, 1.0}, opt.s0, opt.ratio, opt.levels};
  MomentReport mr = moment_orders(rep, M, opt.fit_tol);
  ResidueLadder ladder =
      residue_ladder(rep, M, default_directions(M), grid_template, opt.fit_tol);
  return detail::classify_core(std::move(mr), std::move(ladder), opt.max_N, grid_template,
                               [&](const Direction& b) { return spectral_slice(rep, b); });
}

// Measure variant.  The ray grid is windowed below the truncation scale
// (top <= max|t| / 10) so the asymptotics probe the underlying tail rather
// than the truncation artifact; if the window cannot hold 4 levels the
// ray-based routes return Indeterminate.
inline ClassificationReport loewner_profile(const DiscreteMeasure& m,
                                            const ProfileOptions& opt = {}) {
  if (opt.max_N < 1) throw std::invalid_argument("loewner_profile: max order must be >= 1");
  if (m.atoms.empty()) throw std::invalid_argument("loewner_profile: empty measure");
  const int M = 2 * opt.max_N - 1;

  double t_max = 0.0;
  for (const auto& [t, w] : m.atoms) t_max = std::max(t_max, std::abs(t));
  int levels = 0;
  if (t_max > 0.0) {
    const double s_max = t_max / 10.0;
    while (levels < opt.levels && opt.s0 * std::pow(opt.ratio, levels) <= s_max) ++levels;
  } else {
    levels = opt.levels;
  }

  MomentReport mr = moment_orders(m, M, opt.fit_tol);
  const RayGrid grid_template{{1.0, 1.0}, opt.s0, opt.ratio, std::max(levels, 1)};

  if (levels < 4) {
    // No usable window: moment routes only.
    ResidueLadder empty;
    empty.requested = M;
    empty.stop = LadderStop::NotConverged;
    empty.detail = "ray window below the truncation scale holds fewer than 4 levels";
    RayGrid fallback{{1.0, 1.0}, opt.s0, opt.ratio, 4};
    return detail::classify_core(std::move(mr), std::move(empty), opt.max_N, fallback,
                                 [&](const Direction& b) { return spectral_slice(m, b); },
                                 /*ray_usable=*/false);
  }

  ResidueLadder ladder =
      residue_ladder(m, M, default_directions(M), grid_template, opt.fit_tol);
  return detail::classify_core(std::move(mr), std::move(ladder), opt.max_N, grid_template,
                               [&](const Direction& b) { return spectral_slice(m, b); });
}

}  // namespace loewner
