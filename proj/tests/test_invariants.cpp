#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>

#include "nhdkr/errors.hpp"
#include "nhdkr/invariants.hpp"
#include "oracles.hpp"

using namespace nhdkr;
using oracle::pi;

namespace {

// |cos E - target| minimized over theta from the raw kick cosines, dense grid
// then ternary refinement around the best node.
double oracle_gap(double u1, double v1, double u2, double v2, double target) {
  auto d = [&](double th) {
    const oracle::cplx k1 = oracle::cplx(u1, v1) * std::sin(th / 2);
    const oracle::cplx k2 = oracle::cplx(u2, v2) * std::cos(th / 2);
    return std::abs(std::cos(k1) * std::cos(k2) - target);
  };
  const int grid = 4096;
  const double h = 2 * pi / grid;
  double best = 1e300, best_th = 0;
  for (int k = 0; k < grid; ++k) {
    const double th = -pi + h * k;
    if (d(th) < best) best = d(th), best_th = th;
  }
  double a = best_th - h, b = best_th + h;
  for (int it = 0; it < 200; ++it) {
    const double m1 = a + (b - a) / 3, m2 = b - (b - a) / 3;
    (d(m1) < d(m2) ? b : a) = (d(m1) < d(m2) ? m2 : m1);
  }
  return std::min(best, d(0.5 * (a + b)));
}

bool near_integer(double x, double tol) { return std::abs(x - std::round(x)) < tol; }

}  // namespace

TEST_CASE("combined_invariants") {
  auto a = invariants::combined_invariants(5, -1);
  CHECK(a.nu0.value() == 2.0);
  CHECK(a.nu_pi.value() == 3.0);
  auto b = invariants::combined_invariants(0, 0);
  CHECK(b.nu0.twice == 0);
  CHECK(b.nu_pi.twice == 0);
  auto c = invariants::combined_invariants(6, 0);
  CHECK(c.nu0.value() == 3.0);
  CHECK(c.nu_pi.value() == 3.0);
  auto d = invariants::combined_invariants(2, -1);
  CHECK(d.half_integer());
  CHECK(d.nu0.value() == 0.5);
  CHECK(d.nu_pi.value() == 1.5);
}

TEST_CASE("winding: Hermitian anchor (2, 3)") {
  const auto inv = invariants::compute_invariants(ModelParams(0.5 * pi, 0, 5.5 * pi, 0));
  CHECK(inv.nu0.value() == 2.0);
  CHECK(inv.nu_pi.value() == 3.0);
  CHECK(inv.max_round_error < 0.01);
  CHECK(std::abs(inv.nu1 + inv.nu2) == 4);
  CHECK(std::abs(inv.nu1 - inv.nu2) == 6);
}

TEST_CASE("winding: Hermitian anchor (3, 3)") {
  const auto inv = invariants::compute_invariants(ModelParams(6.5 * pi, 0, 0.5 * pi, 0));
  CHECK(inv.nu0.value() == 3.0);
  CHECK(inv.nu_pi.value() == 3.0);
  CHECK(inv.max_round_error < 0.01);
  CHECK(std::abs(inv.nu1) == 6);
  CHECK(inv.nu2 == 0);
}

TEST_CASE("winding: trivial beyond the last transition") {
  const auto tp = invariants::analytic_transitions(0.5 * pi, 5.5 * pi, TransitionAxis::V2, 10);
  const double beyond = tp.points.back().value + 1.0;
  const auto inv = invariants::compute_invariants(ModelParams(0.5 * pi, 0, 5.5 * pi, beyond));
  CHECK(inv.nu1 == 0);
  CHECK(inv.nu2 == 0);
}

TEST_CASE("winding: equal kicks give equal frame windings") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.1, 3 * pi), v(0.0, 3.0);
  int checked = 0;
  for (int i = 0; i < 40 && checked < 15; ++i) {
    const double uu = u(rng), vv = v(rng);
    try {
      const auto inv = invariants::compute_invariants(ModelParams(uu, vv, uu, vv));
      CHECK(inv.nu1 == inv.nu2);
      CHECK(std::abs(inv.nu1_raw - inv.nu2_raw) < 1e-8);
      CHECK(inv.nu_pi.twice == 0);
      ++checked;
    } catch (const Error&) {
    }
  }
  CHECK(checked >= 10);
}

TEST_CASE("winding: brute-force series oracle") {
  const ModelParams points[] = {
      {0.5 * pi, 0, 5.5 * pi, 0},   {6.5 * pi, 0, 0.5 * pi, 0},     {5.5 * pi, 0.5, 0.5 * pi, 0},
      {0.5 * pi, 0.2, 6.5 * pi, 0.2}, {2.0, -0.3, 4.0, 0.7},
  };
  for (const auto& p : points) {
    for (FrameId f : {FrameId::Frame1, FrameId::Frame2}) {
      const double lib = invariants::winding_number(p, f);
      const double ref =
          oracle::winding(p.u1(), p.v1(), p.u2(), p.v2(), f == FrameId::Frame1 ? 1 : 2, 20000);
      CHECK(std::round(lib) == std::round(ref));
      CHECK(std::abs(lib - ref) < 1e-6);
    }
  }
}

TEST_CASE("winding: quadrature route matches phase accumulation") {
  const ModelParams points[] = {
      {0.5 * pi, 0, 5.5 * pi, 0}, {6.5 * pi, 0.2, 0.5 * pi, 0.2}, {5.5 * pi, 1.0, 0.5 * pi, 0}};
  for (const auto& p : points) {
    for (FrameId f : {FrameId::Frame1, FrameId::Frame2}) {
      const double phase = invariants::winding_number(p, f);
      const double quad = invariants::winding_number_quadrature(p, f, 8192);
      CHECK(std::abs(phase - quad) < 1e-6);
    }
  }
}

TEST_CASE("winding: quantization on a refined grid") {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(0.0, 7 * pi), v(-1.0, 1.0);
  invariants::WindingOptions opt;
  opt.grid = 16384;
  int gapped = 0;
  for (int i = 0; i < 30; ++i) {
    const ModelParams p(u(rng), v(rng), u(rng), v(rng));
    const auto gf = invariants::gap_functions(p, 2048);
    if (std::min(gf.delta0, gf.delta_pi) < 1e-2) continue;
    ++gapped;
    for (FrameId f : {FrameId::Frame1, FrameId::Frame2}) {
      CHECK(near_integer(invariants::winding_estimate(p, f, opt).raw, 0.01));
    }
  }
  CHECK(gapped >= 10);
}

TEST_CASE("winding: errors") {
  CHECK_THROWS_AS(invariants::winding_number(ModelParams(0, 0, 0, 0), FrameId::Frame1),
                  GaplessSpectrum);
  CHECK_THROWS_AS(invariants::compute_invariants(ModelParams(0, 0, 0, 0)), GaplessSpectrum);
  // Without refinement a coarse grid cannot follow a fast-winding vector.
  invariants::WindingOptions coarse;
  coarse.grid = 16;
  coarse.max_points = 16;
  try {
    invariants::winding_number(ModelParams(6.5 * pi, 0.3, 5.5 * pi, 0.2), FrameId::Frame1, coarse);
    FAIL("expected WindingNotQuantized");
  } catch (const WindingNotQuantized& e) {
    CHECK(!near_integer(e.raw(), 0.01));
  }
}

TEST_CASE("gap functions: Hermitian reduction and gapped anchor") {
  const ModelParams p(0.5 * pi, 0, 5.5 * pi, 0);
  const auto gf = invariants::gap_functions(p, 1024);
  CHECK(gf.delta0 > 0.0);
  CHECK(gf.delta_pi > 0.0);
  REQUIRE(gf.theta.size() == 1024);
  for (std::size_t k = 0; k < gf.theta.size(); ++k) {
    const double th = gf.theta[k];
    CHECK(gf.g[k] == 0.0);
    CHECK(gf.f[k] == doctest::Approx(std::cos(p.u1() * std::sin(th / 2)) *
                                     std::cos(p.u2() * std::cos(th / 2)))
                         .epsilon(1e-12));
  }
}

TEST_CASE("gap functions: f + i g equals the quasienergy cosine") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 7 * pi), v(-1.5, 1.5);
  double worst = 0.0, worst_dist = 0.0;
  for (int i = 0; i < 10; ++i) {
    const ModelParams p(u(rng), v(rng), u(rng), v(rng));
    const auto gf = invariants::gap_functions(p, 256, false);
    for (std::size_t k = 0; k < gf.theta.size(); ++k) {
      const cplx target = bloch::cos_quasienergy(p, gf.theta[k]);
      const double scale = std::max(1.0, std::abs(target));
      worst = std::max(worst, std::abs(cplx(gf.f[k], gf.g[k]) - target) / scale);
      worst = std::max(worst, std::abs(invariants::gap_polynomial(p, gf.theta[k]) - target) / scale);
      const double d0 = std::hypot(gf.f[k] - 1.0, gf.g[k]);
      const cplx e = bloch::quasienergy(p, gf.theta[k]);
      worst_dist = std::max(worst_dist, std::abs(d0 - std::abs(std::cos(e) - 1.0)) / scale);
    }
  }
  CHECK(worst < 1e-12);
  CHECK(worst_dist < 1e-10);
}

TEST_CASE("gap functions: minima agree with a brute-force search") {
  const ModelParams p(6.5 * pi, 0.3, 0.5 * pi, 0.3);
  const auto gf = invariants::gap_functions(p, 4096);
  CHECK(gf.delta0 == doctest::Approx(oracle_gap(6.5 * pi, 0.3, 0.5 * pi, 0.3, 1.0)).epsilon(1e-6));
  CHECK(gf.delta_pi ==
        doctest::Approx(oracle_gap(6.5 * pi, 0.3, 0.5 * pi, 0.3, -1.0)).epsilon(1e-6));
}

TEST_CASE("gap functions: zero gap at the first closing along v1 = v2") {
  // Outer ternary search on the brute-force gap, seeded by a coarse v scan.
  auto d0 = [](double v) { return oracle_gap(6.5 * pi, v, 0.5 * pi, v, 1.0); };
  const int n = 301;
  std::vector<double> vs(n), ds(n);
  for (int i = 0; i < n; ++i) vs[i] = 0.01 * i, ds[i] = d0(vs[i]);
  double y1 = -1;
  for (int i = 1; i + 1 < n && y1 < 0; ++i) {
    if (!(ds[i] <= ds[i - 1] && ds[i] < ds[i + 1])) continue;
    double a = vs[i - 1], b = vs[i + 1];
    for (int it = 0; it < 200; ++it) {
      const double m1 = a + (b - a) / 3, m2 = b - (b - a) / 3;
      (d0(m1) < d0(m2) ? b : a) = (d0(m1) < d0(m2) ? m2 : m1);
    }
    if (d0(0.5 * (a + b)) < 1e-6) y1 = 0.5 * (a + b);
  }
  REQUIRE(y1 > 0);
  const auto gf = invariants::gap_functions(ModelParams(6.5 * pi, y1, 0.5 * pi, y1), 4096);
  CHECK(gf.delta0 < 1e-6);

  const auto found = invariants::locate_gap_closings(
      [](double v) { return ModelParams(6.5 * pi, v, 0.5 * pi, v); }, 0.0, 3.0, 301);
  REQUIRE_FALSE(found.empty());
  const auto first0 = std::find_if(found.begin(), found.end(),
                                   [](const GapClosing& c) { return c.kind == GapKind::Zero; });
  REQUIRE(first0 != found.end());
  CHECK(first0->value == doctest::Approx(y1).epsilon(1e-6));
}

TEST_CASE("analytic transitions: five points along v2") {
  const auto tp = invariants::analytic_transitions(0.5 * pi, 5.5 * pi, TransitionAxis::V2, 10);
  REQUIRE(tp.points.size() == 5);
  std::vector<int> ns;
  for (const auto& p : tp.points) ns.push_back(p.n);
  CHECK(ns == std::vector<int>{5, 4, 3, 2, 1});
  const auto values = tp.values();
  CHECK(std::is_sorted(values.begin(), values.end()));
  for (const auto& p : tp.points) CHECK(p.n * pi <= 5.5 * pi);
}

TEST_CASE("analytic transitions: five points along v1") {
  const auto tp = invariants::analytic_transitions(5.5 * pi, 0.5 * pi, TransitionAxis::V1, 10);
  REQUIRE(tp.points.size() == 5);
  std::vector<int> ns;
  for (const auto& p : tp.points) ns.push_back(p.n);
  CHECK(ns == std::vector<int>{5, 4, 3, 2, 1});
}

TEST_CASE("analytic transitions: substituted back") {
  for (TransitionAxis axis : {TransitionAxis::V1, TransitionAxis::V2}) {
    const double u1 = axis == TransitionAxis::V2 ? 0.5 * pi : 5.5 * pi;
    const double u2 = axis == TransitionAxis::V2 ? 5.5 * pi : 0.5 * pi;
    for (const auto& t : invariants::analytic_transitions(u1, u2, axis, 10).points) {
      const ModelParams p = axis == TransitionAxis::V2 ? ModelParams(u1, 0, u2, t.value)
                                                       : ModelParams(u1, t.value, u2, 0);
      // The closing quasiposition solves u cos(theta/2) = n pi (v2) or u sin(theta/2) = n pi (v1).
      const double u = axis == TransitionAxis::V2 ? u2 : u1;
      const double theta = axis == TransitionAxis::V2 ? 2 * std::acos(t.n * pi / u)
                                                      : 2 * std::asin(t.n * pi / u);
      CHECK(t.theta == doctest::Approx(theta));
      const cplx c = bloch::cos_quasienergy(p, theta);
      const double target = t.closes == GapKind::Zero ? 1.0 : -1.0;
      CHECK(std::abs(c - target) < 1e-10);
      const auto gf = invariants::gap_functions(p, 4096);
      CHECK(std::min(gf.delta0, gf.delta_pi) < 1e-8);
    }
  }
}

TEST_CASE("analytic transitions: each crossing moves one invariant by one") {
  for (TransitionAxis axis : {TransitionAxis::V1, TransitionAxis::V2}) {
    const double u1 = axis == TransitionAxis::V2 ? 0.5 * pi : 5.5 * pi;
    const double u2 = axis == TransitionAxis::V2 ? 5.5 * pi : 0.5 * pi;
    for (const auto& t : invariants::analytic_transitions(u1, u2, axis, 10).points) {
      auto at = [&](double v) {
        return invariants::compute_invariants(axis == TransitionAxis::V2 ? ModelParams(u1, 0, u2, v)
                                                                         : ModelParams(u1, v, u2, 0));
      };
      const auto lo = at(t.value - invariants::kTransitionProbe);
      const auto hi = at(t.value + invariants::kTransitionProbe);
      const int d0 = std::abs(lo.nu0.twice - hi.nu0.twice);
      const int dpi = std::abs(lo.nu_pi.twice - hi.nu_pi.twice);
      CHECK(d0 + dpi == 2);
      CHECK(d0 * dpi == 0);
      CHECK((t.closes == GapKind::Zero ? d0 : dpi) == 2);
    }
  }
}

TEST_CASE("analytic transitions: no solutions") {
  CHECK_THROWS_AS(invariants::analytic_transitions(0.5 * pi, 0.5 * pi, TransitionAxis::V2, 10),
                  NoSolutions);
  CHECK_THROWS_AS(invariants::analytic_transitions(5.5 * pi, 0.5 * pi, TransitionAxis::V1, 0),
                  NoSolutions);
}

TEST_CASE("scan spec validation") {
  ScanSpec s;
  s.base = ModelParams(0.5 * pi, 0, 5.5 * pi, 0);
  s.axes = {{ParamField::V1, 0, 3, 0}};
  CHECK_THROWS_AS(s.validate(), InvalidParams);
  CHECK_THROWS_AS(invariants::phase_diagram(s), InvalidParams);
  s.axes = {{ParamField::V1, 0, 3, 4}, {ParamField::V1, 0, 3, 4}};
  CHECK_THROWS_AS(s.validate(), InvalidParams);
  s.axes = {{ParamField::V1, 0, 3, 4}, {ParamField::V2, 0, 3, 4}, {ParamField::U1, 0, 3, 4}};
  CHECK_THROWS_AS(s.validate(), InvalidParams);
  s.axes = {{ParamField::V1, 0, 3, 4}, {ParamField::U2, 0, 1, 5}};
  CHECK_NOTHROW(s.validate());
  CHECK(s.cell_count() == 20);
  CHECK(s.cell_values(6) == std::vector<double>{1.0, 0.25});
  s.lock_v = true;
  const ModelParams p = s.params_at(6);
  CHECK(p.v1() == 1.0);
  CHECK(p.v2() == 1.0);
  CHECK(p.u2() == 0.25);
  CHECK(p.u1() == 0.5 * pi);
  CHECK(parse_param_field("v2") == ParamField::V2);
  CHECK_FALSE(parse_param_field("w").has_value());
}

TEST_CASE("phase diagram: v1 x v2 fields are integer and piecewise constant") {
  ScanSpec s;
  s.base = ModelParams(0.5 * pi, 0, 5.5 * pi, 0);
  s.axes = {{ParamField::V1, 0, 3, 13}, {ParamField::V2, 0, 3, 13}};
  const auto pd = invariants::phase_diagram(s, {}, 1);
  REQUIRE(pd.cells.size() == 169);
  int clean = 0;
  for (const auto& c : pd.cells) {
    if (c.flagged) {
      CHECK_FALSE(c.note.empty());
      continue;
    }
    REQUIRE(c.invariants.has_value());
    CHECK(c.invariants->nu0.is_integer());
    CHECK(c.invariants->nu_pi.is_integer());
    CHECK(c.invariants->max_round_error < 0.01);
    ++clean;
  }
  CHECK(clean > 150);
  CHECK(pd.cells.front().invariants->nu0.value() == 2.0);
  CHECK(pd.cells.front().invariants->nu_pi.value() == 3.0);

  // Thread count does not change the result.
  const auto again = invariants::phase_diagram(s, {}, 3);
  for (std::size_t i = 0; i < pd.cells.size(); ++i) {
    CHECK(again.cells[i].flagged == pd.cells[i].flagged);
    if (pd.cells[i].invariants) CHECK(again.cells[i].invariants->nu1_raw == pd.cells[i].invariants->nu1_raw);
  }
}

TEST_CASE("phase diagram: locked u x v steps by integers") {
  ScanSpec s;
  s.base = ModelParams(0.5 * pi, 0.1, 0.5 * pi, 0.1);
  s.axes = {{ParamField::U1, 0.3 * pi, 0.7 * pi, 9}, {ParamField::V1, 0.0, 0.2, 9}};
  s.lock_u = s.lock_v = true;
  const auto pd = invariants::phase_diagram(s, {}, 1);
  for (const auto& c : pd.cells) {
    REQUIRE(c.invariants.has_value());
    CHECK(c.invariants->nu_pi.twice == 0);
    CHECK(c.invariants->nu0.is_integer());
    CHECK(near_integer(c.invariants->nu1_raw, 0.01));
  }
}

TEST_CASE("golden section") {
  const double x = invariants::golden_section_minimize([](double t) { return (t - 0.3) * (t - 0.3); },
                                                       -1.0, 2.0);
  CHECK(x == doctest::Approx(0.3).epsilon(1e-7));
}
