// Acceptance run: one PASS/FAIL line per criterion. Pass criterion numbers as
// arguments to run a subset. Exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "nhdkr/cli.hpp"
#include "nhdkr/dynamics.hpp"
#include "nhdkr/errors.hpp"
#include "nhdkr/invariants.hpp"
#include "nhdkr/lattice.hpp"

using namespace nhdkr;
using std::numbers::pi;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void fail(const std::string& why) {
    if (pass) detail.str("");
    else detail << "; ";
    pass = false;
    detail << why;
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool near_any(double x, const std::vector<double>& points, double window) {
  return std::any_of(points.begin(), points.end(),
                     [&](double p) { return std::abs(x - p) <= window; });
}

// 1. Hermitian anchor points.
void anchors(Outcome& o) {
  struct Anchor {
    double u1, u2;
    int nu0, nu_pi;
  };
  std::ostringstream d;
  for (const Anchor a : {Anchor{0.5 * pi, 5.5 * pi, 2, 3}, Anchor{6.5 * pi, 0.5 * pi, 3, 3}}) {
    const auto t0 = Clock::now();
    const auto inv = invariants::compute_invariants(ModelParams(a.u1, 0, a.u2, 0));
    const double dt = seconds_since(t0);
    if (!d.str().empty()) d << "; ";
    d << "(" << inv.nu0.value() << "," << inv.nu_pi.value() << ") dev " << inv.max_round_error
      << " in " << dt << " s";
    if (inv.nu0.twice != 2 * a.nu0 || inv.nu_pi.twice != 2 * a.nu_pi) o.fail("wrong invariants");
    if (!(inv.max_round_error < 0.01)) o.fail("raw deviation >= 0.01");
    if (!(dt < 1.0)) o.fail("slower than 1 s");
  }
  if (o.pass) o.detail << d.str();
}

// 2. Winding scan along v2 at (0.5pi, 5.5pi), v1 = 0.
void fig1_scan(Outcome& o) {
  const auto t0 = Clock::now();
  const double u1 = 0.5 * pi, u2 = 5.5 * pi;
  const auto tp = invariants::analytic_transitions(u1, u2, TransitionAxis::V2, 10);
  const auto ps = tp.values();
  const double hi = ps.back() + 2.0;
  const int count = 200;
  std::vector<double> v(count);
  std::vector<InvariantPair> inv(count);
  for (int i = 0; i < count; ++i) {
    v[i] = hi * i / (count - 1);
    try {
      inv[i] = invariants::compute_invariants(ModelParams(u1, 0, u2, v[i]));
    } catch (const Error& e) {
      o.fail("v2 = " + std::to_string(v[i]) + ": " + e.what());
      return;
    }
    if (inv[i].half_integer()) o.fail("half-integer at v2 = " + std::to_string(v[i]));
  }

  int steps = 0;
  for (int i = 1; i < count; ++i) {
    const int crossed = static_cast<int>(std::count_if(
        ps.begin(), ps.end(), [&](double p) { return p > v[i - 1] && p <= v[i]; }));
    const int d0 = std::abs(inv[i].nu0.twice - inv[i - 1].nu0.twice);
    const int dpi = std::abs(inv[i].nu_pi.twice - inv[i - 1].nu_pi.twice);
    if (crossed == 0 && d0 + dpi != 0) o.fail("change away from analytic points at v2 = " + std::to_string(v[i]));
    if (crossed == 1) {
      ++steps;
      if (!(d0 + dpi == 2 && d0 * dpi == 0)) o.fail("step is not a single unit near v2 = " + std::to_string(v[i]));
    }
    if (crossed > 1) o.fail("two analytic points between adjacent scan points");
  }

  // Localization: the change happens inside +-1e-3 of each analytic point.
  for (double p : ps) {
    const auto lo = invariants::compute_invariants(ModelParams(u1, 0, u2, p - 1e-3));
    const auto hi_inv = invariants::compute_invariants(ModelParams(u1, 0, u2, p + 1e-3));
    const int d0 = std::abs(lo.nu0.twice - hi_inv.nu0.twice);
    const int dpi = std::abs(lo.nu_pi.twice - hi_inv.nu_pi.twice);
    if (!(d0 + dpi == 2 && d0 * dpi == 0)) o.fail("no unit step within 1e-3 of " + std::to_string(p));
  }

  if (inv.back().nu0.twice != 0 || inv.back().nu_pi.twice != 0) o.fail("scan does not end at (0,0)");
  if (steps != static_cast<int>(ps.size())) o.fail("expected " + std::to_string(ps.size()) + " steps");
  const double dt = seconds_since(t0);
  if (!(dt < 60.0)) o.fail("slower than 1 min");
  if (o.pass) {
    o.detail << count << " points on [0, " << hi << "], " << steps << " unit steps at";
    for (double p : ps) o.detail << " " << p;
    o.detail << ", ends at (0,0), start (" << inv.front().nu0.value() << ","
             << inv.front().nu_pi.value() << "), " << dt << " s";
  }
}

// 3. Every analytic transition closes a gap.
void gap_closing(Outcome& o) {
  const auto t0 = Clock::now();
  double worst = 0.0;
  int n = 0;
  struct Set {
    double u1, u2;
    TransitionAxis axis;
  };
  for (const Set s : {Set{0.5 * pi, 5.5 * pi, TransitionAxis::V2}, Set{5.5 * pi, 0.5 * pi, TransitionAxis::V1}}) {
    for (const auto& t : invariants::analytic_transitions(s.u1, s.u2, s.axis, 10).points) {
      const ModelParams p = s.axis == TransitionAxis::V2 ? ModelParams(s.u1, 0, s.u2, t.value)
                                                         : ModelParams(s.u1, t.value, s.u2, 0);
      const auto gf = invariants::gap_functions(p, 4096);
      const double m = std::min(gf.delta0, gf.delta_pi);
      worst = std::max(worst, m);
      ++n;
      if (!(m < 1e-8)) o.fail("min gap " + std::to_string(m) + " at v = " + std::to_string(t.value));
    }
  }
  if (o.pass) o.detail << n << " transitions, worst min(delta0, delta_pi) " << worst << ", "
                       << seconds_since(t0) << " s";
}

// 4. MCD against the invariants along both dynamical scans.
void mcd_convergence(Outcome& o) {
  const auto t0 = Clock::now();
  const auto fig5_p = invariants::analytic_transitions(5.5 * pi, 0.5 * pi, TransitionAxis::V1, 10).values();
  std::vector<double> fig6_p;
  for (const auto& c : invariants::locate_gap_closings(
           [](double v) { return ModelParams(0.5 * pi, v, 6.5 * pi, v); }, 0.0, 3.0, 301))
    fig6_p.push_back(c.value);

  struct Sample {
    ModelParams p;
    const char* scan;
    double v;
  };
  std::vector<Sample> samples;
  for (int i = 0; i <= 13; ++i) {
    const double v = 26.0 * i / 13;
    if (!near_any(v, fig5_p, 0.05)) samples.push_back({ModelParams(5.5 * pi, v, 0.5 * pi, 0), "v1", v});
  }
  for (int i = 0; i <= 13; ++i) {
    const double v = 3.0 * i / 13;
    if (!near_any(v, fig6_p, 0.05)) samples.push_back({ModelParams(0.5 * pi, v, 6.5 * pi, v), "v", v});
  }

  double worst = 0.0;
  int used = 0;
  for (const auto& s : samples) {
    InvariantPair inv;
    try {
      inv = invariants::compute_invariants(s.p);
    } catch (const Error&) {
      continue;  // not gapped at this sample
    }
    const auto r = dynamics::measure(s.p, McdMethod::ClosedForm, 50, 2048);
    const double dev = std::max(std::abs(r.c0 - inv.nu0.value()), std::abs(r.c_pi - inv.nu_pi.value()));
    worst = std::max(worst, dev);
    ++used;
    if (!(dev < 0.1)) {
      std::ostringstream m;
      m << s.scan << " = " << s.v << ": (c0, c_pi) = (" << r.c0 << ", " << r.c_pi << ") vs ("
        << inv.nu0.value() << ", " << inv.nu_pi.value() << ")";
      o.fail(m.str());
    }
  }
  if (used < 20) o.fail("only " + std::to_string(used) + " gapped samples");
  const double dt = seconds_since(t0);
  if (!(dt < 300.0)) o.fail("slower than 5 min");
  if (o.pass) o.detail << used << " samples, worst deviation " << worst << ", " << dt << " s";
}

// 5. Closed form and trace formula agree.
void mcd_equivalence(Outcome& o) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 7 * pi), v(-1.0, 1.0);
  double worst = 0.0;
  int done = 0;
  while (done < 10) {
    const ModelParams p(u(rng), v(rng), u(rng), v(rng));
    const auto gf = invariants::gap_functions(p, 2048);
    if (std::min(gf.delta0, gf.delta_pi) < 0.05) continue;
    for (FrameId f : {FrameId::Frame1, FrameId::Frame2}) {
      const double a = dynamics::mcd_closed_form(p, f, 50, 2048).mean();
      const double b = dynamics::mcd_trace_formula(p, f, 50, 2048).mean();
      worst = std::max(worst, std::abs(a - b));
    }
    ++done;
  }
  if (!(worst < 1e-8)) o.fail("max difference " + std::to_string(worst));
  const double dt = seconds_since(t0);
  if (!(dt < 60.0)) o.fail("slower than 1 min (" + std::to_string(dt) + " s)");
  if (o.pass) o.detail << done << " points, t = 50, grid 2048, max |closed - trace| " << worst << ", "
                       << dt << " s";
}

// 6. Edge counts along v1 = v2 at (5.5pi, 0.5pi), N = 400.
void bulk_edge(Outcome& o) {
  const auto t0 = Clock::now();
  auto family = [](double v) { return ModelParams(5.5 * pi, v, 0.5 * pi, v); };
  std::vector<double> ys;
  for (const auto& c : invariants::locate_gap_closings(family, 0.0, 3.0, 301)) ys.push_back(c.value);
  const int count = 40;
  int checked = 0, excluded = 0;
  std::ostringstream y;
  for (double x : ys) y << " " << x;
  for (int i = 0; i < count; ++i) {
    const double v = 3.0 * i / (count - 1);
    if (near_any(v, ys, 0.05)) {
      ++excluded;
      continue;
    }
    ++checked;
    try {
      const auto r = lattice::bulk_edge_check(family(v), 400);
      if (!r.consistent) {
        std::ostringstream m;
        m << "v = " << v << ": (n0, n_pi) = (" << r.count.n0 << ", " << r.count.n_pi
          << ") vs 2 x (" << r.invariants.nu0.value() << ", " << r.invariants.nu_pi.value() << ")";
        o.fail(m.str());
      }
    } catch (const Error& e) {
      o.fail("v = " + std::to_string(v) + ": " + e.what());
    }
  }
  const double dt = seconds_since(t0);
  if (!(dt < 1200.0)) o.fail("slower than 20 min");
  if (o.pass) o.detail << checked << " points consistent, " << excluded << " excluded near y =" << y.str()
                       << ", " << dt << " s";
  else o.detail << " [closings at" << y.str() << "; " << checked << " points checked, " << dt << " s]";
}

// 7. Property battery.
void verify(Outcome& o) {
  const auto t0 = Clock::now();
  cli::RunConfig c;
  c.command = "verify";
  const auto t = cli::cmd_verify(c);
  const std::size_t pass_col = t.columns.size() - 1;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (t.rows[i][pass_col] != 1.0) o.fail(t.labels[i] + " = " + cli::format_number(t.rows[i][0]));
  }
  const double dt = seconds_since(t0);
  if (!(dt < 120.0)) o.fail("slower than 2 min");
  if (o.pass) o.detail << t.rows.size() << " checks, " << dt << " s";
}

// 8. Pinned modes of the Hermitian (2, 3) phase are edge-local, and the count
// survives doubling the chain.
void locality(Outcome& o) {
  const auto t0 = Clock::now();
  const ModelParams p(0.5 * pi, 0, 5.5 * pi, 0);
  auto run = [&](std::size_t N) {
    const auto s = lattice::obc_spectrum(lattice::build_obc_floquet(p, N));
    return std::pair{lattice::count_edge_states(s.records, 1e-3, 0.01),
                     lattice::edge_mode_locality(s, 1e-3, 1e-3, 0.01)};
  };
  const auto [c400, modes] = run(400);
  double weakest = 1.0;
  for (const auto& m : modes) weakest = std::min(weakest, std::max(m.left_weight, m.right_weight));
  if (c400.n0 != 4 || c400.n_pi != 6)
    o.fail("N = 400 count (" + std::to_string(c400.n0) + ", " + std::to_string(c400.n_pi) + ")");
  if (modes.size() != 10) o.fail(std::to_string(modes.size()) + " separated modes");
  if (!(weakest > 0.95)) o.fail("weakest quarter weight " + std::to_string(weakest));
  const auto [c800, modes800] = run(800);
  if (c800.n0 != c400.n0 || c800.n_pi != c400.n_pi)
    o.fail("N = 800 count (" + std::to_string(c800.n0) + ", " + std::to_string(c800.n_pi) + ")");
  const double dt = seconds_since(t0);
  if (!(dt < 600.0)) o.fail("slower than 10 min");
  if (o.pass) o.detail << "N = 400: (" << c400.n0 << ", " << c400.n_pi << "), weakest quarter weight "
                       << weakest << "; N = 800: (" << c800.n0 << ", " << c800.n_pi << "), " << dt << " s";
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria = {
      {"Hermitian anchor points", anchors},
      {"winding scan along v2 with unit steps at the analytic points", fig1_scan},
      {"analytic transitions close a gap", gap_closing},
      {"MCD within 0.1 of the invariants at t = 50", mcd_convergence},
      {"closed-form and trace-formula MCD agree", mcd_equivalence},
      {"bulk-edge correspondence at N = 400", bulk_edge},
      {"property battery", verify},
      {"edge-state locality and size stability", locality},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!only.empty() && !only.count(id)) continue;
    Outcome o;
    try {
      criteria[k].second(o);
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    failures += !o.pass;
    std::printf("criterion %d %s: %s. %s\n", id, o.pass ? "PASS" : "FAIL", criteria[k].first,
                o.detail.str().c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
