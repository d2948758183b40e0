#include "nhdkr/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "nhdkr/errors.hpp"
#include "nhdkr/parallel.hpp"

namespace nhdkr {

using std::numbers::pi;

std::vector<double> TransitionPoints::values() const {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.value);
  return out;
}

std::string_view to_string(ParamField field) {
  switch (field) {
    case ParamField::U1: return "u1";
    case ParamField::V1: return "v1";
    case ParamField::U2: return "u2";
    case ParamField::V2: return "v2";
  }
  return "?";
}

std::optional<ParamField> parse_param_field(std::string_view name) {
  if (name == "u1") return ParamField::U1;
  if (name == "v1") return ParamField::V1;
  if (name == "u2") return ParamField::U2;
  if (name == "v2") return ParamField::V2;
  return std::nullopt;
}

double AxisSpec::value(std::size_t i) const {
  if (count <= 1) return min;
  return min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1);
}

namespace {

bool is_u(ParamField f) { return f == ParamField::U1 || f == ParamField::U2; }

// Two fields that a lock ties together count as the same scan direction.
bool same_direction(ParamField a, ParamField b, bool lock_u, bool lock_v) {
  if (a == b) return true;
  if (is_u(a) != is_u(b)) return false;
  return is_u(a) ? lock_u : lock_v;
}

}  // namespace

void ScanSpec::validate() const {
  if (axes.empty() || axes.size() > 2) {
    throw InvalidParams("scan: need one or two axes, got " + std::to_string(axes.size()));
  }
  for (const auto& a : axes) {
    if (a.count == 0) {
      throw InvalidParams("scan: axis " + std::string(to_string(a.field)) + " has zero points");
    }
    if (!std::isfinite(a.min) || !std::isfinite(a.max)) {
      throw InvalidParams("scan: axis bounds must be finite");
    }
  }
  if (axes.size() == 2 && same_direction(axes[0].field, axes[1].field, lock_u, lock_v)) {
    throw InvalidParams("scan: both axes drive the same parameter");
  }
}

std::size_t ScanSpec::cell_count() const {
  std::size_t n = 1;
  for (const auto& a : axes) n *= a.count;
  return axes.empty() ? 0 : n;
}

std::vector<double> ScanSpec::cell_values(std::size_t cell) const {
  std::vector<double> out(axes.size());
  for (std::size_t k = axes.size(); k-- > 0;) {
    out[k] = axes[k].value(cell % axes[k].count);
    cell /= axes[k].count;
  }
  return out;
}

ModelParams ScanSpec::with_value(ModelParams p, ParamField field, double value) const {
  double u1 = p.u1(), v1 = p.v1(), u2 = p.u2(), v2 = p.v2();
  switch (field) {
    case ParamField::U1: u1 = value; if (lock_u) u2 = value; break;
    case ParamField::U2: u2 = value; if (lock_u) u1 = value; break;
    case ParamField::V1: v1 = value; if (lock_v) v2 = value; break;
    case ParamField::V2: v2 = value; if (lock_v) v1 = value; break;
  }
  return ModelParams(u1, v1, u2, v2);
}

ModelParams ScanSpec::params_at(std::size_t cell) const {
  const auto values = cell_values(cell);
  ModelParams p = base;
  if (lock_u) p = ModelParams(p.u1(), p.v1(), p.u1(), p.v2());
  if (lock_v) p = ModelParams(p.u1(), p.v1(), p.u2(), p.v1());
  for (std::size_t k = 0; k < axes.size(); ++k) p = with_value(p, axes[k].field, values[k]);
  return p;
}

namespace invariants {
namespace {

struct Node {
  double theta;
  bloch::WindingSample s;
};

class PhaseAccumulator {
public:
  PhaseAccumulator(const ModelParams& p, FrameId frame, const WindingOptions& o)
      : params_(p), frame_(frame), opts_(o) {}

  Node sample(double theta) {
    Node n{theta, bloch::winding_sample(params_, theta, frame_)};
    ++samples_;
    min_gap_ = std::min(min_gap_, n.s.gap);
    if (!(n.s.gap > opts_.gap_tol)) {
      throw GaplessSpectrum("winding: |sin E| = " + std::to_string(n.s.gap) +
                            " at theta = " + std::to_string(theta));
    }
    return n;
  }

  // Phase change of h^2 from a to b, bisecting while the step is too large.
  double step(const Node& a, const Node& b, int depth) {
    const double d = std::arg(b.s.h2 / a.s.h2);
    if (std::abs(d) <= pi / 2 || samples_ >= opts_.max_points || depth > 60) return d;
    const Node m = sample(0.5 * (a.theta + b.theta));
    return step(a, m, depth + 1) + step(m, b, depth + 1);
  }

  std::size_t samples() const { return samples_; }
  double min_gap() const { return min_gap_; }

private:
  const ModelParams& params_;
  FrameId frame_;
  const WindingOptions& opts_;
  std::size_t samples_ = 0;
  double min_gap_ = std::numeric_limits<double>::infinity();
};

void require_grid(std::size_t grid, const char* who) {
  if (grid < 2) throw InvalidParams(std::string(who) + ": grid must have at least 2 points");
}

double grid_theta(std::size_t k, std::size_t grid) {
  return -pi + 2.0 * pi * static_cast<double>(k) / static_cast<double>(grid);
}

InvariantPair assemble(double raw1, double raw2, std::size_t grid) {
  const int n1 = static_cast<int>(std::lround(raw1));
  const int n2 = static_cast<int>(std::lround(raw2));
  InvariantPair out = combined_invariants(n1, n2);
  out.nu1_raw = raw1;
  out.nu2_raw = raw2;
  out.grid_size = grid;
  out.max_round_error = std::max(std::abs(raw1 - n1), std::abs(raw2 - n2));
  return out;
}

double cos_gap_distance(cplx z, double target) { return std::abs(z - target); }

// Polishes the best few grid minima of |cos E - target| and returns (min, argmin).
std::pair<double, double> refined_min(const ModelParams& params, const std::vector<double>& theta,
                                      const std::vector<double>& dist, double target) {
  const std::size_t n = dist.size();
  std::vector<std::size_t> minima;
  for (std::size_t k = 0; k < n; ++k) {
    const double l = dist[(k + n - 1) % n], r = dist[(k + 1) % n];
    if (dist[k] <= l && dist[k] <= r) minima.push_back(k);
  }
  std::sort(minima.begin(), minima.end(), [&](auto a, auto b) { return dist[a] < dist[b]; });
  if (minima.size() > 4) minima.resize(4);

  const double h = 2.0 * pi / static_cast<double>(n);
  double best = std::numeric_limits<double>::infinity(), best_theta = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (dist[k] < best) best = dist[k], best_theta = theta[k];
  }
  auto fn = [&](double t) { return cos_gap_distance(gap_polynomial(params, t), target); };
  for (auto k : minima) {
    const double t = golden_section_minimize(fn, theta[k] - h, theta[k] + h);
    const double v = fn(t);
    if (v < best) best = v, best_theta = std::remainder(t, 2.0 * pi);
  }
  return {best, best_theta};
}

}  // namespace

WindingEstimate winding_estimate(const ModelParams& params, FrameId frame,
                                 const WindingOptions& options) {
  require_grid(options.grid, "winding_number");
  if (frame == FrameId::Original) {
    throw InvalidParams("winding_number: needs frame1 or frame2");
  }
  PhaseAccumulator acc(params, frame, options);
  const Node first = acc.sample(grid_theta(0, options.grid));
  Node prev = first;
  double total = 0.0;
  for (std::size_t k = 1; k <= options.grid; ++k) {
    // The seam closes on the first sample shifted by a full period.
    Node next = k == options.grid ? Node{pi, first.s} : acc.sample(grid_theta(k, options.grid));
    total += acc.step(prev, next, 0);
    prev = next;
  }
  return {total / (4.0 * pi), acc.samples(), acc.min_gap()};
}

double winding_number(const ModelParams& params, FrameId frame, const WindingOptions& options) {
  const double raw = winding_estimate(params, frame, options).raw;
  if (std::abs(raw - std::round(raw)) > options.quantization_tol) {
    throw WindingNotQuantized("winding_number: raw winding " + std::to_string(raw) +
                                  " is not quantized (near a transition?)",
                              raw);
  }
  return raw;
}

double winding_number_quadrature(const ModelParams& params, FrameId frame, std::size_t grid) {
  require_grid(grid, "winding_number_quadrature");
  double sum = 0.0;
  for (std::size_t k = 0; k < grid; ++k) {
    const auto s = bloch::winding_sample(params, grid_theta(k, grid), frame);
    if (!(s.gap > bloch::kDefaultGapTol)) {
      throw GaplessSpectrum("winding_number_quadrature: gapless at theta = " +
                            std::to_string(grid_theta(k, grid)));
    }
    sum += s.integrand.real();
  }
  return sum / static_cast<double>(grid);
}

InvariantPair combined_invariants(int nu1, int nu2) {
  InvariantPair out;
  out.nu1 = nu1;
  out.nu2 = nu2;
  out.nu1_raw = nu1;
  out.nu2_raw = nu2;
  out.nu0 = HalfInteger::from_twice(std::abs(nu1 + nu2));
  out.nu_pi = HalfInteger::from_twice(std::abs(nu1 - nu2));
  return out;
}

InvariantPair estimate_invariants(const ModelParams& params, const WindingOptions& options) {
  const double raw1 = winding_estimate(params, FrameId::Frame1, options).raw;
  const double raw2 = winding_estimate(params, FrameId::Frame2, options).raw;
  return assemble(raw1, raw2, options.grid);
}

InvariantPair compute_invariants(const ModelParams& params, const WindingOptions& options) {
  InvariantPair out = estimate_invariants(params, options);
  if (out.max_round_error > options.quantization_tol) {
    const double worst = std::abs(out.nu1_raw - out.nu1) >= std::abs(out.nu2_raw - out.nu2)
                             ? out.nu1_raw
                             : out.nu2_raw;
    throw WindingNotQuantized("compute_invariants: raw winding " + std::to_string(worst) +
                                  " is not quantized (near a transition?)",
                              worst);
  }
  return out;
}

cplx gap_polynomial(const ModelParams& p, double theta) {
  const double s = std::sin(theta / 2), c = std::cos(theta / 2);
  const double uu1 = p.u1() * s, vv1 = p.v1() * s;
  const double uu2 = p.u2() * c, vv2 = p.v2() * c;
  const double f = std::cos(uu1) * std::cos(uu2) * std::cosh(vv1) * std::cosh(vv2) -
                   std::sin(uu1) * std::sin(uu2) * std::sinh(vv1) * std::sinh(vv2);
  const double g = -(std::cos(uu1) * std::sin(uu2) * std::cosh(vv1) * std::sinh(vv2) +
                     std::sin(uu1) * std::cos(uu2) * std::sinh(vv1) * std::cosh(vv2));
  return {f, g};
}

GapFunctions gap_functions(const ModelParams& params, std::size_t grid, bool refine) {
  require_grid(grid, "gap_functions");
  GapFunctions out;
  out.theta.resize(grid);
  out.f.resize(grid);
  out.g.resize(grid);
  std::vector<double> d0(grid), dpi(grid);
  for (std::size_t k = 0; k < grid; ++k) {
    const double t = grid_theta(k, grid);
    const cplx z = gap_polynomial(params, t);
    out.theta[k] = t;
    out.f[k] = z.real();
    out.g[k] = z.imag();
    d0[k] = cos_gap_distance(z, 1.0);
    dpi[k] = cos_gap_distance(z, -1.0);
  }
  if (refine) {
    std::tie(out.delta0, out.theta0) = refined_min(params, out.theta, d0, 1.0);
    std::tie(out.delta_pi, out.theta_pi) = refined_min(params, out.theta, dpi, -1.0);
  } else {
    const auto i0 = std::min_element(d0.begin(), d0.end()) - d0.begin();
    const auto ip = std::min_element(dpi.begin(), dpi.end()) - dpi.begin();
    out.delta0 = d0[i0];
    out.theta0 = out.theta[i0];
    out.delta_pi = dpi[ip];
    out.theta_pi = out.theta[ip];
  }
  return out;
}

TransitionPoints analytic_transitions(double u1, double u2, TransitionAxis axis, int n_max) {
  if (!std::isfinite(u1) || !std::isfinite(u2)) {
    throw InvalidParams("analytic_transitions: u1, u2 must be finite");
  }
  // Scanning v2 (v1 = 0) the gap closes where u2 cos(theta/2) = n pi; scanning
  // v1 (v2 = 0) where u1 sin(theta/2) = n pi. `u` is the scanned kick's real
  // part, `w` the other one.
  const double u = axis == TransitionAxis::V2 ? u2 : u1;
  const double w = axis == TransitionAxis::V2 ? u1 : u2;
  TransitionPoints out;
  for (int n = 1; n <= n_max; ++n) {
    const double ratio = n * pi / u;
    if (!(u > 0.0) || ratio > 1.0) continue;
    const double denom = std::cos(w * std::sqrt(1.0 - ratio * ratio));
    for (int sign : {+1, -1}) {
      const double arg = sign / denom;
      if (!(arg > 1.0) || !std::isfinite(arg)) continue;
      TransitionPoint tp;
      tp.value = std::acosh(arg) / ratio;
      tp.n = n;
      tp.sign = sign;
      tp.closes = ((n % 2 == 0) ? sign : -sign) > 0 ? GapKind::Zero : GapKind::Pi;
      tp.theta = axis == TransitionAxis::V2 ? 2.0 * std::acos(ratio) : 2.0 * std::asin(ratio);
      out.points.push_back(tp);
    }
  }
  if (out.points.empty()) {
    throw NoSolutions("analytic_transitions: no real gap-closing solution for n <= " +
                      std::to_string(n_max));
  }
  std::sort(out.points.begin(), out.points.end(),
            [](const auto& a, const auto& b) { return a.value < b.value; });
  return out;
}

std::vector<GapClosing> locate_gap_closings(const std::function<ModelParams(double)>& family,
                                            double lo, double hi, std::size_t samples,
                                            std::size_t theta_grid, double accept_tol) {
  if (samples < 3) throw InvalidParams("locate_gap_closings: need at least 3 samples");
  std::vector<double> xs(samples), d0(samples), dpi(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    xs[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(samples - 1);
    const auto gf = gap_functions(family(xs[i]), theta_grid);
    d0[i] = gf.delta0;
    dpi[i] = gf.delta_pi;
  }

  std::vector<GapClosing> out;
  auto scan = [&](const std::vector<double>& d, GapKind kind) {
    auto gap_at = [&](double x) {
      const auto gf = gap_functions(family(x), theta_grid);
      return kind == GapKind::Zero ? gf.delta0 : gf.delta_pi;
    };
    for (std::size_t i = 1; i + 1 < samples; ++i) {
      if (!(d[i] <= d[i - 1] && d[i] < d[i + 1])) continue;
      const double x = golden_section_minimize(gap_at, xs[i - 1], xs[i + 1]);
      const double gap = gap_at(x);
      if (gap < accept_tol) out.push_back({x, kind, gap});
    }
  };
  scan(d0, GapKind::Zero);
  scan(dpi, GapKind::Pi);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.value < b.value; });
  return out;
}

PhaseDiagram phase_diagram(const ScanSpec& spec, const WindingOptions& options, unsigned threads) {
  spec.validate();
  PhaseDiagram out;
  out.spec = spec;
  out.theta_grid = options.grid;
  out.cells.resize(spec.cell_count());
  parallel_for(out.cells.size(), threads, [&](std::size_t i) {
    PhaseCell& cell = out.cells[i];
    cell.values = spec.cell_values(i);
    try {
      const ModelParams p = spec.params_at(i);
      const auto gf = gap_functions(p, options.grid);
      cell.delta0 = gf.delta0;
      cell.delta_pi = gf.delta_pi;
      cell.invariants = estimate_invariants(p, options);
      if (cell.invariants->max_round_error > options.quantization_tol) {
        cell.flagged = true;
        cell.note = "not quantized";
      } else if (cell.invariants->half_integer()) {
        cell.flagged = true;
        cell.note = "half-integer";
      }
    } catch (const Error& e) {
      cell.flagged = true;
      cell.note = e.what();
    }
  });
  return out;
}

double golden_section_minimize(const std::function<double(double)>& fn, double a, double b) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - r * (b - a), x2 = a + r * (b - a);
  double f1 = fn(x1), f2 = fn(x2);
  for (int it = 0; it < 200; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - r * (b - a);
      f1 = fn(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + r * (b - a);
      f2 = fn(x2);
    }
    if (!(x1 > a && x2 < b && x1 <= x2)) break;
  }
  return f1 <= f2 ? x1 : x2;
}

}  // namespace invariants
}  // namespace nhdkr
