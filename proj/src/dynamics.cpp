#include "nhdkr/dynamics.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "nhdkr/errors.hpp"
#include "nhdkr/parallel.hpp"

namespace nhdkr {

using std::numbers::pi;

std::string_view to_string(McdMethod method) {
  return method == McdMethod::ClosedForm ? "closed-form" : "trace-formula";
}

double ChiralDisplacementSeries::mean() const {
  if (values.empty()) return 0.0;
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

namespace dynamics {
namespace {

constexpr cplx I{0.0, 1.0};
using bloch::Mat2;

void check_inputs(const ModelParams&, FrameId frame, int t, std::size_t grid, const char* who) {
  if (t < 1) throw InvalidParams(std::string(who) + ": t must be at least 1");
  if (grid < 2) throw InvalidParams(std::string(who) + ": grid must have at least 2 points");
  if (frame == FrameId::Original) throw InvalidParams(std::string(who) + ": needs frame1 or frame2");
}

double node(std::size_t k, std::size_t grid) {
  return -pi + 2.0 * pi * static_cast<double>(k) / static_cast<double>(grid);
}

// e^{-s} cos z and e^{-s} sin z without forming the possibly huge unscaled values.
std::pair<cplx, cplx> scaled_cos_sin(cplx z, double s) {
  const cplx a = std::exp(I * z - s);
  const cplx b = std::exp(-I * z - s);
  return {(a + b) / 2.0, (a - b) / (2.0 * I)};
}

// e^{-s} U^t = e^{-s} [cos(E t) - i sin(E t) n.sigma].
Mat2 scaled_power(const BlochDecomposition& b, int t, double s) {
  const auto [c, sn] = scaled_cos_sin(b.energy * static_cast<double>(t), s);
  return Mat2::Identity() * c - (I * sn) * (b.nx * bloch::pauli_x() + b.ny * bloch::pauli_y());
}

double max_abs(const Mat2& m) { return m.cwiseAbs().maxCoeff(); }

// Ridders' extrapolated central difference of a matrix-valued function.
template <typename F>
Mat2 ridders_derivative(F&& fn, double x, double h) {
  constexpr int kTable = 10;
  constexpr double kCon = 1.4, kCon2 = kCon * kCon, kSafe = 2.0;
  std::array<std::array<Mat2, kTable>, kTable> a;
  a[0][0] = (fn(x + h) - fn(x - h)) / (2.0 * h);
  Mat2 best = a[0][0];
  double err = std::numeric_limits<double>::max();
  for (int i = 1; i < kTable; ++i) {
    h /= kCon;
    a[0][i] = (fn(x + h) - fn(x - h)) / (2.0 * h);
    double fac = kCon2;
    for (int j = 1; j <= i; ++j) {
      a[j][i] = (a[j - 1][i] * fac - a[j - 1][i - 1]) / (fac - 1.0);
      fac *= kCon2;
      const double e = std::max(max_abs(a[j][i] - a[j - 1][i]), max_abs(a[j][i] - a[j - 1][i - 1]));
      if (e <= err) {
        err = e;
        best = a[j][i];
      }
    }
    if (max_abs(a[i][i] - a[i - 1][i - 1]) >= kSafe * err) break;
  }
  return best;
}

BlochDecomposition checked_bloch(const ModelParams& p, double theta, FrameId frame, double tol) {
  try {
    return bloch::bloch_vector(p, theta, frame, tol);
  } catch (const GaplessPoint& e) {
    throw GaplessSpectrum(std::string("mcd: ") + e.what());
  }
}

// Sums per-theta contributions in fixed blocks so the result does not depend
// on the thread count.
template <typename PerTheta>
std::vector<double> theta_average(int t, std::size_t grid, unsigned threads, PerTheta&& per_theta) {
  constexpr std::size_t kBlock = 32;
  const std::size_t blocks = (grid + kBlock - 1) / kBlock;
  std::vector<std::vector<double>> partial(blocks, std::vector<double>(static_cast<std::size_t>(t)));
  parallel_for(blocks, threads, [&](std::size_t b) {
    for (std::size_t k = b * kBlock; k < std::min(grid, (b + 1) * kBlock); ++k) {
      per_theta(node(k, grid), partial[b]);
    }
  });
  std::vector<double> out(static_cast<std::size_t>(t), 0.0);
  for (const auto& p : partial) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += p[i];
  }
  for (double& v : out) v /= static_cast<double>(grid);
  return out;
}

}  // namespace

double displacement_weight(cplx energy, int t) {
  const double a = 2.0 * energy.real() * t;
  const double b = 2.0 * energy.imag() * t;
  return 0.5 * (1.0 - std::cos(a) / std::cosh(b));
}

ChiralDisplacementSeries mcd_closed_form(const ModelParams& params, FrameId frame, int t,
                                         std::size_t grid, double gap_tol,
                                         unsigned threads) {
  check_inputs(params, frame, t, grid, "mcd_closed_form");
  auto values = theta_average(t, grid, threads, [&](double theta, std::vector<double>& acc) {
    const auto s = bloch::winding_sample(params, theta, frame);
    if (!(s.gap > gap_tol)) {
      throw GaplessSpectrum("mcd_closed_form: gapless at theta = " + std::to_string(theta));
    }
    const cplx energy = bloch::quasienergy(params, theta);
    for (int tp = 1; tp <= t; ++tp) {
      acc[tp - 1] += (s.integrand * displacement_weight(energy, tp)).real();
    }
  });
  return {params, frame, McdMethod::ClosedForm, t, grid, std::move(values)};
}

TraceTerms mcd_trace_terms(const ModelParams& params, double theta, FrameId frame, int t,
                           double gap_tol) {
  const auto centre = checked_bloch(params, theta, frame, gap_tol);
  const double s = std::abs(centre.energy.imag()) * t;

  const auto [c, sn] = scaled_cos_sin(centre.energy * static_cast<double>(t), s);
  const Mat2 n_sigma = centre.nx * bloch::pauli_x() + centre.ny * bloch::pauli_y();
  const Mat2 dual = Mat2::Identity() * std::conj(c) + (I * std::conj(sn)) * n_sigma;
  const Mat2 power = Mat2::Identity() * c - (I * sn) * n_sigma;

  const double kick = std::abs(params.k1()) + std::abs(params.k2());
  const double h0 = 0.5 / (1.0 + t * kick);
  const Mat2 d = ridders_derivative(
      [&](double x) { return scaled_power(checked_bloch(params, x, frame, gap_tol), t, s); },
      theta, h0);

  return {(dual * bloch::pauli_z() * (I * d)).trace(), (dual * power).trace()};
}

ChiralDisplacementSeries mcd_trace_formula(const ModelParams& params, FrameId frame, int t,
                                           std::size_t grid, double gap_tol,
                                           unsigned threads) {
  check_inputs(params, frame, t, grid, "mcd_trace_formula");
  auto values = theta_average(t, grid, threads, [&](double theta, std::vector<double>& acc) {
    for (int tp = 1; tp <= t; ++tp) {
      const auto terms = mcd_trace_terms(params, theta, frame, tp, gap_tol);
      acc[tp - 1] += (terms.numerator / terms.denominator).real();
    }
  });
  return {params, frame, McdMethod::TraceFormula, t, grid, std::move(values)};
}

MCDReport extract_invariants(double c1_bar, double c2_bar) {
  MCDReport r;
  r.c1_bar = c1_bar;
  r.c2_bar = c2_bar;
  r.c0 = std::abs(c1_bar + c2_bar);
  r.c_pi = std::abs(c1_bar - c2_bar);
  return r;
}

MCDReport extract_invariants(const ChiralDisplacementSeries& frame1,
                             const ChiralDisplacementSeries& frame2) {
  if (frame1.frame != FrameId::Frame1 || frame2.frame != FrameId::Frame2) {
    throw MismatchedReports("extract_invariants: expected one frame1 and one frame2 series");
  }
  if (!(frame1.params == frame2.params) || frame1.t_periods != frame2.t_periods ||
      frame1.theta_grid != frame2.theta_grid || frame1.method != frame2.method) {
    throw MismatchedReports("extract_invariants: series differ in params, horizon, grid or method");
  }
  MCDReport r = extract_invariants(frame1.mean(), frame2.mean());
  r.params = frame1.params;
  r.method = frame1.method;
  r.t_periods = frame1.t_periods;
  r.theta_grid = frame1.theta_grid;
  return r;
}

MCDReport measure(const ModelParams& params, McdMethod method, int t, std::size_t grid,
                  unsigned threads) {
  auto run = [&](FrameId f) {
    return method == McdMethod::ClosedForm
               ? mcd_closed_form(params, f, t, grid, bloch::kDefaultGapTol, threads)
               : mcd_trace_formula(params, f, t, grid, bloch::kDefaultGapTol, threads);
  };
  return extract_invariants(run(FrameId::Frame1), run(FrameId::Frame2));
}

}  // namespace dynamics
}  // namespace nhdkr
