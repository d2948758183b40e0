#include "nhdkr/bloch.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "jet.hpp"
#include "nhdkr/errors.hpp"

namespace nhdkr {

using std::numbers::pi;

ModelParams::ModelParams(double u1, double v1, double u2, double v2, double beta)
    : u1_(u1), v1_(v1), u2_(u2), v2_(v2) {
  if (!std::isfinite(u1) || !std::isfinite(v1) || !std::isfinite(u2) || !std::isfinite(v2)) {
    throw InvalidParams("ModelParams: kicking strengths must be finite");
  }
  if (beta != kBeta) {
    throw InvalidParams("ModelParams: only the phase delay beta = pi/2 is supported");
  }
}

std::string_view to_string(FrameId frame) {
  switch (frame) {
    case FrameId::Original: return "original";
    case FrameId::Frame1: return "frame1";
    case FrameId::Frame2: return "frame2";
  }
  return "unknown";
}

namespace bloch {
namespace {

constexpr cplx I{0.0, 1.0};

void require_symmetric_frame(FrameId frame, const char* who) {
  if (frame == FrameId::Original) {
    throw InvalidParams(std::string(who) + ": needs a symmetric time frame (frame1 or frame2)");
  }
}

// Numerators of the Bloch vector, n = N / sin E, and cos E, all as jets in theta.
struct BlochNumerators {
  detail::Jet nx;
  detail::Jet ny;
  detail::Jet cos_e;
};

BlochNumerators numerators(const ModelParams& p, double theta, FrameId frame) {
  using detail::Jet;
  const Jet half = 0.5 * Jet::variable(theta);
  const Jet s = sin(half);
  const Jet c = cos(half);
  const Jet k1 = p.k1() * s;
  const Jet k2 = p.k2() * c;
  const Jet ck1 = cos(k1), sk1 = sin(k1), ck2 = cos(k2), sk2 = sin(k2);

  BlochNumerators out;
  out.cos_e = ck1 * ck2;
  if (frame == FrameId::Frame1) {
    out.nx = c * ck1 * sk2 + s * sk1;
    out.ny = s * ck1 * sk2 - c * sk1;
  } else {
    out.nx = -(c * sk1 * ck2) + s * sk2;
    out.ny = -(s * sk1 * ck2) - c * sk2;
  }
  return out;
}

}  // namespace

Mat2 pauli_x() {
  Mat2 m;
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

Mat2 pauli_y() {
  Mat2 m;
  m << 0.0, -I, I, 0.0;
  return m;
}

Mat2 pauli_z() {
  Mat2 m;
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

Mat2 euler_exp(cplx phi, cplx mx, cplx my, cplx mz) {
  const cplx c = std::cos(phi);
  const cplx is = I * std::sin(phi);
  Mat2 m;
  m << c + is * mz, is * (mx - I * my), is * (mx + I * my), c - is * mz;
  return m;
}

EffectiveKicks effective_kicks(const ModelParams& params, double theta) {
  return {params.k1() * std::sin(theta / 2), params.k2() * std::cos(theta / 2)};
}

Mat2 floquet_operator(const ModelParams& params, double theta, FrameId frame) {
  const auto [k1, k2] = effective_kicks(params, theta);
  const double c = std::cos(theta / 2);
  const double s = std::sin(theta / 2);
  switch (frame) {
    case FrameId::Original: {
      const Mat2 qp = euler_exp(pi / 4, 0.0, 0.0, 1.0);
      const Mat2 qm = euler_exp(-pi / 4, 0.0, 0.0, 1.0);
      return qp * euler_exp(-k2, c, s) * qm * euler_exp(k1, c, s);
    }
    case FrameId::Frame1: {
      const Mat2 half = euler_exp(-k2 / 2.0, c, s);
      return half * euler_exp(-k1, s, -c) * half;
    }
    case FrameId::Frame2: {
      const Mat2 half = euler_exp(k1 / 2.0, c, s);
      return half * euler_exp(-k2, s, -c) * half;
    }
  }
  throw InvalidParams("floquet_operator: unknown frame");
}

cplx cos_quasienergy(const ModelParams& params, double theta) {
  const auto [k1, k2] = effective_kicks(params, theta);
  return std::cos(k1) * std::cos(k2);
}

cplx principal_arccos(cplx z) {
  // Same branch as -i log(z + i sqrt(1 - z^2)), which cancels for large |z|.
  return std::acos(z);
}

cplx quasienergy(const ModelParams& params, double theta) {
  return principal_arccos(cos_quasienergy(params, theta));
}

double spectral_gap(const ModelParams& params, double theta) {
  const cplx z = cos_quasienergy(params, theta);
  return std::sqrt(std::abs(1.0 - z * z));
}

BlochDecomposition bloch_vector(const ModelParams& params, double theta, FrameId frame,
                                double gap_tol) {
  require_symmetric_frame(frame, "bloch_vector");
  const auto num = numerators(params, theta, frame);
  const cplx energy = principal_arccos(num.cos_e.v);
  const cplx sin_e = std::sin(energy);
  if (!(std::abs(sin_e) > gap_tol)) {
    throw GaplessPoint("bloch_vector: |sin E| = " + std::to_string(std::abs(sin_e)) +
                       " at theta = " + std::to_string(theta));
  }
  return {theta, energy, num.nx.v / sin_e, num.ny.v / sin_e, frame};
}

Mat2 dual_floquet(const ModelParams& params, double theta, FrameId frame, double gap_tol) {
  const auto b = bloch_vector(params, theta, frame, gap_tol);
  const cplx e_conj = std::conj(b.energy);
  return euler_exp(e_conj, b.nx, b.ny);
}

WindingSample winding_sample(const ModelParams& params, double theta, FrameId frame) {
  require_symmetric_frame(frame, "winding_sample");
  const auto num = numerators(params, theta, frame);
  const cplx sin2 = 1.0 - num.cos_e.v * num.cos_e.v;
  const cplx h = num.nx.v + I * num.ny.v;
  WindingSample out;
  out.gap = std::sqrt(std::abs(sin2));
  out.h2 = h * h / sin2;
  out.integrand = (num.nx.v * num.ny.d - num.ny.v * num.nx.d) / sin2;
  return out;
}

}  // namespace bloch
}  // namespace nhdkr
