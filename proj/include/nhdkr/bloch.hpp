#pragma once

#include <numbers>
#include <string_view>

#include "nhdkr/numerics.hpp"

namespace nhdkr {

/// Kicking parameters K_j = u_j + i v_j of the two-band on-resonance model.
///
/// The kick phase delay is fixed to pi/2 and the free-propagation phase to
/// hbar*tau = pi; both are conventions of this model rather than inputs.
class ModelParams {
public:
  static constexpr double kBeta = std::numbers::pi / 2;

  ModelParams() = default;
  ModelParams(double u1, double v1, double u2, double v2, double beta = kBeta);

  double u1() const noexcept { return u1_; }
  double v1() const noexcept { return v1_; }
  double u2() const noexcept { return u2_; }
  double v2() const noexcept { return v2_; }
  double beta() const noexcept { return kBeta; }

  cplx k1() const noexcept { return {u1_, v1_}; }
  cplx k2() const noexcept { return {u2_, v2_}; }

  bool is_hermitian() const noexcept { return v1_ == 0.0 && v2_ == 0.0; }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

private:
  double u1_ = 0.0;
  double v1_ = 0.0;
  double u2_ = 0.0;
  double v2_ = 0.0;
};

enum class FrameId { Original, Frame1, Frame2 };

std::string_view to_string(FrameId frame);

/// K1 sin(theta/2) and K2 cos(theta/2).
struct EffectiveKicks {
  cplx k1_eff;
  cplx k2_eff;
};

/// Per-theta quasienergy and complex winding vector of a symmetric frame.
struct BlochDecomposition {
  double theta = 0.0;
  cplx energy;  // principal branch, Re in [0, pi]
  cplx nx;
  cplx ny;
  FrameId frame = FrameId::Frame1;
};

namespace bloch {

using Mat2 = Eigen::Matrix2cd;

inline constexpr double kDefaultGapTol = 1e-8;

Mat2 pauli_x();
Mat2 pauli_y();
Mat2 pauli_z();

/// e^{i phi (m . sigma)} = cos(phi) + i sin(phi) (m . sigma), valid for complex
/// phi and any complex m with m.m = 1.
Mat2 euler_exp(cplx phi, cplx mx, cplx my, cplx mz = 0.0);

EffectiveKicks effective_kicks(const ModelParams& params, double theta);

/// 2x2 Floquet matrix at quasiposition theta in the requested time frame.
Mat2 floquet_operator(const ModelParams& params, double theta, FrameId frame);

/// cos(K1_eff) cos(K2_eff), the cosine of the quasienergy. Equals f + i g.
cplx cos_quasienergy(const ModelParams& params, double theta);

/// arccos on the principal branch: -i log(z + i sqrt(1 - z^2)), Re in [0, pi].
cplx principal_arccos(cplx z);

cplx quasienergy(const ModelParams& params, double theta);

/// |sin E(theta)| = sqrt|1 - cos^2 E|; zero exactly at band touchings.
double spectral_gap(const ModelParams& params, double theta);

BlochDecomposition bloch_vector(const ModelParams& params, double theta, FrameId frame,
                                double gap_tol = kDefaultGapTol);

/// The dual evolution e^{+i E^* (n . sigma)} whose left eigenvectors are the
/// right eigenvectors of the frame operator (same quasienergy).
Mat2 dual_floquet(const ModelParams& params, double theta, FrameId frame,
                  double gap_tol = kDefaultGapTol);

/// Branch-free ingredients of the winding for a symmetric frame. With N the
/// numerator of the Bloch vector (n = N / sin E) these are
///   h2        = (n_x + i n_y)^2 = (N_x + i N_y)^2 / (1 - cos^2 E)
///   integrand = (n x d_theta n)_z = (N_x N_y' - N_y N_x') / (1 - cos^2 E)
/// Both are invariant under E -> -E, so they are continuous across the branch
/// cuts of arccos. The derivative is exact (forward-mode differentiation).
struct WindingSample {
  cplx h2;
  cplx integrand;
  double gap;  // |sin E|
};

WindingSample winding_sample(const ModelParams& params, double theta, FrameId frame);

}  // namespace bloch
}  // namespace nhdkr
