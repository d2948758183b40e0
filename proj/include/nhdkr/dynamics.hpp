#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "nhdkr/bloch.hpp"

namespace nhdkr {

enum class McdMethod { ClosedForm, TraceFormula };

std::string_view to_string(McdMethod method);

/// Chiral displacement C_alpha(t') for t' = 1..t of one frame, and its mean.
///
/// The initial state is the uniform sublattice mixture (|0><0| x sigma_0) / 2
/// at unit cell 0; it is fixed and enters only through the formulas.
struct ChiralDisplacementSeries {
  ModelParams params;
  FrameId frame = FrameId::Frame1;
  McdMethod method = McdMethod::ClosedForm;
  int t_periods = 0;
  std::size_t theta_grid = 0;
  std::vector<double> values;  // values[t' - 1]

  double mean() const;
};

/// Time-averaged chiral displacements of the two frames and the combinations
/// that estimate the invariants: c0 = |c1 + c2|, c_pi = |c1 - c2|.
struct MCDReport {
  ModelParams params;
  McdMethod method = McdMethod::ClosedForm;
  int t_periods = 0;
  std::size_t theta_grid = 0;
  double c1_bar = 0.0;
  double c2_bar = 0.0;
  double c0 = 0.0;
  double c_pi = 0.0;
};

namespace dynamics {

inline constexpr int kDefaultPeriods = 50;
inline constexpr std::size_t kDefaultGrid = 2048;

/// Weight |sin z|^2 / (|sin z|^2 + |cos z|^2) for z = E t'. Equals
/// (1 - cos(2 Re z) / cosh(2 Im z)) / 2, lies in [0, 1] and tends to 1/2.
double displacement_weight(cplx energy, int t);

/// Average over the periodic theta grid of (n x d_theta n)_z times the weight.
/// The Bloch-vector derivative is exact (forward-mode), so the only
/// discretization is the spectrally accurate rectangle rule.
ChiralDisplacementSeries mcd_closed_form(const ModelParams& params, FrameId frame,
                                         int t = kDefaultPeriods,
                                         std::size_t grid = kDefaultGrid,
                                         double gap_tol = bloch::kDefaultGapTol,
                                         unsigned threads = 0);

/// Numerator Tr[Ut^dagger(t) sigma_z i d_theta U^t] and denominator
/// Tr[Ut^dagger(t) U^t] of the trace formula at one theta. Both matrices are
/// multiplied by exp(-|Im E| t), which cancels in the ratio and keeps the
/// entries of order one for long horizons.
struct TraceTerms {
  cplx numerator;
  cplx denominator;
};

TraceTerms mcd_trace_terms(const ModelParams& params, double theta, FrameId frame, int t,
                           double gap_tol = bloch::kDefaultGapTol);

/// The same series through the trace formula. The theta derivative of the
/// evolution matrix is taken by Richardson-extrapolated central differences
/// (Ridders) with a step shrinking with t, on the same theta nodes as the
/// closed form.
ChiralDisplacementSeries mcd_trace_formula(const ModelParams& params, FrameId frame,
                                           int t = kDefaultPeriods,
                                           std::size_t grid = kDefaultGrid,
                                           double gap_tol = bloch::kDefaultGapTol,
                                           unsigned threads = 0);

/// c0 and c_pi from a frame-1 and a frame-2 series. Throws MismatchedReports
/// unless the two share params, horizon, grid and method and cover both frames.
MCDReport extract_invariants(const ChiralDisplacementSeries& frame1,
                             const ChiralDisplacementSeries& frame2);

/// Plain version for precomputed averages.
MCDReport extract_invariants(double c1_bar, double c2_bar);

/// Both frames with one method, combined. threads = 0 uses every core; the
/// theta sum is blocked so results are identical for any thread count.
MCDReport measure(const ModelParams& params, McdMethod method, int t = kDefaultPeriods,
                  std::size_t grid = kDefaultGrid, unsigned threads = 0);

}  // namespace dynamics
}  // namespace nhdkr
