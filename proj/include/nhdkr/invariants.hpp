#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nhdkr/bloch.hpp"

namespace nhdkr {

/// A rational with denominator at most 2, stored as twice its value.
struct HalfInteger {
  int twice = 0;

  static HalfInteger from_twice(int t) { return {t}; }
  double value() const noexcept { return 0.5 * twice; }
  bool is_integer() const noexcept { return twice % 2 == 0; }

  friend bool operator==(HalfInteger, HalfInteger) = default;
};

/// Frame winding numbers and the combined invariants counting 0 and pi modes.
///
/// nu0 = |nu1 + nu2| / 2 and nu_pi = |nu1 - nu2| / 2. The magnitudes are what
/// the mean chiral displacement measures and what the open-chain edge counts
/// equal (n0 = 2 nu0, n_pi = 2 nu_pi); the signs of nu1 and nu2 depend on the
/// orientation convention of the Bloch vector.
struct InvariantPair {
  double nu1_raw = 0.0;
  double nu2_raw = 0.0;
  int nu1 = 0;
  int nu2 = 0;
  HalfInteger nu0;
  HalfInteger nu_pi;
  std::size_t grid_size = 0;
  double max_round_error = 0.0;

  /// True when nu1 + nu2 is odd, i.e. nu0 and nu_pi are half-integers.
  bool half_integer() const noexcept { return !nu0.is_integer(); }
};

enum class GapKind { Zero, Pi };

/// Real and imaginary parts of cos E on a theta grid and the smallest
/// distances of cos E from +1 (gap at 0) and -1 (gap at pi).
struct GapFunctions {
  std::vector<double> theta;
  std::vector<double> f;
  std::vector<double> g;
  double delta0 = 0.0;
  double delta_pi = 0.0;
  double theta0 = 0.0;    // where delta0 is attained
  double theta_pi = 0.0;  // where delta_pi is attained
};

/// Which imaginary kicking strength an analytic transition scan moves; the
/// other one is zero.
enum class TransitionAxis { V1, V2 };

struct TransitionPoint {
  double value = 0.0;
  int n = 0;
  int sign = 1;
  GapKind closes = GapKind::Zero;
  double theta = 0.0;  // a quasiposition where the gap closes (the other is -theta)
};

struct TransitionPoints {
  std::vector<TransitionPoint> points;  // ascending by value

  std::vector<double> values() const;
};

/// A numerically located gap closing along a one-parameter family.
struct GapClosing {
  double value = 0.0;
  GapKind kind = GapKind::Zero;
  double gap = 0.0;  // refined min over theta of delta0 or delta_pi
};

// ---------------------------------------------------------------------------
// Scan specification shared by phase diagrams and the command line.
// ---------------------------------------------------------------------------

enum class ParamField { U1, V1, U2, V2 };

std::string_view to_string(ParamField field);
std::optional<ParamField> parse_param_field(std::string_view name);

struct AxisSpec {
  ParamField field = ParamField::V1;
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;

  double value(std::size_t i) const;
};

/// Base parameters plus one or two scanned fields. With lock_u (lock_v) set,
/// writing u1 or u2 (v1 or v2) writes both, which gives the K1 = K2 and
/// v1 = v2 families.
struct ScanSpec {
  ModelParams base;
  std::vector<AxisSpec> axes;
  bool lock_u = false;
  bool lock_v = false;

  void validate() const;
  std::size_t cell_count() const;
  /// Axis values of a cell; cells are ordered with the first axis outermost.
  std::vector<double> cell_values(std::size_t cell) const;
  ModelParams params_at(std::size_t cell) const;
  ModelParams with_value(ModelParams p, ParamField field, double value) const;
};

struct PhaseCell {
  std::vector<double> values;
  std::optional<InvariantPair> invariants;
  double delta0 = 0.0;
  double delta_pi = 0.0;
  bool flagged = false;
  std::string note;  // reason for the flag, empty otherwise
};

struct PhaseDiagram {
  ScanSpec spec;
  std::size_t theta_grid = 0;
  std::vector<PhaseCell> cells;
};

namespace invariants {

inline constexpr std::size_t kDefaultGrid = 4096;
inline constexpr std::size_t kMaxPoints = std::size_t{1} << 20;
inline constexpr double kQuantizationTol = 0.01;
inline constexpr double kTransitionProbe = 1e-3;

struct WindingOptions {
  std::size_t grid = kDefaultGrid;
  std::size_t max_points = kMaxPoints;
  double gap_tol = bloch::kDefaultGapTol;
  double quantization_tol = kQuantizationTol;
};

struct WindingEstimate {
  double raw = 0.0;
  std::size_t samples = 0;
  double min_gap = 0.0;
};

/// Winding of the frame's Bloch vector from the accumulated phase of
/// (n_x + i n_y)^2 over the Brillouin zone, halved. Steps whose phase jump
/// exceeds pi/2 are bisected until the point budget is spent.
///
/// Throws GaplessSpectrum when |sin E| <= gap_tol at any sample. Does not
/// check quantization.
WindingEstimate winding_estimate(const ModelParams& params, FrameId frame,
                                 const WindingOptions& options = {});

/// The raw winding; throws WindingNotQuantized when it is further than
/// quantization_tol from an integer.
double winding_number(const ModelParams& params, FrameId frame,
                      const WindingOptions& options = {});

/// Independent route: rectangle rule for the integral of (n x d_theta n)_z over
/// the periodic grid (real part).
double winding_number_quadrature(const ModelParams& params, FrameId frame,
                                 std::size_t grid = kDefaultGrid);

InvariantPair combined_invariants(int nu1, int nu2);

/// Both frame windings rounded to integers, without the quantization check;
/// max_round_error tells how trustworthy the rounding is.
InvariantPair estimate_invariants(const ModelParams& params, const WindingOptions& options = {});

/// As estimate_invariants but throws WindingNotQuantized past quantization_tol.
InvariantPair compute_invariants(const ModelParams& params, const WindingOptions& options = {});

/// f and g on a uniform grid of `grid` points over [-pi, pi). With refine set,
/// the smallest grid minima of each gap are polished by golden-section search.
GapFunctions gap_functions(const ModelParams& params, std::size_t grid = kDefaultGrid,
                           bool refine = true);

/// f + i g from the real closed forms in terms of u_j sin/cos(theta/2) and
/// v_j sin/cos(theta/2).
cplx gap_polynomial(const ModelParams& params, double theta);

/// Closed-form gap closings when one imaginary part is scanned and the other
/// is zero. Throws NoSolutions when no (n, sign) admits a real solution.
TransitionPoints analytic_transitions(double u1, double u2, TransitionAxis axis, int n_max);

/// Locates local minima of the refined gap functions along `family` over
/// [lo, hi] and keeps those whose polished minimum is below accept_tol.
std::vector<GapClosing> locate_gap_closings(const std::function<ModelParams(double)>& family,
                                            double lo, double hi, std::size_t samples,
                                            std::size_t theta_grid = 2048,
                                            double accept_tol = 1e-6);

/// Invariants on every cell of a 1- or 2-axis scan. Failures are recorded per
/// cell (flagged) instead of aborting.
PhaseDiagram phase_diagram(const ScanSpec& spec, const WindingOptions& options = {},
                           unsigned threads = 0);

/// Golden-section minimization of a unimodal function on [a, b]; returns the
/// abscissa. Runs until the bracket stops shrinking in floating point.
double golden_section_minimize(const std::function<double(double)>& fn, double a, double b);

}  // namespace invariants
}  // namespace nhdkr
