#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "nhdkr/bloch.hpp"
#include "nhdkr/invariants.hpp"
#include "nhdkr/numerics.hpp"

namespace nhdkr {

/// Open chain of N unit cells; basis index 2n + s with s = 0 (a), 1 (b).
struct OBCModel {
  ModelParams params;
  std::size_t N = 0;
  ComplexMatrix floquet;
};

enum class Pinning { Zero, Pi, Bulk };

std::string_view to_string(Pinning p);

struct EdgeStateRecord {
  cplx eigenvalue;
  cplx quasienergy;  // i log(lambda), Re in (-pi, pi]
  double ipr = 0.0;
  Pinning pinned_to = Pinning::Bulk;
  double left_weight = 0.0;   // norm fraction in the first N/4 cells
  double right_weight = 0.0;  // and in the last N/4
};

struct OBCSpectrum {
  std::size_t N = 0;
  double pin_tol = 0.0;
  double residual = 0.0;
  std::vector<EdgeStateRecord> records;
  ComplexMatrix eigenvectors;  // column j belongs to records[j]
};

struct EdgeCount {
  int n0 = 0;
  int n_pi = 0;
  std::size_t N = 0;
  double pin_tol0 = 0.0;
  double pin_tol_pi = 0.0;
  double ipr_tol = 0.0;
};

/// Counting rule for edge states.
///
/// Fixed rule: pinned means |lambda -+ 1| < pin_tol and localized means
/// ipr > ipr_tol. Gap rule (default): the pinning window at 0 (pi) widens to
/// gap_fraction times the distance of the Bloch bands from lambda = 1 (-1),
/// never below pin_tol, and the IPR threshold is ipr_factor / (2N). The gap
/// rule still counts edge modes whose localization length is a sizeable
/// fraction of the chain, which split away from exact pinning at modest N.
struct EdgeCountOptions {
  enum class Rule { Fixed, Gap };

  Rule rule = Rule::Gap;
  double pin_tol = 1e-3;
  double ipr_tol = 0.01;
  double gap_fraction = 0.5;
  double ipr_factor = 1.5;
  std::size_t theta_grid = 4096;
};

struct BulkGapDistances {
  double zero = 0.0;  // min over theta and both bands of |exp(-+iE) - 1|
  double pi = 0.0;    // same for |exp(-+iE) + 1|
};

struct BulkEdgeReport {
  EdgeCount count;
  InvariantPair invariants;
  bool consistent = false;
};

/// Position of one pinned mode after separating a degenerate cluster.
struct EdgeModeLocality {
  Pinning pinned_to = Pinning::Zero;
  double centre = 0.0;  // mean cell index
  double left_weight = 0.0;
  double right_weight = 0.0;
};

namespace lattice {

inline constexpr std::size_t kDefaultCells = 400;
inline constexpr double kDefaultPinTol = 1e-3;
inline constexpr double kDefaultIprTol = 0.01;

/// Inter-cell hopping operators of the chain (Hermitian, 2N x 2N):
///   B = sum_n (|n,a><n,b| + |n,b><n+1,a|) + h.c.
///   A = i sum_n (|n,a><n,b| + |n,b><n+1,a|) + h.c.
/// with the bond leaving the last cell dropped.
ComplexMatrix hopping_b(std::size_t N);
ComplexMatrix hopping_a(std::size_t N);

/// U = e^{i pi/4 Z} e^{-i K2/2 B} e^{-i pi/4 Z} e^{-i K1/2 A}, Z = sublattice sign.
OBCModel build_obc_floquet(const ModelParams& params, std::size_t N);

double inverse_participation_ratio(const ComplexVector& psi);

/// Full eigendecomposition with one record per state. pin_tol only sets the
/// pinned_to label stored on the records.
OBCSpectrum obc_spectrum(const OBCModel& model, double pin_tol = kDefaultPinTol);

/// Fixed rule on already computed records.
EdgeCount count_edge_states(const std::vector<EdgeStateRecord>& records, double pin_tol,
                            double ipr_tol);

/// Separate pinning windows at 0 and pi.
EdgeCount count_edge_states(const std::vector<EdgeStateRecord>& records, double pin_tol0,
                            double pin_tol_pi, double ipr_tol);

BulkGapDistances bulk_gap_distances(const ModelParams& params, std::size_t theta_grid = 4096);

/// Counts under the requested rule; the Bloch bands are evaluated for the gap rule.
EdgeCount count_edge_states(const OBCSpectrum& spectrum, const ModelParams& params,
                            const EdgeCountOptions& options = {});

/// n0 == 2 nu0 and n_pi == 2 nu_pi with the invariants from the Bloch bands.
/// Throws GaplessSpectrum (or WindingNotQuantized) when the bulk is not gapped.
BulkEdgeReport bulk_edge_check(const ModelParams& params, std::size_t N = kDefaultCells,
                               const EdgeCountOptions& options = {});

/// Largest distance between lambda and its partner 1/lambda after greedy
/// nearest matching of the spectrum against its inverse.
double chiral_pairing_defect(const OBCSpectrum& spectrum);

/// Degenerate pinned modes mix the two edges arbitrarily. For each cluster
/// (0 and pi, fixed windows pin_tol0 and pin_tol_pi) the span is
/// orthonormalized and the cell-position operator diagonalized inside it, which
/// returns modes sitting on one edge each.
std::vector<EdgeModeLocality> edge_mode_locality(const OBCSpectrum& spectrum, double pin_tol0,
                                                 double pin_tol_pi, double ipr_tol);

}  // namespace lattice
}  // namespace nhdkr
