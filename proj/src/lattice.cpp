#include "nhdkr/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "nhdkr/errors.hpp"

namespace nhdkr {

using std::numbers::pi;

std::string_view to_string(Pinning p) {
  switch (p) {
    case Pinning::Zero: return "zero";
    case Pinning::Pi: return "pi";
    case Pinning::Bulk: return "bulk";
  }
  return "?";
}

namespace lattice {
namespace {

constexpr cplx I{0.0, 1.0};

void require_cells(std::size_t N) {
  if (N < 2) throw InvalidParams("lattice: need at least 2 unit cells, got " + std::to_string(N));
}

// Bonds a_n - b_n and b_n - a_{n+1} with amplitude t (lower triangle gets conj).
ComplexMatrix hopping(std::size_t N, cplx t) {
  require_cells(N);
  const auto dim = static_cast<Eigen::Index>(2 * N);
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  for (Eigen::Index j = 0; j + 1 < dim; ++j) {
    h(j, j + 1) = t;
    h(j + 1, j) = std::conj(t);
  }
  return h;
}

// Diagonal of e^{i phi Z}.
ComplexVector sublattice_phase(std::size_t N, double phi) {
  ComplexVector d(static_cast<Eigen::Index>(2 * N));
  for (Eigen::Index j = 0; j < d.size(); ++j) d(j) = std::exp(I * (j % 2 == 0 ? phi : -phi));
  return d;
}

Pinning classify(cplx lambda, double tol0, double tol_pi) {
  if (std::abs(lambda - 1.0) < tol0) return Pinning::Zero;
  if (std::abs(lambda + 1.0) < tol_pi) return Pinning::Pi;
  return Pinning::Bulk;
}

std::pair<double, double> quarter_weights(const ComplexVector& psi, std::size_t N) {
  const std::size_t q = std::max<std::size_t>(1, N / 4);
  double left = 0.0, right = 0.0, total = 0.0;
  for (Eigen::Index j = 0; j < psi.size(); ++j) {
    const double w = std::norm(psi(j));
    const auto cell = static_cast<std::size_t>(j / 2);
    total += w;
    if (cell < q) left += w;
    if (cell >= N - q) right += w;
  }
  return {left / total, right / total};
}

}  // namespace

ComplexMatrix hopping_b(std::size_t N) { return hopping(N, 1.0); }
ComplexMatrix hopping_a(std::size_t N) { return hopping(N, I); }

OBCModel build_obc_floquet(const ModelParams& params, std::size_t N) {
  require_cells(N);
  const ComplexMatrix kick2 = numerics::exp_scaled_hermitian(hopping_b(N), -I * params.k2() / 2.0);
  const ComplexMatrix kick1 = numerics::exp_scaled_hermitian(hopping_a(N), -I * params.k1() / 2.0);
  const ComplexMatrix middle =
      sublattice_phase(N, pi / 4).asDiagonal() * kick2 * sublattice_phase(N, -pi / 4).asDiagonal();
  return {params, N, middle * kick1};
}

double inverse_participation_ratio(const ComplexVector& psi) {
  double p2 = 0.0, p4 = 0.0;
  for (Eigen::Index j = 0; j < psi.size(); ++j) {
    const double w = std::norm(psi(j));
    p2 += w;
    p4 += w * w;
  }
  return p4 / (p2 * p2);
}

OBCSpectrum obc_spectrum(const OBCModel& model, double pin_tol) {
  // Non-normal matrices do not reach the default residual of the Hermitian
  // kernels; the residual is reported, not enforced.
  const auto eig = numerics::general_eig(model.floquet);
  OBCSpectrum out;
  out.N = model.N;
  out.pin_tol = pin_tol;
  out.residual = eig.residual;
  out.eigenvectors = eig.right_eigenvectors;
  out.records.reserve(static_cast<std::size_t>(eig.eigenvalues.size()));
  for (Eigen::Index j = 0; j < eig.eigenvalues.size(); ++j) {
    const cplx lambda = eig.eigenvalues(j);
    EdgeStateRecord r;
    r.eigenvalue = lambda;
    r.quasienergy = I * std::log(lambda);
    if (r.quasienergy.real() <= -pi) r.quasienergy.real(pi);
    const ComplexVector psi = eig.right_eigenvectors.col(j);
    r.ipr = inverse_participation_ratio(psi);
    r.pinned_to = classify(lambda, pin_tol, pin_tol);
    std::tie(r.left_weight, r.right_weight) = quarter_weights(psi, model.N);
    out.records.push_back(r);
  }
  return out;
}

EdgeCount count_edge_states(const std::vector<EdgeStateRecord>& records, double pin_tol0,
                            double pin_tol_pi, double ipr_tol) {
  EdgeCount c;
  c.N = records.size() / 2;
  c.pin_tol0 = pin_tol0;
  c.pin_tol_pi = pin_tol_pi;
  c.ipr_tol = ipr_tol;
  for (const auto& r : records) {
    if (!(r.ipr > ipr_tol)) continue;
    switch (classify(r.eigenvalue, pin_tol0, pin_tol_pi)) {
      case Pinning::Zero: ++c.n0; break;
      case Pinning::Pi: ++c.n_pi; break;
      case Pinning::Bulk: break;
    }
  }
  return c;
}

EdgeCount count_edge_states(const std::vector<EdgeStateRecord>& records, double pin_tol,
                            double ipr_tol) {
  return count_edge_states(records, pin_tol, pin_tol, ipr_tol);
}

BulkGapDistances bulk_gap_distances(const ModelParams& params, std::size_t theta_grid) {
  if (theta_grid < 2) throw InvalidParams("bulk_gap_distances: grid must have at least 2 points");
  BulkGapDistances d{std::numeric_limits<double>::infinity(),
                     std::numeric_limits<double>::infinity()};
  for (std::size_t k = 0; k < theta_grid; ++k) {
    const double theta = -pi + 2.0 * pi * static_cast<double>(k) / static_cast<double>(theta_grid);
    const cplx e = bloch::quasienergy(params, theta);
    for (const cplx lambda : {std::exp(-I * e), std::exp(I * e)}) {
      d.zero = std::min(d.zero, std::abs(lambda - 1.0));
      d.pi = std::min(d.pi, std::abs(lambda + 1.0));
    }
  }
  return d;
}

EdgeCount count_edge_states(const OBCSpectrum& spectrum, const ModelParams& params,
                            const EdgeCountOptions& options) {
  if (options.rule == EdgeCountOptions::Rule::Fixed) {
    auto c = count_edge_states(spectrum.records, options.pin_tol, options.ipr_tol);
    c.N = spectrum.N;
    return c;
  }
  const auto gap = bulk_gap_distances(params, options.theta_grid);
  const double tol0 = std::max(options.pin_tol, options.gap_fraction * gap.zero);
  const double tol_pi = std::max(options.pin_tol, options.gap_fraction * gap.pi);
  const double ipr_tol = options.ipr_factor / (2.0 * static_cast<double>(spectrum.N));
  auto c = count_edge_states(spectrum.records, tol0, tol_pi, ipr_tol);
  c.N = spectrum.N;
  return c;
}

BulkEdgeReport bulk_edge_check(const ModelParams& params, std::size_t N,
                               const EdgeCountOptions& options) {
  BulkEdgeReport out;
  out.invariants = invariants::compute_invariants(params);
  const auto spectrum = obc_spectrum(build_obc_floquet(params, N), options.pin_tol);
  out.count = count_edge_states(spectrum, params, options);
  out.consistent = out.count.n0 == out.invariants.nu0.twice &&
                   out.count.n_pi == out.invariants.nu_pi.twice;
  return out;
}

double chiral_pairing_defect(const OBCSpectrum& spectrum) {
  const std::size_t n = spectrum.records.size();
  std::vector<bool> used(n, false);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const cplx target = 1.0 / spectrum.records[i].eigenvalue;
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_j = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j]) continue;
      const double d = std::abs(spectrum.records[j].eigenvalue - target);
      if (d < best) best = d, best_j = j;
    }
    if (best_j < n) used[best_j] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

std::vector<EdgeModeLocality> edge_mode_locality(const OBCSpectrum& spectrum, double pin_tol0,
                                                 double pin_tol_pi, double ipr_tol) {
  std::vector<EdgeModeLocality> out;
  const auto rows = spectrum.eigenvectors.rows();
  for (const Pinning which : {Pinning::Zero, Pinning::Pi}) {
    std::vector<Eigen::Index> cols;
    for (std::size_t j = 0; j < spectrum.records.size(); ++j) {
      const auto& r = spectrum.records[j];
      if (r.ipr > ipr_tol && classify(r.eigenvalue, pin_tol0, pin_tol_pi) == which) {
        cols.push_back(static_cast<Eigen::Index>(j));
      }
    }
    if (cols.empty()) continue;

    ComplexMatrix span(rows, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) {
      span.col(static_cast<Eigen::Index>(k)) = spectrum.eigenvectors.col(cols[k]);
    }
    Eigen::HouseholderQR<ComplexMatrix> qr(span);
    const ComplexMatrix q =
        qr.householderQ() * ComplexMatrix::Identity(rows, static_cast<Eigen::Index>(cols.size()));

    ComplexVector cell(rows);
    for (Eigen::Index j = 0; j < rows; ++j) cell(j) = static_cast<double>(j / 2);
    const ComplexMatrix x = q.adjoint() * cell.asDiagonal() * q;
    const auto eig = numerics::hermitian_eig(0.5 * (x + x.adjoint()), 1e-8);

    for (Eigen::Index k = 0; k < eig.eigenvalues.size(); ++k) {
      const ComplexVector psi = q * eig.eigenvectors.col(k);
      const auto [left, right] = quarter_weights(psi, spectrum.N);
      out.push_back({which, eig.eigenvalues(k), left, right});
    }
  }
  return out;
}

}  // namespace lattice
}  // namespace nhdkr
