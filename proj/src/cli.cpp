#include "nhdkr/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "json.hpp"

#include "nhdkr/errors.hpp"
#include "nhdkr/parallel.hpp"

namespace nhdkr::cli {

using std::numbers::pi;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

constexpr std::size_t kDispersionGrid = 512;
constexpr std::size_t kTransitionGrid = 4096;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_plain(std::string_view s, std::string_view what) {
  s = trim(s);
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw InvalidParams("cannot parse " + std::string(what) + " '" + std::string(s) + "'");
  }
  return x;
}

std::size_t parse_count(std::string_view s) {
  s = trim(s);
  std::size_t n = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw InvalidParams("cannot parse point count '" + std::string(s) + "'");
  }
  return n;
}

std::string_view rule_name(EdgeCountOptions::Rule r) {
  return r == EdgeCountOptions::Rule::Gap ? "gap" : "fixed";
}

std::string axes_text(const std::vector<AxisSpec>& axes) {
  std::string out;
  for (const auto& a : axes) {
    if (!out.empty()) out += ' ';
    out += std::string(to_string(a.field)) + ':' + format_number(a.min) + ':' +
           format_number(a.max) + ':' + std::to_string(a.count);
  }
  return out;
}

double flag(bool b) { return b ? 1.0 : 0.0; }

// One evaluation point per row: the scan cells, or the base point alone.
struct Points {
  std::string column;
  std::vector<double> values;
  std::vector<ModelParams> params;
};

Points scan_points(const RunConfig& c) {
  Points pts;
  if (c.axes.empty()) {
    pts.column = "point";
    pts.values = {0.0};
    pts.params = {c.params()};
    return pts;
  }
  const ScanSpec spec = c.scan();
  pts.column = std::string(to_string(spec.axes[0].field));
  for (std::size_t i = 0; i < spec.cell_count(); ++i) {
    pts.values.push_back(spec.cell_values(i)[0]);
    pts.params.push_back(spec.params_at(i));
  }
  return pts;
}

invariants::WindingOptions winding_options(const RunConfig& c) {
  invariants::WindingOptions o;
  o.grid = c.grid_or(invariants::kDefaultGrid);
  o.gap_tol = c.gap_tol;
  return o;
}

EdgeCountOptions edge_options(const RunConfig& c) {
  EdgeCountOptions o;
  o.rule = c.edge_rule;
  o.pin_tol = c.pin_tol;
  o.ipr_tol = c.ipr_tol;
  return o;
}

// Reference invariants that never throw: NaN fields and a flag on failure.
struct Reference {
  std::optional<InvariantPair> inv;
  bool flagged = true;
};

Reference reference_invariants(const ModelParams& p, const invariants::WindingOptions& o) {
  Reference r;
  try {
    r.inv = invariants::estimate_invariants(p, o);
    r.flagged = r.inv->max_round_error > o.quantization_tol || r.inv->half_integer();
  } catch (const Error&) {
    r.inv.reset();
  }
  return r;
}

double nu0_of(const Reference& r) { return r.inv ? r.inv->nu0.value() : kNaN; }
double nupi_of(const Reference& r) { return r.inv ? r.inv->nu_pi.value() : kNaN; }

void require_axes(const RunConfig& c, std::size_t lo, std::size_t hi) {
  if (c.axes.size() < lo || c.axes.size() > hi) {
    throw InvalidParams(c.command + ": expects between " + std::to_string(lo) + " and " +
                        std::to_string(hi) + " scan axes, got " + std::to_string(c.axes.size()));
  }
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// Parsing and formatting
// ---------------------------------------------------------------------------

double parse_angle(std::string_view text) {
  std::string_view s = trim(text);
  if (s.size() >= 2 && s.substr(s.size() - 2) == "pi") {
    s.remove_suffix(2);
    s = trim(s);
    if (!s.empty() && s.back() == '*') s.remove_suffix(1);
    s = trim(s);
    double factor = 1.0;
    if (s.empty() || s == "+") factor = 1.0;
    else if (s == "-") factor = -1.0;
    else factor = parse_plain(s, "angle");
    const double x = factor * pi;
    if (!std::isfinite(x)) throw InvalidParams("angle '" + std::string(text) + "' is not finite");
    return x;
  }
  const double x = parse_plain(s, "angle");
  if (!std::isfinite(x)) throw InvalidParams("angle '" + std::string(text) + "' is not finite");
  return x;
}

AxisSpec parse_scan(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ':') {
      parts.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  if (parts.size() != 4) {
    throw InvalidParams("scan '" + std::string(text) + "' must look like field:min:max:count");
  }
  const auto field = parse_param_field(trim(parts[0]));
  if (!field) throw InvalidParams("unknown scan field '" + std::string(parts[0]) + "'");
  return {*field, parse_angle(parts[1]), parse_angle(parts[2]), parse_count(parts[3])};
}

std::pair<bool, bool> parse_lock(std::string_view text) {
  bool lock_u = false, lock_v = false;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i != text.size() && text[i] != ',') continue;
    const auto item = trim(text.substr(start, i - start));
    start = i + 1;
    if (item == "u1=u2" || item == "u2=u1") lock_u = true;
    else if (item == "v1=v2" || item == "v2=v1") lock_v = true;
    else if (!item.empty()) throw InvalidParams("unknown lock '" + std::string(item) + "'");
  }
  return {lock_u, lock_v};
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// Config
// ---------------------------------------------------------------------------

ScanSpec RunConfig::scan() const {
  ScanSpec s;
  s.base = params();
  s.axes = axes;
  s.lock_u = lock_u;
  s.lock_v = lock_v;
  return s;
}

void RunConfig::validate() const {
  static const std::vector<std::string> kCommands = {
      "dispersion", "winding", "phase-diagram", "mcd", "obc", "transitions", "verify"};
  if (std::find(kCommands.begin(), kCommands.end(), command) == kCommands.end()) {
    throw InvalidParams("unknown command '" + command + "'");
  }
  (void)params();
  if (grid && *grid < (command == "dispersion" ? 1u : 2u)) {
    throw InvalidParams("grid must have at least " +
                        std::string(command == "dispersion" ? "1 point" : "2 points"));
  }
  if (t < 1) throw InvalidParams("t must be at least 1");
  if (N < 2) throw InvalidParams("N must be at least 2");
  if (n_max < 1) throw InvalidParams("n-max must be at least 1");
  for (double tol : {gap_tol, pin_tol, ipr_tol}) {
    if (!(tol > 0.0) || !std::isfinite(tol)) throw InvalidParams("tolerances must be positive");
  }
  if (!axes.empty()) scan().validate();
  if (command == "dispersion" || command == "transitions" || command == "verify") {
    require_axes(*this, 0, 0);
  } else if (command == "phase-diagram") {
    require_axes(*this, 2, 2);
  } else {
    require_axes(*this, 0, 1);
  }
}

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const {
  return {
      {"command", command},
      {"preset", preset.empty() ? "none" : preset},
      {"u1", format_number(u1)},
      {"v1", format_number(v1)},
      {"u2", format_number(u2)},
      {"v2", format_number(v2)},
      {"beta", format_number(ModelParams::kBeta)},
      {"scan", axes.empty() ? "none" : axes_text(axes)},
      {"lock", lock_u && lock_v ? "u1=u2,v1=v2" : lock_u ? "u1=u2" : lock_v ? "v1=v2" : "none"},
      {"grid", grid ? std::to_string(*grid) : "default"},
      {"t", std::to_string(t)},
      {"N", std::to_string(N)},
      {"gap_tol", format_number(gap_tol)},
      {"pin_tol", format_number(pin_tol)},
      {"ipr_tol", format_number(ipr_tol)},
      {"edge_rule", std::string(rule_name(edge_rule))},
      {"obc_mode", obc_mode == ObcMode::Count ? "count" : "spectrum"},
      {"mcd_method", std::string(to_string(mcd_method))},
      {"transition_axis", transition_axis == TransitionAxis::V1 ? "v1" : "v2"},
      {"n_max", std::to_string(n_max)},
      {"format", format == OutputFormat::Csv ? "csv" : "json"},
      {"out", out_path.empty() ? "stdout" : out_path},
      {"threads", std::to_string(threads)},
      {"deterministic", "true"},
  };
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

ResultTable cmd_dispersion(const RunConfig& c) {
  c.validate();
  const ModelParams p = c.params();
  const std::size_t grid = c.grid_or(kDispersionGrid);
  ResultTable t;
  t.columns = {"theta", "ReE", "ImE", "f", "g"};
  for (std::size_t k = 0; k < grid; ++k) {
    const double theta = -pi + 2.0 * pi * static_cast<double>(k) / static_cast<double>(grid);
    const cplx e = bloch::quasienergy(p, theta);
    const cplx fg = invariants::gap_polynomial(p, theta);
    t.rows.push_back({theta, e.real(), e.imag(), fg.real(), fg.imag()});
  }
  return t;
}

ResultTable cmd_winding(const RunConfig& c) {
  c.validate();
  const Points pts = scan_points(c);
  const auto opts = winding_options(c);
  ResultTable t;
  t.columns = {pts.column, "nu1_raw", "nu2_raw", "nu0", "nu_pi", "delta0", "delta_pi", "flagged"};
  t.rows.resize(pts.params.size());
  parallel_for(pts.params.size(), c.threads, [&](std::size_t i) {
    const ModelParams& p = pts.params[i];
    double d0 = kNaN, dpi = kNaN;
    try {
      const auto gf = invariants::gap_functions(p, opts.grid);
      d0 = gf.delta0;
      dpi = gf.delta_pi;
    } catch (const Error&) {
    }
    const Reference ref = reference_invariants(p, opts);
    t.rows[i] = {pts.values[i],
                 ref.inv ? ref.inv->nu1_raw : kNaN,
                 ref.inv ? ref.inv->nu2_raw : kNaN,
                 nu0_of(ref),
                 nupi_of(ref),
                 d0,
                 dpi,
                 flag(ref.flagged)};
  });
  return t;
}

ResultTable cmd_phase_diagram(const RunConfig& c) {
  c.validate();
  const auto diagram = invariants::phase_diagram(c.scan(), winding_options(c), c.threads);
  ResultTable t;
  t.columns = {std::string(to_string(c.axes[0].field)), std::string(to_string(c.axes[1].field)),
               "nu0", "nu_pi", "flagged"};
  for (const auto& cell : diagram.cells) {
    const bool ok = cell.invariants.has_value();
    t.rows.push_back({cell.values[0], cell.values[1], ok ? cell.invariants->nu0.value() : kNaN,
                      ok ? cell.invariants->nu_pi.value() : kNaN, flag(cell.flagged)});
  }
  return t;
}

ResultTable cmd_mcd(const RunConfig& c) {
  c.validate();
  const Points pts = scan_points(c);
  const auto opts = winding_options(c);
  const std::size_t grid = c.grid_or(dynamics::kDefaultGrid);
  ResultTable t;
  t.columns = {pts.column, "c1_bar", "c2_bar", "c0", "c_pi", "nu0", "nu_pi", "flagged"};
  t.rows.resize(pts.params.size());
  parallel_for(pts.params.size(), c.threads, [&](std::size_t i) {
    const ModelParams& p = pts.params[i];
    auto ref_opts = opts;
    ref_opts.grid = invariants::kDefaultGrid;
    const Reference ref = reference_invariants(p, ref_opts);
    try {
      const auto r = dynamics::measure(p, c.mcd_method, c.t, grid, 1);
      t.rows[i] = {pts.values[i], r.c1_bar, r.c2_bar, r.c0, r.c_pi,
                   nu0_of(ref), nupi_of(ref), flag(ref.flagged)};
    } catch (const Error&) {
      t.rows[i] = {pts.values[i], kNaN, kNaN, kNaN, kNaN, nu0_of(ref), nupi_of(ref), 1.0};
    }
  });
  return t;
}

ResultTable cmd_obc(const RunConfig& c) {
  c.validate();
  const Points pts = scan_points(c);
  ResultTable t;
  if (c.obc_mode == ObcMode::Spectrum) {
    t.columns = {pts.column, "ReE", "ImE", "ipr", "pinned"};
    std::vector<std::vector<std::vector<double>>> blocks(pts.params.size());
    parallel_for(pts.params.size(), c.threads, [&](std::size_t i) {
      try {
        const auto spec = lattice::obc_spectrum(lattice::build_obc_floquet(pts.params[i], c.N),
                                                c.pin_tol);
        for (const auto& r : spec.records) {
          blocks[i].push_back({pts.values[i], r.quasienergy.real(), r.quasienergy.imag(), r.ipr,
                               static_cast<double>(static_cast<int>(r.pinned_to))});
        }
        std::sort(blocks[i].begin(), blocks[i].end());
      } catch (const Error&) {
        blocks[i] = {{pts.values[i], kNaN, kNaN, kNaN, kNaN}};
      }
    });
    for (auto& b : blocks) {
      for (auto& row : b) t.rows.push_back(std::move(row));
    }
    return t;
  }

  t.columns = {pts.column, "n0",      "n_pi",       "two_nu0", "two_nu_pi",
               "consistent", "pin_tol0", "pin_tol_pi", "ipr_tol", "flagged"};
  t.rows.resize(pts.params.size());
  const auto opts = edge_options(c);
  parallel_for(pts.params.size(), c.threads, [&](std::size_t i) {
    const ModelParams& p = pts.params[i];
    const Reference ref = reference_invariants(p, winding_options(c));
    try {
      const auto spec = lattice::obc_spectrum(lattice::build_obc_floquet(p, c.N), c.pin_tol);
      const auto n = lattice::count_edge_states(spec, p, opts);
      const bool consistent = ref.inv && !ref.flagged && n.n0 == ref.inv->nu0.twice &&
                              n.n_pi == ref.inv->nu_pi.twice;
      t.rows[i] = {pts.values[i],     static_cast<double>(n.n0), static_cast<double>(n.n_pi),
                   2.0 * nu0_of(ref), 2.0 * nupi_of(ref),        flag(consistent),
                   n.pin_tol0,        n.pin_tol_pi,              n.ipr_tol,
                   flag(ref.flagged)};
    } catch (const Error&) {
      t.rows[i] = {pts.values[i], kNaN, kNaN, 2.0 * nu0_of(ref), 2.0 * nupi_of(ref),
                   0.0,           kNaN, kNaN, kNaN,              1.0};
    }
  });
  return t;
}

ResultTable cmd_transitions(const RunConfig& c) {
  c.validate();
  const auto tp = invariants::analytic_transitions(c.u1, c.u2, c.transition_axis, c.n_max);
  const std::size_t grid = c.grid_or(kTransitionGrid);
  ResultTable t;
  t.columns = {"n", "sign", "value", "closes_pi", "theta", "delta0", "delta_pi"};
  for (const auto& q : tp.points) {
    const ModelParams p = c.transition_axis == TransitionAxis::V2
                              ? ModelParams(c.u1, 0.0, c.u2, q.value)
                              : ModelParams(c.u1, q.value, c.u2, 0.0);
    const auto gf = invariants::gap_functions(p, grid);
    t.rows.push_back({static_cast<double>(q.n), static_cast<double>(q.sign), q.value,
                      flag(q.closes == GapKind::Pi), q.theta, gf.delta0, gf.delta_pi});
  }
  return t;
}

namespace {

struct Check {
  std::string name;
  double measured;
  double threshold;
};

std::vector<ModelParams> battery(std::size_t count) {
  std::mt19937_64 rng(20240901);
  std::uniform_real_distribution<double> u(0.0, 7.0 * pi), v(-0.6, 0.6);
  std::vector<ModelParams> out;
  for (std::size_t i = 0; i < count; ++i) out.emplace_back(u(rng), v(rng), u(rng), v(rng));
  return out;
}

double max_entry(const bloch::Mat2& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

ResultTable cmd_verify(const RunConfig& c) {
  c.validate();
  const auto params = battery(12);
  std::vector<Check> checks;

  double chiral = 0.0, similarity = 0.0, det = 0.0, gapfn = 0.0, norm = 0.0;
  const bloch::Mat2 sz = bloch::pauli_z();
  for (const auto& p : params) {
    for (int k = 0; k < 32; ++k) {
      const double theta = -pi + 2.0 * pi * (k + 0.37) / 32.0;
      const auto u0 = bloch::floquet_operator(p, theta, FrameId::Original);
      for (FrameId f : {FrameId::Frame1, FrameId::Frame2}) {
        const auto u = bloch::floquet_operator(p, theta, f);
        chiral = std::max(chiral, max_entry(sz * u * sz * u - bloch::Mat2::Identity()));
        similarity = std::max({similarity, std::abs(u.trace() - u0.trace()),
                               std::abs(u.determinant() - u0.determinant())});
        det = std::max(det, std::abs(u.determinant() - 1.0));
        const auto b = bloch::bloch_vector(p, theta, f);
        norm = std::max(norm, std::abs(b.nx * b.nx + b.ny * b.ny - 1.0));
      }
      gapfn = std::max(gapfn, std::abs(invariants::gap_polynomial(p, theta) -
                                       bloch::cos_quasienergy(p, theta)));
    }
  }
  checks.push_back({"chiral_symmetry", chiral, 1e-12});
  checks.push_back({"frame_similarity", similarity, 1e-10});
  checks.push_back({"unit_determinant", det, 1e-10});
  checks.push_back({"cosE_equals_f_plus_ig", gapfn, 1e-12});
  checks.push_back({"bloch_normalization", norm, 1e-10});

  {
    const ModelParams p(0.5 * pi, 0.1, 5.5 * pi, 0.3);
    double worst = 0.0;
    for (FrameId f : {FrameId::Frame1, FrameId::Frame2}) {
      worst = std::max(worst, std::abs(invariants::winding_estimate(p, f).raw -
                                       invariants::winding_number_quadrature(p, f)));
    }
    checks.push_back({"winding_two_routes", worst, 1e-6});
  }
  {
    const ModelParams p(5.5 * pi, 0.4, 0.5 * pi, 0.1);
    double worst = 0.0;
    for (FrameId f : {FrameId::Frame1, FrameId::Frame2}) {
      const auto a = dynamics::mcd_closed_form(p, f, 20, 256, c.gap_tol, c.threads);
      const auto b = dynamics::mcd_trace_formula(p, f, 20, 256, c.gap_tol, c.threads);
      for (std::size_t i = 0; i < a.values.size(); ++i) {
        worst = std::max(worst, std::abs(a.values[i] - b.values[i]));
      }
    }
    checks.push_back({"mcd_closed_vs_trace", worst, 1e-8});
  }
  {
    const auto spec =
        lattice::obc_spectrum(lattice::build_obc_floquet(ModelParams(5.5 * pi, 0.3, 0.5 * pi, 0.3), 40));
    checks.push_back({"obc_chiral_pairing", lattice::chiral_pairing_defect(spec), 1e-8});
  }
  {
    const auto m = lattice::build_obc_floquet(ModelParams(5.5 * pi, 0.0, 0.5 * pi, 0.0), 40);
    const auto id = ComplexMatrix::Identity(m.floquet.rows(), m.floquet.cols());
    checks.push_back({"obc_hermitian_unitarity",
                      (m.floquet.adjoint() * m.floquet - id).cwiseAbs().maxCoeff(), 1e-9});
  }
  {
    const auto r = lattice::bulk_edge_check(ModelParams(0.5 * pi, 0.0, 5.5 * pi, 0.0), 100);
    const double miss = std::abs(r.count.n0 - r.invariants.nu0.twice) +
                        std::abs(r.count.n_pi - r.invariants.nu_pi.twice);
    checks.push_back({"bulk_edge_hermitian_N100", miss, 0.5});
  }

  ResultTable t;
  t.label_column = "check";
  t.columns = {"measured", "threshold", "pass"};
  for (const auto& ch : checks) {
    const bool pass = ch.measured < ch.threshold;
    t.failed = t.failed || !pass;
    t.labels.push_back(ch.name);
    t.rows.push_back({ch.measured, ch.threshold, flag(pass)});
  }
  return t;
}

ResultTable run(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  ResultTable t;
  if (config.command == "dispersion") t = cmd_dispersion(config);
  else if (config.command == "winding") t = cmd_winding(config);
  else if (config.command == "phase-diagram") t = cmd_phase_diagram(config);
  else if (config.command == "mcd") t = cmd_mcd(config);
  else if (config.command == "obc") t = cmd_obc(config);
  else if (config.command == "transitions") t = cmd_transitions(config);
  else if (config.command == "verify") t = cmd_verify(config);
  else throw InvalidParams("unknown command '" + config.command + "'");
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  t.meta = {{"tool", "nhdkr"}, {"version", std::string(kVersion)}};
  for (auto& kv : config.echo()) t.meta.push_back(std::move(kv));
  t.meta.emplace_back("wall_time_s", format_number(std::round(wall * 1000.0) / 1000.0));
  t.meta.emplace_back("timestamp", utc_timestamp());
  return t;
}

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

std::vector<std::string_view> preset_names() {
  return {"fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8"};
}

RunConfig preset(std::string_view name) {
  RunConfig c;
  c.preset = std::string(name);
  if (name == "fig1") {
    c.command = "winding";
    c.u1 = 0.5 * pi, c.u2 = 5.5 * pi;
    c.axes = {{ParamField::V2, 0.0, 26.0, 261}};
  } else if (name == "fig2") {
    c.command = "winding";
    c.u1 = 6.5 * pi, c.u2 = 0.5 * pi;
    c.axes = {{ParamField::V1, 0.0, 3.0, 301}};
    c.lock_v = true;
  } else if (name == "fig3") {
    c.command = "phase-diagram";
    c.axes = {{ParamField::U1, 0.0, 3.0 * pi, 61}, {ParamField::V1, 0.0, 3.0, 61}};
    c.lock_u = c.lock_v = true;
  } else if (name == "fig4") {
    c.command = "phase-diagram";
    c.u1 = 0.5 * pi, c.u2 = 5.5 * pi;
    c.axes = {{ParamField::V1, 0.0, 3.0, 61}, {ParamField::V2, 0.0, 3.0, 61}};
  } else if (name == "fig5") {
    c.command = "mcd";
    c.u1 = 5.5 * pi, c.u2 = 0.5 * pi;
    c.axes = {{ParamField::V1, 0.0, 26.0, 131}};
  } else if (name == "fig6") {
    c.command = "mcd";
    c.u1 = 0.5 * pi, c.u2 = 6.5 * pi;
    c.axes = {{ParamField::V1, 0.0, 3.0, 61}};
    c.lock_v = true;
  } else if (name == "fig7" || name == "fig8") {
    c.command = "obc";
    c.u1 = 5.5 * pi, c.u2 = 0.5 * pi;
    c.axes = {{ParamField::V1, 0.0, 3.0, name == "fig7" ? 31u : 41u}};
    c.lock_v = true;
    c.obc_mode = name == "fig7" ? ObcMode::Spectrum : ObcMode::Count;
  } else {
    throw InvalidParams("unknown preset '" + std::string(name) + "'");
  }
  return c;
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

std::string render(const ResultTable& table, OutputFormat format) {
  if (format == OutputFormat::Json) {
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    for (const auto& [k, v] : table.meta) meta[k] = v;
    nlohmann::ordered_json columns = nlohmann::ordered_json::array();
    if (!table.label_column.empty()) columns.push_back(table.label_column);
    for (const auto& col : table.columns) columns.push_back(col);
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
      nlohmann::ordered_json row = nlohmann::ordered_json::array();
      if (!table.label_column.empty()) row.push_back(table.labels[i]);
      for (double x : table.rows[i]) {
        if (std::isfinite(x)) row.push_back(x);
        else row.push_back(nullptr);
      }
      rows.push_back(std::move(row));
    }
    nlohmann::ordered_json doc;
    doc["meta"] = std::move(meta);
    doc["columns"] = std::move(columns);
    doc["rows"] = std::move(rows);
    return doc.dump(1) + "\n";
  }

  std::ostringstream out;
  for (const auto& [k, v] : table.meta) out << "# " << k << ": " << v << '\n';
  bool first = true;
  auto sep = [&] {
    if (!first) out << ',';
    first = false;
  };
  if (!table.label_column.empty()) sep(), out << table.label_column;
  for (const auto& col : table.columns) sep(), out << col;
  out << '\n';
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    first = true;
    if (!table.label_column.empty()) sep(), out << table.labels[i];
    for (double x : table.rows[i]) sep(), out << format_number(x);
    out << '\n';
  }
  return out.str();
}

}  // namespace nhdkr::cli
