// nhdkr: figure-level data products for the non-Hermitian on-resonance
// double-kicked rotor. See README.md for the column layout of each command.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nhdkr/cli.hpp"
#include "nhdkr/errors.hpp"

namespace {

using namespace nhdkr;

struct RawFlags {
  std::optional<std::string> preset, u1, v1, u2, v2, lock, format, out, edge_rule, mode, method,
      axis;
  std::vector<std::string> scans;
  std::optional<std::size_t> grid, N;
  std::optional<int> t, n_max;
  std::optional<double> gap_tol, pin_tol, ipr_tol;
  std::optional<unsigned> threads;
};

constexpr const char* kColumns = R"(Output columns:
  dispersion     theta, ReE, ImE, f, g
  winding        <scan>, nu1_raw, nu2_raw, nu0, nu_pi, delta0, delta_pi, flagged
  phase-diagram  <axis1>, <axis2>, nu0, nu_pi, flagged
  mcd            <scan>, c1_bar, c2_bar, c0, c_pi, nu0, nu_pi, flagged
  obc (count)    <scan>, n0, n_pi, two_nu0, two_nu_pi, consistent, pin_tol0, pin_tol_pi,
                 ipr_tol, flagged
  obc (spectrum) <scan>, ReE, ImE, ipr, pinned (0 zero, 1 pi, 2 bulk)
  transitions    n, sign, value, closes_pi, theta, delta0, delta_pi
  verify         check, measured, threshold, pass
<scan> is the scanned field, or "point" for a single parameter point.
Exit status: 0 success, 1 invalid input, 2 numerical failure, 3 verify failure.)";

void add_common(CLI::App* sub, RawFlags& f) {
  sub->add_option("--preset", f.preset, "Figure preset: fig1 ... fig8");
  sub->add_option("--u1", f.u1, "Re K1, radians or e.g. 5.5pi");
  sub->add_option("--v1", f.v1, "Im K1");
  sub->add_option("--u2", f.u2, "Re K2");
  sub->add_option("--v2", f.v2, "Im K2");
  sub->add_option("--scan", f.scans, "field:min:max:count (repeat for a second axis)");
  sub->add_option("--lock", f.lock, "u1=u2 and/or v1=v2, comma separated");
  sub->add_option("--grid", f.grid, "theta grid points");
  sub->add_option("--t", f.t, "MCD horizon in periods");
  sub->add_option("--N", f.N, "unit cells of the open chain");
  sub->add_option("--gap-tol", f.gap_tol, "minimum |sin E| for a gapped point");
  sub->add_option("--pin-tol", f.pin_tol, "pinning tolerance on |lambda -+ 1| (floor for --edge-rule gap)");
  sub->add_option("--ipr-tol", f.ipr_tol, "IPR threshold for --edge-rule fixed");
  sub->add_option("--edge-rule", f.edge_rule, "gap (default) or fixed");
  sub->add_option("--mode", f.mode, "obc: count (default) or spectrum");
  sub->add_option("--method", f.method, "mcd: closed-form (default) or trace-formula");
  sub->add_option("--axis", f.axis, "transitions: scanned imaginary part, v1 or v2");
  sub->add_option("--n-max", f.n_max, "transitions: largest n");
  sub->add_option("--format", f.format, "csv (default) or json");
  sub->add_option("--out", f.out, "output file (default: standard output)");
  sub->add_option("--threads", f.threads, "worker threads, 0 = all cores");
}

cli::RunConfig build_config(const std::string& command, const RawFlags& f) {
  cli::RunConfig c;
  if (f.preset) {
    c = cli::preset(*f.preset);
    if (c.command != command) {
      throw InvalidParams("preset " + *f.preset + " belongs to the '" + c.command + "' command");
    }
  }
  c.command = command;
  if (f.u1) c.u1 = cli::parse_angle(*f.u1);
  if (f.v1) c.v1 = cli::parse_angle(*f.v1);
  if (f.u2) c.u2 = cli::parse_angle(*f.u2);
  if (f.v2) c.v2 = cli::parse_angle(*f.v2);
  if (!f.scans.empty()) {
    c.axes.clear();
    for (const auto& s : f.scans) c.axes.push_back(cli::parse_scan(s));
  }
  if (f.lock) std::tie(c.lock_u, c.lock_v) = cli::parse_lock(*f.lock);
  if (f.grid) c.grid = *f.grid;
  if (f.t) c.t = *f.t;
  if (f.N) c.N = *f.N;
  if (f.gap_tol) c.gap_tol = *f.gap_tol;
  if (f.pin_tol) c.pin_tol = *f.pin_tol;
  if (f.ipr_tol) c.ipr_tol = *f.ipr_tol;
  if (f.edge_rule) {
    if (*f.edge_rule == "gap") c.edge_rule = EdgeCountOptions::Rule::Gap;
    else if (*f.edge_rule == "fixed") c.edge_rule = EdgeCountOptions::Rule::Fixed;
    else throw InvalidParams("--edge-rule must be gap or fixed");
  }
  if (f.mode) {
    if (*f.mode == "count") c.obc_mode = cli::ObcMode::Count;
    else if (*f.mode == "spectrum") c.obc_mode = cli::ObcMode::Spectrum;
    else throw InvalidParams("--mode must be count or spectrum");
  }
  if (f.method) {
    if (*f.method == "closed-form") c.mcd_method = McdMethod::ClosedForm;
    else if (*f.method == "trace-formula") c.mcd_method = McdMethod::TraceFormula;
    else throw InvalidParams("--method must be closed-form or trace-formula");
  }
  if (f.axis) {
    if (*f.axis == "v1") c.transition_axis = TransitionAxis::V1;
    else if (*f.axis == "v2") c.transition_axis = TransitionAxis::V2;
    else throw InvalidParams("--axis must be v1 or v2");
  }
  if (f.n_max) c.n_max = *f.n_max;
  if (f.format) {
    if (*f.format == "csv") c.format = cli::OutputFormat::Csv;
    else if (*f.format == "json") c.format = cli::OutputFormat::Json;
    else throw InvalidParams("--format must be csv or json");
  }
  if (f.out) c.out_path = *f.out;
  if (f.threads) c.threads = *f.threads;
  c.validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topological invariants, dynamics and edge states of the non-Hermitian "
               "on-resonance double-kicked rotor"};
  app.footer(kColumns);
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(cli::kVersion));

  RawFlags flags;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"dispersion", "complex quasienergy and f, g over theta"},
      {"winding", "winding numbers and gap minima at a point or along one scan axis"},
      {"phase-diagram", "invariants on a two-axis grid"},
      {"mcd", "mean chiral displacement after t periods"},
      {"obc", "open-chain spectrum or edge-state counts"},
      {"transitions", "closed-form gap closings along v1 or v2"},
      {"verify", "built-in identity and cross-check battery"},
  };
  for (const auto& [name, help] : commands) add_common(app.add_subcommand(name, help), flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const cli::RunConfig config = build_config(command, flags);
    const cli::ResultTable table = cli::run(config);
    const std::string text = cli::render(table, config.format);
    if (config.out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(config.out_path);
      if (!out) throw InvalidParams("cannot open " + config.out_path + " for writing");
      out << text;
    }
    return table.failed ? 3 : 0;
  } catch (const InvalidParams& e) {
    std::cerr << "nhdkr: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "nhdkr: " << e.what() << '\n';
    return 2;
  }
}
