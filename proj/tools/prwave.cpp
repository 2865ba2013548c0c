// Command-line surface: verify | classify | family | ode | geodesic | domain.
// Runs are described by JSON manifests (--manifest) or assembled from flags;
// reports are JSON with sorted keys, trajectories are headered CSV.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "prwave/manifest.hpp"

namespace {

using prwave::RunManifest;

double parse_double(const std::string& text, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw prwave::ConstraintError("cannot parse " + what + " value '" + text + "'");
  }
}

std::vector<double> parse_list(const std::string& text, std::size_t n,
                               const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(item, what));
  if (out.size() != n)
    throw prwave::ConstraintError(what + " expects " + std::to_string(n) +
                                  " comma-separated values, got '" + text + "'");
  return out;
}

void parse_box(const std::string& text, prwave::Box& box) {
  std::stringstream ss(text);
  std::string range;
  int axis = 0;
  while (std::getline(ss, range, ',')) {
    if (axis >= 4) throw prwave::ConstraintError("box has more than four ranges");
    const auto colon = range.find(':');
    if (colon == std::string::npos)
      throw prwave::ConstraintError("box range '" + range + "' must be lo:hi");
    box.lo[axis] = parse_double(range.substr(0, colon), "box");
    box.hi[axis] = parse_double(range.substr(colon + 1), "box");
    ++axis;
  }
  if (axis != 4)
    throw prwave::ConstraintError("box must give four ranges umin:umax,...,ymin:ymax");
}

void parse_pair_into(const std::string& text, std::map<std::string, double>& table) {
  const auto eq = text.find('=');
  if (eq == std::string::npos)
    throw prwave::ConstraintError("expected name=value, got '" + text + "'");
  table[text.substr(0, eq)] = parse_double(text.substr(eq + 1), text.substr(0, eq));
}

struct CommonFlags {
  std::string manifest_path;
  std::string family, mode, case_, F, h, out, box, grid;
  std::vector<std::string> params, opts;
  int count = -1;
  std::uint64_t seed = prwave::kDefaultSeed;
  bool seed_given = false;
  double tol_solution = -1.0;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->set_help_flag("--help", "print help");  // frees -h for the density flag
  cmd->add_option("--manifest", flags.manifest_path, "JSON manifest path");
  cmd->add_option("--family", flags.family,
                  "family name (isotropic_pp, harmonic_plane_wave, three_step, "
                  "cahen_wallach, egorov)");
  cmd->add_option("--mode", flags.mode, "cahen_wallach mode (isotropic|nonisotropic)");
  cmd->add_option("--case", flags.case_, "egorov case (1a|1b|2a|2b)");
  cmd->add_option("--F", flags.F, "metric profile F(u,v,x,y) as an expression");
  cmd->add_option("--h", flags.h, "density h as an expression");
  cmd->add_option("--param", flags.params, "parameter name=value (repeatable)");
  cmd->add_option("--opt", flags.opts,
                  "family option name=text, e.g. fx=cos(v) (repeatable)");
  cmd->add_option("--grid", flags.grid, "grid sample counts nu,nv,nx,ny");
  cmd->add_option("--count", flags.count, "random sample count");
  cmd->add_option("--box", flags.box,
                  "sample box umin:umax,vmin:vmax,xmin:xmax,ymin:ymax");
  auto* seed_opt = cmd->add_option("--seed", flags.seed, "sampling seed");
  seed_opt->each([&flags](const std::string&) { flags.seed_given = true; });
  cmd->add_option("--tol-solution", flags.tol_solution, "solution residual tolerance");
  cmd->add_option("--out", flags.out, "report output path");
}

RunManifest build_manifest(const CommonFlags& flags, const std::string& command) {
  RunManifest m;
  if (!flags.manifest_path.empty()) m = prwave::load_manifest(flags.manifest_path);
  m.command = command;

  if (!flags.family.empty()) m.family = flags.family;
  if (!flags.mode.empty()) m.family_options["mode"] = flags.mode;
  if (!flags.case_.empty()) m.family_options["case"] = flags.case_;
  for (const auto& o : flags.opts) {
    const auto eq = o.find('=');
    if (eq == std::string::npos)
      throw prwave::ConstraintError("--opt expects name=text, got '" + o + "'");
    m.family_options[o.substr(0, eq)] = o.substr(eq + 1);
  }
  if (!flags.F.empty()) m.f_text = flags.F;
  if (!flags.h.empty()) m.h_text = flags.h;
  for (const auto& p : flags.params) parse_pair_into(p, m.params);

  if (!flags.grid.empty()) {
    const auto dims = parse_list(flags.grid, 4, "--grid");
    m.samples.strategy = prwave::SampleStrategy::Grid;
    for (int a = 0; a < 4; ++a) m.samples.grid[a] = static_cast<int>(dims[a]);
  }
  if (flags.count > 0) {
    m.samples.strategy = prwave::SampleStrategy::Random;
    m.samples.count = flags.count;
  }
  if (!flags.box.empty()) {
    parse_box(flags.box, m.samples.box);
    m.box_given = true;
  }
  if (flags.seed_given) m.samples.seed = flags.seed;
  if (flags.tol_solution > 0) m.tolerances.solution = flags.tol_solution;
  if (!flags.out.empty()) m.out = flags.out;
  return m;
}

int finish(const prwave::RunOutcome& outcome, const RunManifest& m) {
  if (m.out.empty()) {
    std::cout << prwave::report_to_string(outcome.report);
    if (!outcome.csv.empty()) std::cout << outcome.csv;
  } else {
    if (outcome.report.contains("summary") &&
        outcome.report.at("summary").contains("verdict"))
      std::cout << "verdict: "
                << outcome.report.at("summary").at("verdict").get<std::string>()
                << "\n";
    if (outcome.report.contains("classification"))
      std::cout << "branch: "
                << outcome.report.at("classification").at("branch").get<std::string>()
                << "\n";
    std::cout << "report written to " << m.out << "\n";
  }
  return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "prwave: curvature, weighted Einstein tensors and solution "
      "classification on pure radiation waves g = 2dudv + F dv^2 + dx^2 + dy^2"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);

  CommonFlags verify_flags, classify_flags, family_flags, ode_flags, geo_flags,
      dom_flags;

  auto* verify = app.add_subcommand(
      "verify", "evaluate G^h at sample points and report the solution verdict");
  add_common(verify, verify_flags);

  auto* classify = app.add_subcommand(
      "classify", "classify a (metric, density) pair into a solution branch");
  add_common(classify, classify_flags);

  auto* family = app.add_subcommand(
      "family", "materialize a built-in solution family to a manifest");
  add_common(family, family_flags);

  auto* ode =
      app.add_subcommand("ode", "integrate the density profile equation h'' = q(v) h");
  add_common(ode, ode_flags);
  std::string ode_q = "-1", ode_interval;
  double ode_h0 = 1.0, ode_h0p = 0.0, ode_v0 = 0.0;
  int ode_samples = 601;
  ode->add_option("--q", ode_q, "coefficient q(v) as an expression");
  ode->add_option("--h0", ode_h0, "h(v0)");
  ode->add_option("--h0p", ode_h0p, "h'(v0)");
  ode->add_option("--v0", ode_v0, "initial v");
  ode->add_option("--interval", ode_interval, "integration interval lo:hi");
  ode->add_option("--samples", ode_samples, "CSV sample count");

  auto* geodesic = app.add_subcommand("geodesic", "integrate a geodesic trajectory");
  add_common(geodesic, geo_flags);
  std::string geo_init;
  double geo_smax = 10.0;
  int geo_samples = 201;
  geodesic->add_option("--init", geo_init,
                       "initial state u,v,x,y,du,dv,dx,dy (8 values)");
  geodesic->add_option("--smax", geo_smax, "affine-parameter span");
  geodesic->add_option("--samples", geo_samples, "CSV sample count");

  auto* domain = app.add_subcommand(
      "domain", "locate the positivity boundary of the density along a ray");
  add_common(domain, dom_flags);
  std::string dom_base = "0,0,0,0", dom_dir = "0,0,1,0", dom_bracket = "0:1";
  domain->add_option("--base", dom_base, "ray base point u,v,x,y");
  domain->add_option("--dir", dom_dir, "ray direction du,dv,dx,dy");
  domain->add_option("--bracket", dom_bracket, "parameter bracket t0:t1");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 3;
  }

  try {
    RunManifest m;
    if (verify->parsed()) {
      m = build_manifest(verify_flags, "verify");
    } else if (classify->parsed()) {
      m = build_manifest(classify_flags, "classify");
    } else if (family->parsed()) {
      m = build_manifest(family_flags, "family");
    } else if (ode->parsed()) {
      m = build_manifest(ode_flags, "ode");
      if (ode->count("--q")) m.ode_q = ode_q;
      if (ode->count("--h0")) m.ode_h0 = ode_h0;
      if (ode->count("--h0p")) m.ode_h0p = ode_h0p;
      if (ode->count("--v0")) m.ode_v0 = ode_v0;
      if (!ode_interval.empty()) {
        const auto colon = ode_interval.find(':');
        if (colon == std::string::npos)
          throw prwave::ConstraintError("--interval expects lo:hi");
        m.ode_lo = parse_double(ode_interval.substr(0, colon), "--interval");
        m.ode_hi = parse_double(ode_interval.substr(colon + 1), "--interval");
      }
      if (ode->count("--samples")) m.ode_samples = ode_samples;
    } else if (geodesic->parsed()) {
      m = build_manifest(geo_flags, "geodesic");
      if (!geo_init.empty()) {
        const auto vals = parse_list(geo_init, 8, "--init");
        for (int a = 0; a < 8; ++a) m.geo_init[a] = vals[a];
      }
      if (geodesic->count("--smax")) m.geo_smax = geo_smax;
      if (geodesic->count("--samples")) m.geo_samples = geo_samples;
    } else if (domain->parsed()) {
      m = build_manifest(dom_flags, "domain");
      if (domain->count("--base")) {
        const auto vals = parse_list(dom_base, 4, "--base");
        for (int a = 0; a < 4; ++a) m.ray_base[a] = vals[a];
      }
      if (domain->count("--dir")) {
        const auto vals = parse_list(dom_dir, 4, "--dir");
        for (int a = 0; a < 4; ++a) m.ray_dir[a] = vals[a];
      }
      if (domain->count("--bracket")) {
        const auto colon = dom_bracket.find(':');
        if (colon == std::string::npos)
          throw prwave::ConstraintError("--bracket expects t0:t1");
        m.bracket_t0 = parse_double(dom_bracket.substr(0, colon), "--bracket");
        m.bracket_t1 = parse_double(dom_bracket.substr(colon + 1), "--bracket");
      }
    }
    const prwave::RunOutcome outcome = prwave::run_manifest(m);
    return finish(outcome, m);
  } catch (const prwave::EvalDomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const prwave::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 3;
  } catch (const prwave::MissingParameterError& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return 3;
  } catch (const prwave::ConstraintError& e) {
    std::cerr << "constraint error: " << e.what() << "\n";
    return 3;
  } catch (const prwave::OdeStepUnderflow& e) {
    std::cerr << "integration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
