// End-to-end tests driving the installed binary through std::system; the
// build passes its location and the manifest directory as macros.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <set>
#include <string>
#include <cmath>

#include <nlohmann/json.hpp>

#include "doctest.h"

namespace {

using nlohmann::json;

std::string cli_path() { return PRWAVE_CLI_PATH; }
std::string manifest_dir() { return PRWAVE_MANIFEST_DIR; }
std::string work_dir() {
  static const std::string dir = [] {
    std::string d = "cli_scratch";
    if (std::system(("mkdir -p " + d).c_str()) != 0)
      throw std::runtime_error("cannot create scratch directory");
    return d;
  }();
  return dir;
}

int run(const std::string& args, std::string* stdout_text = nullptr) {
  const std::string out_file = work_dir() + "/stdout.txt";
  const std::string cmd = cli_path() + " " + args + " > " + out_file + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  if (stdout_text) {
    std::ifstream in(out_file);
    std::stringstream ss;
    ss << in.rdbuf();
    *stdout_text = ss.str();
  }
  return WEXITSTATUS(status);
}

json run_json(const std::string& args, int expected_exit) {
  std::string text;
  const int code = run(args, &text);
  CHECK(code == expected_exit);
  return json::parse(text);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <class Container>
std::set<std::string> keys(const Container& j) {
  std::set<std::string> out;
  for (const auto& [k, v] : j.items()) out.insert(k);
  return out;
}

}  // namespace

TEST_CASE("verify: solution family exits 0 with the pinned report schema") {
  const json rep = run_json(
      "verify --family cahen_wallach --mode isotropic --param a=-1 --param b=-1 "
      "--param c1=1 --param c2=1 --count 20",
      0);
  CHECK(keys(rep) == std::set<std::string>{"command", "manifest", "points",
                                           "schema_version", "summary"});
  CHECK(rep["schema_version"] == 1);
  CHECK(keys(rep["summary"]) ==
        std::set<std::string>{"is_solution", "max_div_gh", "max_residual",
                              "sample_count", "tau_spread", "tau_value", "tolerance",
                              "verdict"});
  CHECK(rep["summary"]["verdict"] == "solution");
  REQUIRE(rep["points"].size() == 20);
  CHECK(keys(rep["points"][0]) ==
        std::set<std::string>{"div_gh", "gh", "h", "point", "residual", "tau"});
  CHECK(keys(rep["points"][0]["gh"]) ==
        std::set<std::string>{"uu", "uv", "ux", "uy", "vv", "vx", "vy", "xx", "xy",
                              "yy"});
}

TEST_CASE("verify: cubic profile with affine density is a non-solution (exit 1)") {
  const json rep = run_json("verify --F x^3 --h 1+v", 1);
  CHECK(rep["summary"]["verdict"] == "non-solution");
  CHECK(rep["summary"]["max_residual"].get<double>() == 1.0);
  // Frozen regression: the first sampled point under the default seed.
  const auto& p0 = rep["points"][0];
  CHECK(p0["gh"]["vv"].get<double>() ==
        doctest::Approx(-0.3359245877850354).epsilon(1e-14));
  CHECK(p0["tau"].get<double>() == 0.0);
}

TEST_CASE("verify: nonpositive density exits 2") {
  std::string text;
  CHECK(run("verify --F 0 --h -1 --count 5", &text) == 2);
}

TEST_CASE("parse and constraint failures exit 3") {
  CHECK(run("verify --F \"2*u*d v\" --h 1") == 3);
  CHECK(run("family --family egorov --case 9x") == 3);
  // Isotropic mode requires a + b < 0.
  CHECK(run("family --family cahen_wallach --mode isotropic --param a=1 --param b=1") ==
        3);
  CHECK(run("verify --F x^2 --h 'exp(q*v)'") == 3);  // unbound parameter
}

TEST_CASE("classify: branch labels and attached notes") {
  const json flat = run_json("classify --F 0 --h 1+v --count 5", 0);
  CHECK(flat["classification"]["branch"] == "flat-excluded");

  const json ts = run_json(
      "classify --manifest " + manifest_dir() + "/classify_three_step.json", 0);
  CHECK(ts["classification"]["branch"] == "spacelike-3step-pr");
  CHECK(ts["classification"]["nilpotency"] == "3");
  CHECK(ts["classification"]["harmonic_curvature"] == false);
  CHECK(ts["expected"]["branch"] == "spacelike-3step-pr");

  const json eg = run_json(
      "classify --manifest " + manifest_dir() + "/classify_egorov_1b.json", 0);
  CHECK(eg["classification"]["branch"] == "isotropic-pp");
  CHECK(eg["classification"]["recurrent_curvature"] == true);
  CHECK(eg["classification"]["is_solution"] == true);

  // Pinned classification field set (schema version 1).
  CHECK(keys(eg["classification"]) ==
        std::set<std::string>{
            "branch", "branch_explanation", "causal", "causal_consistent",
            "causal_near_threshold", "codazzi_max", "flat", "harmonic_curvature",
            "is_solution", "max_div_gh", "max_residual", "nilpotency",
            "nilpotency_consistent", "pp_wave", "recurrent_curvature",
            "recurrent_defect", "ricci_image_isotropic", "tau_spread", "tau_value"});
}

TEST_CASE("manifest re-runs are byte-identical") {
  const std::string out1 = work_dir() + "/run1.json";
  const std::string out2 = work_dir() + "/run2.json";
  for (const char* name :
       {"verify_cahen_wallach_isotropic", "classify_three_step", "classify_egorov_1b"}) {
    const std::string base = manifest_dir() + "/" + std::string(name) + ".json";
    const std::string sub =
        std::string(name).rfind("verify", 0) == 0 ? "verify" : "classify";
    std::string ignored;
    run(sub + " --manifest " + base + " --out " + out1, &ignored);
    run(sub + " --manifest " + base + " --out " + out2, &ignored);
    const std::string a = slurp(out1), b = slurp(out2);
    REQUIRE(!a.empty());
    INFO("manifest ", name);
    CHECK(a == b);
  }
}

TEST_CASE("ode subcommand emits the oscillator CSV") {
  const std::string out = work_dir() + "/ode.json";
  std::string ignored;
  CHECK(run("ode --q -1 --h0 1 --h0p 0 --interval -3:3 --samples 121 --out " + out,
            &ignored) == 0);
  std::ifstream csv(work_dir() + "/ode.csv");
  REQUIRE(csv.good());
  std::string header;
  std::getline(csv, header);
  CHECK(header == "v,h,dh");
  std::string line;
  int rows = 0;
  while (std::getline(csv, line)) {
    double v, h, dh;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf", &v, &h, &dh) == 3);
    CHECK(std::abs(h - std::cos(v)) < 1e-8);
    CHECK(std::abs(dh + std::sin(v)) < 1e-8);
    ++rows;
  }
  CHECK(rows == 121);
}

TEST_CASE("geodesic subcommand: monotone parameter column, clean termination") {
  const std::string out = work_dir() + "/geo.json";
  std::string ignored;
  CHECK(run("geodesic --family cahen_wallach --mode isotropic "
            "--init 0,0,0.3,0,0.2,1,0.1,0 --smax 100 --samples 101 --out " +
                out,
            &ignored) == 0);
  const json rep = json::parse(slurp(out));
  CHECK(rep["summary"]["termination"] == "reached-s_max");
  CHECK(rep["summary"]["energy_drift"].get<double>() < 1e-5);

  std::ifstream csv(work_dir() + "/geo.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "s,u,v,x,y,du,dv,dx,dy,energy");
  double prev = -1.0;
  std::string line;
  int rows = 0;
  while (std::getline(csv, line)) {
    const double s = std::stod(line.substr(0, line.find(',')));
    CHECK(s > prev);
    prev = s;
    ++rows;
  }
  CHECK(rows == 101);
}

TEST_CASE("domain subcommand reports the boundary or positivity") {
  const json bounded = run_json(
      "domain --h 1+x --base 0,0,0,0 --dir 0,0,-1,0 --bracket 0:10", 0);
  CHECK(bounded["summary"]["bounded"] == true);
  CHECK(bounded["summary"]["boundary_parameter"].get<double>() ==
        doctest::Approx(1.0).epsilon(1e-9));

  const json open = run_json(
      "domain --family egorov --case 1a --base 0,0,0,0 --dir 0,1,0,0 --bracket 0:40",
      0);
  CHECK(open["summary"]["bounded"] == false);
  CHECK(open["summary"]["verdict"] == "positive-on-bracket");
}

TEST_CASE("family subcommand materializes a verify-ready manifest") {
  const std::string out = work_dir() + "/family.json";
  std::string ignored;
  CHECK(run("family --family three_step --out " + out, &ignored) == 0);
  const json rep = json::parse(slurp(out));
  CHECK(rep["family"]["name"] == "three_step");
  CHECK(rep["expected"]["branch"] == "spacelike-3step-pr");
  CHECK(rep["expected"]["nilpotency_index"] == 3);
  REQUIRE(rep.contains("verify_manifest"));

  // The emitted manifest runs as-is and confirms the solution property.
  std::ofstream follow(work_dir() + "/follow.json");
  follow << rep["verify_manifest"].dump(2);
  follow.close();
  const json verdict = run_json(
      "verify --manifest " + work_dir() + "/follow.json --count 40", 0);
  CHECK(verdict["summary"]["verdict"] == "solution");
}
