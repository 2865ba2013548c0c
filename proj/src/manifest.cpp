#include "prwave/manifest.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace prwave {

using nlohmann::json;

namespace {

constexpr const char* kGhKeys[10] = {"uu", "uv", "ux", "uy", "vv",
                                     "vx", "vy", "xx", "xy", "yy"};
constexpr int kGhPairs[10][2] = {{0, 0}, {0, 1}, {0, 2}, {0, 3}, {1, 1},
                                 {1, 2}, {1, 3}, {2, 2}, {2, 3}, {3, 3}};

json box_to_json(const Box& b) {
  json out = json::array();
  for (int a = 0; a < 4; ++a) out.push_back({b.lo[a], b.hi[a]});
  return out;
}

Box box_from_json(const json& j) {
  Box b;
  for (int a = 0; a < 4; ++a) {
    b.lo[a] = j.at(a).at(0).get<double>();
    b.hi[a] = j.at(a).at(1).get<double>();
  }
  return b;
}

json vec4_json(const Eigen::Vector4d& v) { return json::array({v[0], v[1], v[2], v[3]}); }

struct ResolvedInput {
  MetricField metric;
  DensityField density;
  std::optional<FamilySpec> family;
};

ResolvedInput resolve_input(const RunManifest& m) {
  ResolvedInput r;
  if (m.family) {
    FamilySpec spec = make_family(*m.family, m.params, m.family_options);
    r.metric = spec.metric;
    r.density = spec.density;
    r.family = std::move(spec);
    return r;
  }
  if (!m.f_text) throw ConstraintError("no metric given: set family or F");
  r.metric = prwave_metric(prwave::bind(ExprAst::parse(*m.f_text), m.params));
  if (m.h_text)
    r.density.h = prwave::bind(ExprAst::parse(*m.h_text), m.params);
  else
    r.density.h = ScalarField::constant(1.0);
  return r;
}

std::vector<Point> resolve_samples(const RunManifest& m, const ResolvedInput& input) {
  SampleSpec spec = m.samples;
  if (!m.box_given) {
    if (input.family)
      spec.box = input.family->domain;
    else
      spec.box = Box{};  // [-1,1]^4
  }
  if (input.family && spec.strategy == SampleStrategy::Random) {
    const ScalarField& h = input.family->density.h;
    return sample_points_where(spec, [&h](const Point& p) {
      try {
        return h.value(p) > 0.0;
      } catch (const EvalDomainError&) {
        return false;
      }
    });
  }
  return sample_points(spec);
}

json expectation_json(const FamilyExpectation& e) {
  json out;
  out["branch"] = to_string(e.branch);
  out["nilpotency_index"] = e.nilpotency_index;
  out["causal"] = to_string(e.causal);
  out["harmonic_curvature"] = e.harmonic_curvature;
  out["pp_wave"] = e.pp_wave;
  out["global_density"] = e.global_density;
  switch (e.curvature_class) {
    case CurvatureClass::Symmetric:
      out["curvature_class"] = "symmetric";
      break;
    case CurvatureClass::Recurrent:
      out["curvature_class"] = "recurrent";
      break;
    case CurvatureClass::Generic:
      out["curvature_class"] = "generic";
      break;
  }
  return out;
}

json base_report(const RunManifest& m) {
  json rep;
  rep["schema_version"] = kReportSchemaVersion;
  rep["command"] = m.command;
  rep["manifest"] = manifest_to_json(m);
  return rep;
}

RunOutcome run_verify(const RunManifest& m) {
  ResolvedInput input = resolve_input(m);
  const std::vector<Point> points = resolve_samples(m, input);
  if (points.empty()) throw ConstraintError("empty sample set");

  json rep = base_report(m);
  json pts = json::array();
  double max_residual = 0.0, max_div = 0.0;
  double tau_min = 0, tau_max = 0, tau_sum = 0;
  bool first = true;
  for (const Point& p : points) {
    const WeightedTensors wt = weighted_at(input.metric, input.density, p);
    const double res = residual_norm(wt);
    max_residual = std::max(max_residual, res);
    max_div = std::max(max_div, wt.div_gh.cwiseAbs().maxCoeff());
    tau_sum += wt.tau;
    if (first) {
      tau_min = tau_max = wt.tau;
      first = false;
    } else {
      tau_min = std::min(tau_min, wt.tau);
      tau_max = std::max(tau_max, wt.tau);
    }
    json pj;
    pj["point"] = vec4_json(p);
    json gh;
    for (int e = 0; e < 10; ++e)
      gh[kGhKeys[e]] = wt.gh(kGhPairs[e][0], kGhPairs[e][1]);
    pj["gh"] = gh;
    pj["residual"] = res;
    pj["div_gh"] = vec4_json(wt.div_gh);
    pj["tau"] = wt.tau;
    pj["h"] = wt.h;
    pts.push_back(pj);
  }
  rep["points"] = pts;

  const bool is_solution = max_residual < m.tolerances.solution;
  json summary;
  summary["verdict"] = is_solution ? "solution" : "non-solution";
  summary["is_solution"] = is_solution;
  summary["max_residual"] = max_residual;
  summary["max_div_gh"] = max_div;
  summary["tau_value"] = tau_sum / static_cast<double>(points.size());
  summary["tau_spread"] = tau_max - tau_min;
  summary["tolerance"] = m.tolerances.solution;
  summary["sample_count"] = points.size();
  rep["summary"] = summary;

  RunOutcome out;
  out.report = rep;
  out.exit_code = is_solution ? 0 : 1;
  return out;
}

RunOutcome run_classify(const RunManifest& m) {
  ResolvedInput input = resolve_input(m);
  const std::vector<Point> points = resolve_samples(m, input);
  const ClassificationReport rep =
      classify(input.metric, input.density, points, m.tolerances);

  json out = base_report(m);
  json c;
  c["branch"] = to_string(rep.branch);
  c["branch_explanation"] = rep.branch_explanation;
  c["is_solution"] = rep.is_solution;
  c["max_residual"] = rep.max_residual;
  c["max_div_gh"] = rep.max_div_gh;
  c["tau_value"] = rep.tau_value;
  c["tau_spread"] = rep.tau_spread;
  c["causal"] = to_string(rep.causal);
  c["causal_consistent"] = rep.causal_consistent;
  c["causal_near_threshold"] = rep.causal_near_threshold;
  c["nilpotency"] = nilpotency_label(rep.nilpotency);
  c["nilpotency_consistent"] = rep.nilpotency_consistent;
  c["harmonic_curvature"] = rep.harmonic_curvature;
  c["codazzi_max"] = rep.codazzi_max;
  c["pp_wave"] = rep.pp_wave;
  c["ricci_image_isotropic"] = rep.ricci_image_isotropic;
  c["flat"] = rep.flat;
  if (rep.recurrent_defect) {
    c["recurrent_defect"] = *rep.recurrent_defect;
    c["recurrent_curvature"] = *rep.recurrent_defect < 1e-8;
  }
  json body = json::array();
  for (const auto& d : rep.samples) {
    json pj;
    pj["point"] = vec4_json(d.p);
    pj["residual"] = d.residual;
    pj["tau"] = d.tau;
    pj["causal"] = to_string(d.causal);
    pj["nilpotency"] = nilpotency_label(d.nilpotency);
    body.push_back(pj);
  }
  out["classification"] = c;
  out["per_point"] = body;
  if (input.family) out["expected"] = expectation_json(input.family->expected);

  RunOutcome o;
  o.report = out;
  o.exit_code = 0;
  return o;
}

RunOutcome run_family(const RunManifest& m) {
  if (!m.family) throw ConstraintError("family command requires a family name");
  FamilySpec spec = make_family(*m.family, m.params, m.family_options);

  json rep = base_report(m);
  json fam;
  fam["name"] = spec.name;
  json params;
  for (const auto& [k, v] : spec.params) params[k] = v;
  fam["params"] = params;
  json options;
  for (const auto& [k, v] : spec.options) options[k] = v;
  fam["options"] = options;
  fam["metric_provenance"] = spec.F.provenance();
  fam["density_provenance"] = spec.density.h.provenance();
  rep["family"] = fam;
  rep["domain"] = box_to_json(spec.domain);
  rep["expected"] = expectation_json(spec.expected);

  // Verify-ready manifest for this instance.
  RunManifest follow = m;
  follow.command = "verify";
  follow.out.clear();
  follow.samples.box = spec.domain;
  follow.box_given = true;
  rep["verify_manifest"] = manifest_to_json(follow);

  RunOutcome o;
  o.report = rep;
  return o;
}

RunOutcome run_ode(const RunManifest& m) {
  Profile q = bind_profile(ExprAst::parse(m.ode_q), m.params);
  DensityOdeSolution sol =
      solve_density_ode(q, m.ode_v0, m.ode_h0, m.ode_h0p, m.ode_lo, m.ode_hi);

  std::ostringstream csv;
  csv << "v,h,dh\n";
  csv.precision(17);
  const int n = std::max(2, m.ode_samples);
  double h_min = m.ode_h0, h_max = m.ode_h0;
  for (int i = 0; i < n; ++i) {
    const double v = m.ode_lo + (m.ode_hi - m.ode_lo) * i / (n - 1);
    const Eigen::Vector2d y = sol.state(v);
    h_min = std::min(h_min, y[0]);
    h_max = std::max(h_max, y[0]);
    csv << v << ',' << y[0] << ',' << y[1] << '\n';
  }

  json rep = base_report(m);
  json summary;
  summary["interval"] = {m.ode_lo, m.ode_hi};
  summary["samples"] = n;
  summary["h_min"] = h_min;
  summary["h_max"] = h_max;
  rep["summary"] = summary;

  RunOutcome o;
  o.report = rep;
  o.csv = csv.str();
  return o;
}

RunOutcome run_geodesic(const RunManifest& m) {
  ResolvedInput input = resolve_input(m);
  GeodesicState init;
  init.position = Point(m.geo_init[0], m.geo_init[1], m.geo_init[2], m.geo_init[3]);
  init.velocity = Eigen::Vector4d(m.geo_init[4], m.geo_init[5], m.geo_init[6],
                                  m.geo_init[7]);
  const GeodesicResult r =
      geodesic_integrate(input.metric, init, m.geo_smax, {}, m.geo_samples);

  std::ostringstream csv;
  csv << "s,u,v,x,y,du,dv,dx,dy,energy\n";
  csv.precision(17);
  for (const auto& st : r.samples) {
    const double energy =
        st.velocity.dot(input.metric.value(st.position) * st.velocity);
    csv << st.s;
    for (int a = 0; a < 4; ++a) csv << ',' << st.position[a];
    for (int a = 0; a < 4; ++a) csv << ',' << st.velocity[a];
    csv << ',' << energy << '\n';
  }

  json rep = base_report(m);
  json summary;
  summary["termination"] = to_string(r.termination);
  summary["s_reached"] = r.s_reached;
  summary["initial_energy"] = r.initial_energy;
  summary["energy_drift"] = r.energy_drift;
  summary["samples"] = r.samples.size();
  rep["summary"] = summary;

  RunOutcome o;
  o.report = rep;
  o.csv = csv.str();
  return o;
}

RunOutcome run_domain(const RunManifest& m) {
  // Only the density matters here; no metric required.
  ResolvedInput input;
  if (m.family) {
    FamilySpec spec = make_family(*m.family, m.params, m.family_options);
    input.density = spec.density;
    input.family = std::move(spec);
  } else if (m.h_text) {
    input.density.h = prwave::bind(ExprAst::parse(*m.h_text), m.params);
  } else {
    throw ConstraintError("domain command needs a density: set family or h");
  }
  Ray ray;
  for (int a = 0; a < 4; ++a) {
    ray.base[a] = m.ray_base[a];
    ray.dir[a] = m.ray_dir[a];
  }
  const PositivityResult r =
      positivity_domain(input.density, ray, m.bracket_t0, m.bracket_t1);

  json rep = base_report(m);
  json summary;
  summary["bounded"] = r.bounded;
  if (r.bounded) {
    summary["boundary_parameter"] = r.boundary;
    summary["boundary_point"] = vec4_json(Point(ray.base + r.boundary * ray.dir));
  } else {
    summary["verdict"] = "positive-on-bracket";
  }
  rep["summary"] = summary;

  RunOutcome o;
  o.report = rep;
  return o;
}

}  // namespace

RunManifest manifest_from_json(const json& j) {
  RunManifest m;
  m.command = j.value("command", "verify");
  if (j.contains("family")) {
    const auto& f = j.at("family");
    m.family = f.at("name").get<std::string>();
    if (f.contains("options"))
      for (const auto& [k, v] : f.at("options").items())
        m.family_options[k] = v.get<std::string>();
    if (f.contains("params"))
      for (const auto& [k, v] : f.at("params").items()) m.params[k] = v.get<double>();
  }
  if (j.contains("metric") && j.at("metric").contains("F"))
    m.f_text = j.at("metric").at("F").get<std::string>();
  if (j.contains("density") && j.at("density").contains("h"))
    m.h_text = j.at("density").at("h").get<std::string>();
  if (j.contains("params"))
    for (const auto& [k, v] : j.at("params").items()) m.params[k] = v.get<double>();

  if (j.contains("samples")) {
    const auto& s = j.at("samples");
    const std::string strategy = s.value("strategy", "random");
    m.samples.strategy =
        strategy == "grid" ? SampleStrategy::Grid : SampleStrategy::Random;
    m.samples.count = s.value("count", 100);
    if (s.contains("grid"))
      for (int a = 0; a < 4; ++a) m.samples.grid[a] = s.at("grid").at(a).get<int>();
    m.samples.seed = s.value("seed", kDefaultSeed);
    if (s.contains("box")) {
      m.samples.box = box_from_json(s.at("box"));
      m.box_given = true;
    }
  }
  if (j.contains("tolerances")) {
    const auto& t = j.at("tolerances");
    m.tolerances.solution = t.value("solution", m.tolerances.solution);
    m.tolerances.lightlike = t.value("lightlike", m.tolerances.lightlike);
    m.tolerances.nilpotency = t.value("nilpotency", m.tolerances.nilpotency);
    m.tolerances.flat = t.value("flat", m.tolerances.flat);
    m.tolerances.harmonic = t.value("harmonic", m.tolerances.harmonic);
  }
  m.out = j.value("out", "");

  if (j.contains("ode")) {
    const auto& o = j.at("ode");
    m.ode_q = o.value("q", m.ode_q);
    m.ode_h0 = o.value("h0", m.ode_h0);
    m.ode_h0p = o.value("h0p", m.ode_h0p);
    m.ode_v0 = o.value("v0", m.ode_v0);
    if (o.contains("interval")) {
      m.ode_lo = o.at("interval").at(0).get<double>();
      m.ode_hi = o.at("interval").at(1).get<double>();
    }
    m.ode_samples = o.value("samples", m.ode_samples);
  }
  if (j.contains("geodesic")) {
    const auto& g = j.at("geodesic");
    if (g.contains("init"))
      for (int a = 0; a < 8; ++a) m.geo_init[a] = g.at("init").at(a).get<double>();
    m.geo_smax = g.value("s_max", m.geo_smax);
    m.geo_samples = g.value("samples", m.geo_samples);
  }
  if (j.contains("ray")) {
    const auto& r = j.at("ray");
    if (r.contains("base"))
      for (int a = 0; a < 4; ++a) m.ray_base[a] = r.at("base").at(a).get<double>();
    if (r.contains("dir"))
      for (int a = 0; a < 4; ++a) m.ray_dir[a] = r.at("dir").at(a).get<double>();
    if (r.contains("bracket")) {
      m.bracket_t0 = r.at("bracket").at(0).get<double>();
      m.bracket_t1 = r.at("bracket").at(1).get<double>();
    }
  }
  return m;
}

json manifest_to_json(const RunManifest& m) {
  json j;
  j["command"] = m.command;
  if (m.family) {
    json f;
    f["name"] = *m.family;
    if (!m.family_options.empty()) {
      json options;
      for (const auto& [k, v] : m.family_options) options[k] = v;
      f["options"] = options;
    }
    j["family"] = f;
  }
  if (m.f_text) j["metric"] = json{{"F", *m.f_text}};
  if (m.h_text) j["density"] = json{{"h", *m.h_text}};
  if (!m.params.empty()) {
    json params;
    for (const auto& [k, v] : m.params) params[k] = v;
    j["params"] = params;
  }
  {
    json s;
    s["strategy"] = m.samples.strategy == SampleStrategy::Random ? "random" : "grid";
    if (m.samples.strategy == SampleStrategy::Random)
      s["count"] = m.samples.count;
    else
      s["grid"] = {m.samples.grid[0], m.samples.grid[1], m.samples.grid[2],
                   m.samples.grid[3]};
    s["seed"] = m.samples.seed;
    if (m.box_given) s["box"] = box_to_json(m.samples.box);
    j["samples"] = s;
  }
  {
    json t;
    t["solution"] = m.tolerances.solution;
    t["lightlike"] = m.tolerances.lightlike;
    t["nilpotency"] = m.tolerances.nilpotency;
    t["flat"] = m.tolerances.flat;
    t["harmonic"] = m.tolerances.harmonic;
    j["tolerances"] = t;
  }
  if (m.command == "ode") {
    json o;
    o["q"] = m.ode_q;
    o["h0"] = m.ode_h0;
    o["h0p"] = m.ode_h0p;
    o["v0"] = m.ode_v0;
    o["interval"] = {m.ode_lo, m.ode_hi};
    o["samples"] = m.ode_samples;
    j["ode"] = o;
  }
  if (m.command == "geodesic") {
    json g;
    g["init"] = m.geo_init;
    g["s_max"] = m.geo_smax;
    g["samples"] = m.geo_samples;
    j["geodesic"] = g;
  }
  if (m.command == "domain") {
    json r;
    r["base"] = m.ray_base;
    r["dir"] = m.ray_dir;
    r["bracket"] = {m.bracket_t0, m.bracket_t1};
    j["ray"] = r;
  }
  return j;
}

RunManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open manifest: " + path);
  json j;
  in >> j;
  return manifest_from_json(j);
}

std::string report_to_string(const json& report) { return report.dump(2) + "\n"; }

RunOutcome run_manifest(const RunManifest& m) {
  RunOutcome out;
  if (m.command == "verify")
    out = run_verify(m);
  else if (m.command == "classify")
    out = run_classify(m);
  else if (m.command == "family")
    out = run_family(m);
  else if (m.command == "ode")
    out = run_ode(m);
  else if (m.command == "geodesic")
    out = run_geodesic(m);
  else if (m.command == "domain")
    out = run_domain(m);
  else
    throw ConstraintError("unknown command '" + m.command + "'");

  if (!m.out.empty()) {
    std::ofstream f(m.out, std::ios::binary);
    if (!f) throw Error("cannot write report to " + m.out);
    f << report_to_string(out.report);
    if (!out.csv.empty()) {
      std::string csv_path = m.out;
      const auto dot = csv_path.rfind('.');
      if (dot != std::string::npos) csv_path.resize(dot);
      csv_path += ".csv";
      std::ofstream c(csv_path, std::ios::binary);
      if (!c) throw Error("cannot write trajectory to " + csv_path);
      c << out.csv;
    }
  }
  return out;
}

}  // namespace prwave
