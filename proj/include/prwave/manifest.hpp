#pragma once

#include <array>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "prwave/analysis.hpp"
#include "prwave/sampling.hpp"

namespace prwave {

inline constexpr int kReportSchemaVersion = 1;

/// Self-contained description of one run: re-running a manifest with the same
/// seed reproduces the report byte for byte.
struct RunManifest {
  std::string command = "verify";  // verify|classify|family|ode|geodesic|domain

  // Metric/density source: either a family (plus options) or expressions.
  std::optional<std::string> family;
  std::map<std::string, std::string> family_options;
  std::optional<std::string> f_text;
  std::optional<std::string> h_text;
  ParamTable params;

  SampleSpec samples;
  bool box_given = false;
  Tolerances tolerances;
  std::string out;  // output path; empty keeps the report in memory

  // ode command
  std::string ode_q = "-1";
  double ode_h0 = 1.0, ode_h0p = 0.0, ode_v0 = 0.0;
  double ode_lo = -3.0, ode_hi = 3.0;
  int ode_samples = 601;

  // geodesic command
  std::array<double, 8> geo_init{0, 0, 0, 0, 0, 1, 0, 0};
  double geo_smax = 10.0;
  int geo_samples = 201;

  // domain command
  std::array<double, 4> ray_base{0, 0, 0, 0};
  std::array<double, 4> ray_dir{0, 0, 1, 0};
  double bracket_t0 = 0.0, bracket_t1 = 1.0;
};

RunManifest manifest_from_json(const nlohmann::json& j);
nlohmann::json manifest_to_json(const RunManifest& m);
RunManifest load_manifest(const std::string& path);

struct RunOutcome {
  int exit_code = 0;
  nlohmann::json report;
  std::string csv;  // trajectory sidecar for ode/geodesic commands
};

/// Executes the manifest. Writes `out` (JSON report; ode/geodesic also write
/// the CSV next to it with extension .csv) when set. Domain and constraint
/// failures propagate as exceptions; the CLI maps them to exit codes.
RunOutcome run_manifest(const RunManifest& m);

std::string report_to_string(const nlohmann::json& report);

}  // namespace prwave
