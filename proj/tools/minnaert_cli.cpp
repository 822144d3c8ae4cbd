// Command-line front end: geometry checks, shape constants, single-frequency
// solves, sweeps, the verification suite and Mie fixtures.
//
// Every command writes its CSV outputs and a manifest.json into the output
// directory (--out, else $MINNAERT_OUT_DIR, else ./minnaert_out).

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "minnaert/io.hpp"
#include "minnaert/oracle.hpp"
#include "minnaert/verify.hpp"

using namespace minnaert;
namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kUsage = 1, kGuard = 2, kVerifyFail = 3 };

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::vector<double> split_numbers(const std::string& s, char sep) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("not a number: '" + item + "' in '" + s + "'");
    }
  }
  return out;
}

Vec3 parse_vec3(const std::string& s) {
  const auto v = split_numbers(s, ',');
  if (v.size() != 3) throw UsageError("expected x,y,z: " + s);
  return {v[0], v[1], v[2]};
}

struct OmegaGrid {
  double lo, hi;
  int count;
};

// Settings after merging the config file with command-line flags (flags win).
struct RunConfig {
  std::string mesh = "icosphere:3";
  std::optional<Vec3> y0;
  double eps = 0.05;
  std::optional<double> omega;
  std::optional<OmegaGrid> grid;
  std::string incident = "plane:0,0,1";
  std::string method = "direct";
  std::string out;
  double c_M = 1.0;
  double condition_guard = kConditionGuard;
  double validity = 1.0;
  Config echo;

  static RunConfig from(const Config& c) {
    RunConfig r;
    r.echo = c;
    auto key = [&](const std::string& k) -> std::optional<std::string> {
      if (c.has(k)) return c.get(k);
      if (c.has("run." + k)) return c.get("run." + k);
      if (c.has("tolerance." + k)) return c.get("tolerance." + k);
      return std::nullopt;
    };
    auto num = [&](const std::string& k, double& dst) {
      if (auto v = key(k)) {
        const auto xs = split_numbers(*v, ',');
        if (xs.size() != 1) throw UsageError(k + " needs one number");
        dst = xs[0];
      }
    };
    if (auto v = key("mesh")) r.mesh = *v;
    if (auto v = key("y0")) r.y0 = parse_vec3(*v);
    num("eps", r.eps);
    if (auto v = key("omega")) {
      double w = 0;
      num("omega", w);
      r.omega = w;
    }
    if (auto v = key("omega_grid")) {
      const auto g = split_numbers(*v, ':');
      if (g.size() != 3 || g[2] < 2 || g[1] <= g[0]) throw UsageError("omega_grid is lo:hi:count with hi > lo, count >= 2");
      r.grid = OmegaGrid{g[0], g[1], static_cast<int>(g[2])};
    }
    if (auto v = key("incident")) r.incident = *v;
    if (auto v = key("method")) r.method = *v;
    if (auto v = key("out")) r.out = *v;
    num("c_M", r.c_M);
    num("condition_guard", r.condition_guard);
    num("validity", r.validity);
    if (r.omega && r.grid) throw UsageError("give either omega or omega_grid, not both");
    if (!(r.eps > 0 && r.eps < 1)) throw UsageError("eps must lie in (0, 1)");
    if (!(r.c_M > 0) || !(r.condition_guard > 0) || !(r.validity > 0))
      throw UsageError("tolerances must be positive");
    if (r.out.empty()) {
      const char* env = std::getenv("MINNAERT_OUT_DIR");
      r.out = env && *env ? env : "minnaert_out";
    }
    return r;
  }

  std::vector<double> omegas() const {
    if (omega) return {*omega};
    if (!grid) throw UsageError("no frequency given (omega or omega_grid)");
    std::vector<double> w(grid->count);
    for (int i = 0; i < grid->count; ++i) w[i] = grid->lo + (grid->hi - grid->lo) * i / (grid->count - 1);
    return w;
  }

  IncidentWave incident_wave() const {
    const auto colon = incident.find(':');
    const std::string kind = incident.substr(0, colon);
    if (colon == std::string::npos) throw UsageError("incident is plane:dx,dy,dz or point:x,y,z");
    const Vec3 v = parse_vec3(incident.substr(colon + 1));
    if (kind == "plane") {
      if (!(v.norm() > 0)) throw UsageError("plane wave direction is zero");
      return IncidentWave::plane(v.normalized());
    }
    if (kind == "point") return IncidentWave::point(v);
    throw UsageError("unknown incident kind: " + kind);
  }
};

// path, icosphere:SUB[:R], ellipsoid:a,b,c:SUB, cube
SurfaceMesh build_mesh(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (head == "icosphere") {
    const auto v = rest.empty() ? std::vector<double>{3} : split_numbers(rest, ':');
    if (v.empty() || v.size() > 2) throw UsageError("icosphere:SUB[:R]");
    return make_icosphere(v.size() == 2 ? v[1] : 1.0, static_cast<int>(v[0]));
  }
  if (head == "ellipsoid") {
    const auto c2 = rest.find(':');
    if (c2 == std::string::npos) throw UsageError("ellipsoid:a,b,c:SUB");
    return make_ellipsoid(parse_vec3(rest.substr(0, c2)), static_cast<int>(split_numbers(rest.substr(c2 + 1), ':').at(0)));
  }
  if (spec == "cube") return make_unit_cube();
  return load_mesh(spec);
}

class Run {
 public:
  Run(std::string command, const RunConfig& cfg) : cfg_(cfg) {
    manifest_.command = std::move(command);
    manifest_.config_echo = cfg.echo.dump();
    manifest_.run_id = sha256_hex(manifest_.command + "\n" + manifest_.config_echo).substr(0, 16);
    fs::create_directories(cfg.out);
    start_ = std::chrono::steady_clock::now();
  }

  void write(const std::string& name, const CsvWriter& csv) {
    const auto path = (fs::path(cfg_.out) / name).string();
    csv.save(path);
    manifest_.files.push_back({name, sha256_file(path)});
  }
  void write_text(const std::string& name, const std::string& text) {
    const auto path = (fs::path(cfg_.out) / name).string();
    std::ofstream(path, std::ios::binary) << text;
    manifest_.files.push_back({name, sha256_file(path)});
  }
  void warn(const std::string& w) {
    std::cerr << "warning: " << w << "\n";
    manifest_.warnings.push_back(w);
  }
  void lap(const std::string& what) {
    const auto now = std::chrono::steady_clock::now();
    manifest_.timings[what] = std::chrono::duration<double>(now - start_).count();
    start_ = now;
  }
  void finish() {
    manifest_.save(cfg_.out);
    std::cout << "wrote " << (fs::path(cfg_.out) / "manifest.json").string() << "\n";
  }

 private:
  const RunConfig& cfg_;
  ResultManifest manifest_;
  std::chrono::steady_clock::time_point start_;
};

CsvWriter report() { return CsvWriter({"quantity", "value"}); }
void report_row(CsvWriter& csv, const std::string& k, double v) {
  csv.add(k).add(v).end_row();
  std::printf("%-24s %.10g\n", k.c_str(), v);
}

int cmd_geometry(const RunConfig& cfg) {
  Run run("geometry", cfg);
  const SurfaceMesh mesh = build_mesh(cfg.mesh);  // constructor runs the invariant checks
  run.lap("load");
  const Vec3 c = mesh.volume_centroid();
  auto csv = report();
  report_row(csv, "panels", static_cast<double>(mesh.size()));
  report_row(csv, "vertices", static_cast<double>(mesh.vertices().size()));
  report_row(csv, "area", mesh.area());
  report_row(csv, "volume", mesh.volume());
  report_row(csv, "diameter", mesh.diameter());
  report_row(csv, "max_panel_diameter", mesh.max_panel_diameter());
  report_row(csv, "centroid_x", c.x());
  report_row(csv, "centroid_y", c.y());
  report_row(csv, "centroid_z", c.z());
  run.write("geometry.csv", csv);
  run.lap("report");
  run.finish();
  return kOk;
}

int cmd_minnaert(const RunConfig& cfg) {
  Run run("minnaert", cfg);
  LayerAssembler as(build_mesh(cfg.mesh));
  const SpectralData sd = projectors(as, cfg.condition_guard);
  run.lap("capacitance");
  auto csv = report();
  report_row(csv, "capacitance", sd.capacitance);
  report_row(csv, "omega_M", sd.omega_M);
  report_row(csv, "omega_M_operator", operator_minnaert_frequency(as, sd));
  report_row(csv, "volume", sd.volume);
  report_row(csv, "q_eq_min", sd.q_eq.minCoeff());
  report_row(csv, "q_eq_max", sd.q_eq.maxCoeff());
  report_row(csv, "q_eq_mean", sd.q_eq.dot(sd.areas) / sd.areas.sum());
  run.write("minnaert.csv", csv);
  CsvWriter q({"panel", "cx", "cy", "cz", "area", "q_eq"});
  for (int i = 0; i < as.size(); ++i) {
    const Vec3 c = as.mesh().centroid(i);
    q.add(static_cast<long>(i)).add(c.x()).add(c.y()).add(c.z()).add(sd.areas[i]).add(sd.q_eq[i]).end_row();
  }
  run.write("equilibrium.csv", q);
  run.lap("report");
  run.finish();
  return kOk;
}

ScatteringProblem make_problem(const RunConfig& cfg, std::shared_ptr<const LayerAssembler> as, double omega) {
  return ScatteringProblem::make(std::move(as), cfg.eps, omega, cfg.incident_wave(), cfg.y0, cfg.validity);
}

void guard_band_warning(Run& run, const RunConfig& cfg, double omega, double omega_M) {
  if (std::abs(omega - omega_M) < cfg.c_M * cfg.eps) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "omega = %.6g within the quasi-resonant band |omega - omega_M| < %.3g (omega_M = %.6g)",
                  omega, cfg.c_M * cfg.eps, omega_M);
    run.warn(buf);
  }
}

int cmd_solve(const RunConfig& cfg) {
  if (!cfg.omega) throw UsageError("solve needs a single omega");
  Run run("solve", cfg);
  auto as = std::make_shared<const LayerAssembler>(build_mesh(cfg.mesh));
  const SpectralData sd = projectors(*as, cfg.condition_guard);
  const ShapeConstants k = ShapeConstants::of(sd);
  auto p = make_problem(cfg, as, *cfg.omega);
  for (const auto& w : p.warnings) run.warn(w);
  guard_band_warning(run, cfg, *cfg.omega, sd.omega_M);
  const auto pts = far_sample_points(p);
  run.lap("setup");

  FieldResult f;
  if (cfg.method == "direct") {
    DirectOptions o;
    o.guard = cfg.condition_guard;
    f = scattered_field_direct(p, pts, o);
  } else if (cfg.method == "dilated") {
    f = scattered_field_dilated(p, pts);
  } else if (cfg.method == "uniform") {
    f = asymptotic_uniform(p, k, pts);
  } else if (cfg.method == "nonresonant") {
    f = asymptotic_nonresonant(p, k, pts);
  } else if (cfg.method == "resonant") {
    f = asymptotic_resonant(p, k, pts);
  } else {
    throw UsageError("unknown method: " + cfg.method);
  }
  run.lap("solve");

  CsvWriter field({"x", "y", "z", "u_in_re", "u_in_im", "u_sc_re", "u_sc_im", "u_total_re", "u_total_im"});
  for (std::size_t i = 0; i < pts.size(); ++i)
    field.add(pts[i].x()).add(pts[i].y()).add(pts[i].z()).add(f.u_in[i]).add(f.u_sc[i]).add(f.u_total[i]).end_row();
  run.write("field.csv", field);
  CsvWriter amp({"omega", "eps", "A_re", "A_im", "fit_residual", "interface_residual"});
  amp.add(*cfg.omega).add(cfg.eps).add(f.amplitude).add(f.fit_residual).add(f.interface_residual).end_row();
  run.write("amplitude.csv", amp);
  std::printf("A = %.10g %+.10gi  (fit residual %.3e)\n", f.amplitude.real(), f.amplitude.imag(), f.fit_residual);
  run.finish();
  return kOk;
}

int cmd_sweep(const RunConfig& cfg) {
  Run run("sweep", cfg);
  const auto omegas = cfg.omegas();
  auto as = std::make_shared<const LayerAssembler>(build_mesh(cfg.mesh));
  const SpectralData sd = projectors(*as, cfg.condition_guard);
  const ShapeConstants k = ShapeConstants::of(sd);
  auto p = make_problem(cfg, as, omegas.front());
  for (const auto& w : p.warnings) run.warn(w);
  run.lap("setup");
  SweepOptions o;
  o.guard_constant = cfg.c_M;
  const auto rows = frequency_sweep(p, omegas, parse_sweep_method(cfg.method), k, o);
  run.lap("sweep");

  CsvWriter csv({"omega", "A_re", "A_im", "power", "uniform_re", "uniform_im", "nonresonant_re", "nonresonant_im",
                 "resonant_re", "resonant_im", "fit_residual", "guard_band", "error"});
  int flagged = 0;
  for (const auto& r : rows) {
    csv.add(r.omega).add(r.amplitude).add(r.power).add(r.uniform);
    if (r.nonresonant)
      csv.add(*r.nonresonant);
    else
      csv.add(std::string()).add(std::string());
    csv.add(r.resonant).add(r.fit_residual).add(static_cast<long>(r.in_guard_band)).add(r.error).end_row();
    flagged += r.in_guard_band;
    if (!r.error.empty()) run.warn("omega = " + format_real(r.omega) + ": " + r.error);
  }
  run.write("sweep.csv", csv);
  if (flagged) run.warn(std::to_string(flagged) + " rows inside the quasi-resonant guard band");

  auto peak = report();
  report_row(peak, "omega_M", sd.omega_M);
  try {
    const PeakFit pf = resonance_peak(rows);
    report_row(peak, "omega_peak", pf.omega_peak);
    report_row(peak, "width", pf.width);
    report_row(peak, "height", pf.height);
  } catch (const InputError& e) {
    run.warn(std::string("no peak fit: ") + e.what());
  }
  run.write("peak.csv", peak);
  run.finish();
  return kOk;
}

int cmd_verify(const RunConfig& cfg, double k2_sign, bool kernel) {
  Run run("verify", cfg);
  VerifyOptions o;
  o.k2_sign = k2_sign;
  o.include_kernel = kernel;
  const auto checks = run_verification_suite(build_mesh(cfg.mesh), o);
  run.lap("suite");
  CsvWriter csv({"check", "pass", "detail"});
  bool all = true;
  for (const auto& c : checks) {
    std::printf("%s  %-32s %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
    csv.add(c.name).add(static_cast<long>(c.pass)).add(c.detail).end_row();
    all = all && c.pass;
  }
  run.write("verify.csv", csv);
  if (!all) run.warn("verification suite has failures");
  run.finish();
  return all ? kOk : kVerifyFail;
}

int cmd_oracle(const RunConfig& cfg, double radius, int L) {
  if (!cfg.omega) throw UsageError("oracle needs a single omega");
  Run run("oracle", cfg);
  const MieSolution sol = L > 0 ? mie_solve(radius, cfg.eps, *cfg.omega, L) : mie_solve(radius, cfg.eps, *cfg.omega);
  run.write_text("mie_fixture.json", mie_fixture_json(sol));
  const auto pts = far_sample_points(Vec3::Zero(), 10.0 * std::max(cfg.eps * 2.0 * radius, 1.0 / *cfg.omega));
  const MieField f = mie_eval(sol, pts);
  CsvWriter csv({"x", "y", "z", "u_sc_re", "u_sc_im"});
  for (std::size_t i = 0; i < pts.size(); ++i) csv.add(pts[i].x()).add(pts[i].y()).add(pts[i].z()).add(f.values[i]).end_row();
  run.write("mie_field.csv", csv);
  const cplx A = mie_monopole_amplitude(sol);
  std::printf("A = %.10g %+.10gi  (L = %d, max system residual %.2e)\n", A.real(), A.imag(), sol.L,
              sol.max_system_residual);
  run.finish();
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boundary element solver and resonance analysis for small high-contrast inclusions"};
  app.require_subcommand(1);

  std::string config_path, check_dir;
  std::map<std::string, std::string> flags;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key = value file ([run] and [tolerance] sections)");
    sub->add_option("--check", check_dir, "verify the manifest in DIR instead of running");
    for (const char* k : {"mesh", "y0", "eps", "omega", "omega_grid", "incident", "method", "out", "c_M",
                          "condition_guard", "validity"}) {
      std::string flag = std::string("--") + k;
      std::replace(flag.begin() + 2, flag.end(), '_', '-');
      sub->add_option_function<std::string>(flag, [&flags, k](const std::string& v) { flags[k] = v; });
    }
  };
  auto* geometry = app.add_subcommand("geometry", "area, volume, diameter and mesh invariants");
  auto* minnaert = app.add_subcommand("minnaert", "capacitance, Minnaert frequency, equilibrium density");
  auto* solve = app.add_subcommand("solve", "scattered field at one frequency");
  auto* sweep = app.add_subcommand("sweep", "monopole amplitude over a frequency grid, with peak fit");
  auto* verify = app.add_subcommand("verify", "lemma identities, expansion residual ratios, kernel convergence");
  auto* oracle = app.add_subcommand("oracle", "Mie series for the ball; writes a checksummed fixture");
  for (auto* s : {geometry, minnaert, solve, sweep, verify, oracle}) common(s);
  double k2_sign = 1.0, radius = 1.0;
  bool no_kernel = false;
  int L = 0;
  verify->add_option("--k2-sign", k2_sign, "multiply K_(2) by this sign (mutation check)");
  verify->add_flag("--no-kernel", no_kernel, "skip the kernel convergence check");
  oracle->add_option("--radius", radius, "reference ball radius");
  oracle->add_option("-L,--truncation", L, "highest order (default ceil(omega R) + 10)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (!check_dir.empty()) {
      const ManifestCheck c = check_manifest(check_dir);
      for (const auto& p : c.problems) std::cerr << p << "\n";
      std::cout << (c.ok ? "manifest ok\n" : "manifest mismatch\n");
      return c.ok ? kOk : kVerifyFail;
    }
    Config merged = config_path.empty() ? Config() : Config::load(config_path);
    for (const auto& [k, v] : flags) merged.set(k, v);
    const RunConfig cfg = RunConfig::from(merged);
    if (*geometry) return cmd_geometry(cfg);
    if (*minnaert) return cmd_minnaert(cfg);
    if (*solve) return cmd_solve(cfg);
    if (*sweep) return cmd_sweep(cfg);
    if (*verify) return cmd_verify(cfg, k2_sign, !no_kernel);
    if (*oracle) return cmd_oracle(cfg, radius, L);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const NumericalGuard& e) {
    std::cerr << "numerical guard: " << e.what() << "\n";
    return kGuard;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
