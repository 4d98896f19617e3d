// rotmcf: command-line laboratory for rotationally symmetric mean curvature
// flow. Subcommands: catenoid, flow, construct, eternal, analyze, density,
// stability, fit-reaper, export.
//
// Exit codes: 0 success, 1 a verification check ran and failed, 2 usage
// error, 3 numeric abort.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rotmcf/analysis.hpp"
#include "rotmcf/construction.hpp"
#include "rotmcf/io.hpp"
#include "rotmcf/svg.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rotmcf;

namespace {

int workers_from_env() {
  if (const char* env = std::getenv("ROTMCF_WORKERS")) {
    int w = std::atoi(env);
    if (w >= 1) return w;
  }
  return 1;
}

std::string join_args(int argc, char** argv) {
  std::ostringstream out;
  for (int i = 0; i < argc; ++i) {
    if (i) out << ' ';
    out << argv[i];
  }
  return out.str();
}

std::vector<double> parse_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  if (out.empty()) throw CLI::ValidationError("expected a comma-separated list");
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << text;
}

json spec_json(const CatenoidSpec& spec) {
  return {{"n", spec.n.value()}, {"radius", spec.radius}};
}

// shared CLI state
struct Cli {
  std::string command_line;

  // common run knobs
  int n = 2;
  double radius = 1.0;
  double dx = 0.02;
  double cfl = 0.2;
  double snapshot_dt = 0.01;
  double clamp = 0.0;  // 0: derive a default
  std::string scheme = "euler";

  FlowConfig make_config(const CatenoidSpec& spec, double tip_target) const {
    FlowConfig config = construction_config(spec, tip_target);
    config.dx = dx;
    config.cfl = cfl;
    config.snapshot_dt = snapshot_dt;
    config.scheme = scheme == "heun" ? TimeScheme::heun : TimeScheme::euler;
    if (clamp > 0.0) config.clamp = clamp;
    return config;
  }
};

int cmd_catenoid(const Cli& cli, int samples, double xmax, double ymax,
                 const std::string& mode, const std::string& out,
                 const std::string& manifest_path) {
  CatenoidSpec spec{Dimension{cli.n}, cli.radius};
  ProfileCurve curve;
  if (mode == "polyline") {
    curve = catenoid_polyline(spec, ymax > 0 ? ymax : 4.0 * cli.radius, cli.dx);
  } else {
    double extent = xmax;
    if (extent <= 0.0) {
      extent = cli.n == 2 ? 2.5 * cli.radius
                          : 0.9 * cli.radius * catenoid_asymptote(spec.n);
    }
    if (samples < 3) throw CLI::ValidationError("--samples must be >= 3");
    curve.mode = CurveMode::graph;
    curve.symmetric = true;
    curve.points.reserve(samples);
    // exact sample count: centered grid when odd, half-offset grid when even
    for (int i = 0; i < samples; ++i) {
      double x = -extent + 2.0 * extent * i / (samples - 1);
      curve.points.push_back({x, catenoid_profile(spec, x)});
    }
  }
  fs::path path(out);
  if (path.extension() == ".csv") {
    save_curve_csv(curve, path);
  } else {
    write_text(path, curve_to_json(curve, spec.n).dump(2) + "\n");
  }
  if (!manifest_path.empty()) {
    RunManifest manifest;
    manifest.command = cli.command_line;
    manifest.config = {{"dx", cli.dx}};
    manifest.spec = spec_json(spec);
    manifest.parameters = {{"samples", samples}, {"mode", mode}};
    manifest.artifacts = {fs::path(out).filename().string()};
    save_manifest(manifest, manifest_path);
  }
  std::cout << "wrote " << out << " (" << curve.points.size() << " samples)\n";
  return 0;
}

struct FlowArgs {
  std::string init = "catenoid";
  double delta = 0.05;
  double cyl_radius = 1.0;
  double reaper_halfwidth = kPi / 2.0;
  double t_end = -1.0;
  double escape_eps = -1.0;
  double tip_target = -1.0;
  double max_time = 200.0;
  std::string mode;  // "", "graph", "parametric"
  std::string out = "traj.jsonl";
  std::string manifest_path;
  std::string resume_path;
};

int numeric_abort(const FlowTrajectory& traj) {
  std::cerr << "numeric abort: " << to_string(traj.stop) << " " << traj.note << "\n";
  return 3;
}

int cmd_flow(const Cli& cli, const FlowArgs& args) {
  CatenoidSpec spec{Dimension{cli.n}, cli.radius};

  if (!args.resume_path.empty()) {
    RunManifest manifest = load_manifest(args.resume_path);
    FlowConfig config = config_from_json(manifest.config);
    fs::path base = fs::path(args.resume_path).parent_path();
    fs::path traj_path = base / manifest.artifacts.at(0);
    FlowTrajectory stored = load_trajectory(traj_path);
    StopCriteria stop;
    const auto& params = manifest.parameters;
    if (params.contains("t_end")) stop.t_end = params.at("t_end").get<double>();
    if (params.contains("escape_eps"))
      stop.escape_eps = params.at("escape_eps").get<double>();
    if (params.contains("tip_target"))
      stop.tip_target = params.at("tip_target").get<double>();
    stop.max_time = params.value("max_time", 200.0);
    CatenoidSpec stored_spec{stored.n, params.value("radius", 1.0)};
    FlowState state{stored.snapshots.back().t, stored.snapshots.back().curve, stored.n,
                    config};
    FlowTrajectory tail = run_flow(state, stop, {stored.reference});
    for (std::size_t k = 1; k < tail.snapshots.size(); ++k)
      stored.snapshots.push_back(tail.snapshots[k]);
    stored.stop = tail.stop;
    stored.note = tail.note;
    if (tail.escape_time >= 0.0) stored.escape_time = tail.escape_time;
    save_trajectory(stored, traj_path);
    std::cout << "resumed to t = " << stored.snapshots.back().t << " ("
              << to_string(stored.stop) << ")\n";
    (void)stored_spec;
    return (stored.stop == StopReason::axis_collision ||
            stored.stop == StopReason::instability ||
            stored.stop == StopReason::embeddedness)
               ? numeric_abort(stored)
               : 0;
  }

  double tip_guess = args.tip_target > 0 ? args.tip_target : 3.0 * cli.radius;
  FlowConfig config = cli.make_config(spec, tip_guess);

  FlowState initial{0.0, {}, spec.n, config};
  RunOptions options;
  if (args.init == "catenoid") {
    initial.curve = offset_initial_data(spec, 0.0, config);
    options.reference = spec;
  } else if (args.init == "offset") {
    initial.curve = offset_initial_data(spec, args.delta, config);
    options.reference = spec;
  } else if (args.init == "cylinder") {
    initial.curve.mode = CurveMode::graph;
    double span = config.clamp > 0 ? config.clamp : 5.0;
    int count = std::max(5, static_cast<int>(std::llround(2.0 * span / config.dx)) + 1);
    for (int i = 0; i < count; ++i) {
      double x = -span + 2.0 * span * i / (count - 1);
      initial.curve.points.push_back({x, args.cyl_radius});
    }
  } else if (args.init == "reaper") {
    GrimReaperSpec reaper{args.reaper_halfwidth, 2.0 * cli.radius};
    initial.curve = grim_reaper_graph(reaper, 0.92, config.dx);
    initial.config.boundary.drift = reaper.speed();
  } else if (args.init.rfind("file:", 0) == 0) {
    Dimension stored_n;
    std::ifstream in(args.init.substr(5));
    if (!in) throw CLI::ValidationError("cannot open init curve file");
    initial.curve = curve_from_json(json::parse(in), &stored_n);
    initial.n = stored_n;
    options.reference = CatenoidSpec{stored_n, cli.radius};
  } else {
    throw CLI::ValidationError("unknown --init " + args.init);
  }
  if (args.mode == "graph") initial.curve.mode = CurveMode::graph;
  if (args.mode == "parametric") initial.curve.mode = CurveMode::parametric;

  StopCriteria stop;
  if (args.t_end > 0) stop.t_end = args.t_end;
  if (args.escape_eps > 0) stop.escape_eps = args.escape_eps;
  if (args.tip_target > 0) stop.tip_target = args.tip_target;
  stop.max_time = args.max_time;

  FlowTrajectory traj = run_flow(initial, stop, options);
  save_trajectory(traj, args.out);

  if (!args.manifest_path.empty()) {
    RunManifest manifest;
    manifest.command = cli.command_line;
    manifest.config = config_to_json(config);
    manifest.spec = spec_json(spec);
    manifest.parameters = {{"init", args.init}, {"delta", args.delta},
                           {"radius", cli.radius}, {"max_time", args.max_time}};
    if (stop.t_end) manifest.parameters["t_end"] = *stop.t_end;
    if (stop.escape_eps) manifest.parameters["escape_eps"] = *stop.escape_eps;
    if (stop.tip_target) manifest.parameters["tip_target"] = *stop.tip_target;
    manifest.artifacts = {fs::path(args.out).filename().string()};
    save_manifest(manifest, args.manifest_path);
  }
  std::cout << "stop: " << to_string(traj.stop) << " at t = "
            << traj.snapshots.back().t << " (" << traj.snapshots.size()
            << " snapshots)";
  if (traj.stop == StopReason::escape) std::cout << ", T = " << traj.escape_time;
  std::cout << "\n";
  if (traj.stop == StopReason::axis_collision || traj.stop == StopReason::instability ||
      traj.stop == StopReason::embeddedness) {
    return numeric_abort(traj);
  }
  return 0;
}

int cmd_construct(const Cli& cli, double eps1, const std::string& j_csv,
                  const std::string& out_dir) {
  CatenoidSpec spec{Dimension{cli.n}, cli.radius};
  if (eps1 <= 0) eps1 = default_eps1(spec);
  std::vector<int> j_list;
  for (double v : parse_list(j_csv)) j_list.push_back(static_cast<int>(v));
  FlowConfig config = cli.make_config(spec, cli.radius + 2.0 * eps1);

  AncientFamily family =
      build_ancient_family(spec, j_list, eps1, config, workers_from_env());

  fs::create_directories(out_dir);
  json members = json::array();
  std::vector<std::string> artifacts;
  for (const auto& member : family.members) {
    std::string name = "member_j" + std::to_string(member.j) + ".jsonl";
    save_trajectory(member.recentered, fs::path(out_dir) / name);
    artifacts.push_back(name);
    members.push_back({{"j", member.j},
                       {"delta", member.delta},
                       {"T_delta", member.T_delta},
                       {"trajectory", name}});
  }
  json matrix = json::array();
  for (const auto& row : family.convergence) matrix.push_back(row);

  RunManifest manifest;
  manifest.command = cli.command_line;
  manifest.config = config_to_json(config);
  manifest.spec = spec_json(spec);
  manifest.parameters = {{"eps1", eps1}, {"members", members},
                         {"convergence", matrix}};
  manifest.artifacts = artifacts;
  save_manifest(manifest, fs::path(out_dir) / "family.json");

  for (const auto& member : family.members)
    std::cout << "j = " << member.j << ": delta = " << member.delta
              << ", T = " << member.T_delta << "\n";
  return 0;
}

int cmd_eternal(const Cli& cli, double delta, double tip_target, double fit_window,
                double barrier_halfwidth, double barrier_clearance,
                const std::string& out, const std::string& report_path,
                const std::string& manifest_path) {
  CatenoidSpec spec{Dimension{cli.n}, cli.radius};
  FlowConfig config = cli.make_config(spec, tip_target);
  EternalRun run = run_eternal(spec, delta, tip_target, config, fit_window);
  save_trajectory(run.trajectory, out);

  if (barrier_halfwidth <= 0.0) {
    barrier_halfwidth = cli.n >= 3 ? 0.98 * cli.radius * half_width(spec.n)
                                   : kPi * cli.radius;
  }
  GrimReaperSpec barrier = place_barrier_above(
      run.trajectory.snapshots.front().curve, barrier_halfwidth, barrier_clearance);
  BarrierReport barrier_report = barrier_check(run.trajectory, barrier);

  json fits = json::array();
  for (const auto& [t, fit] : run.fits)
    fits.push_back({{"t", t}, {"half_width", fit.half_width},
                    {"vertical_offset", fit.vertical_offset},
                    {"horizontal_offset", fit.horizontal_offset},
                    {"residual", fit.residual}});
  json tips = json::array();
  for (const auto& row : run.tip)
    tips.push_back({{"t", row[0]}, {"height", row[1]}, {"speed", row[2]}});
  json flat = json::array();
  for (const auto& [t, k] : run.flatness) flat.push_back({{"t", t}, {"max_k", k}});
  json report = {{"escape_time", run.escape_time},
                 {"stop", to_string(run.trajectory.stop)},
                 {"fits", fits},
                 {"tip", tips},
                 {"flatness", flat},
                 {"barrier",
                  {{"half_width", barrier.half_width},
                   {"vertical_offset", barrier.vertical_offset},
                   {"initial_gap", barrier_report.initial_gap},
                   {"min_gap", barrier_report.min_gap},
                   {"pass", barrier_report.pass}}}};
  if (!report_path.empty()) write_text(report_path, report.dump(2) + "\n");

  if (!manifest_path.empty()) {
    RunManifest manifest;
    manifest.command = cli.command_line;
    manifest.config = config_to_json(config);
    manifest.spec = spec_json(spec);
    manifest.parameters = {{"delta", delta}, {"tip_target", tip_target},
                           {"fit_window", fit_window}};
    manifest.artifacts = {fs::path(out).filename().string()};
    save_manifest(manifest, manifest_path);
  }

  std::cout << "stop: " << to_string(run.trajectory.stop)
            << ", escape T = " << run.escape_time << ", final tip = "
            << run.trajectory.snapshots.back().diag.tip_height << "\n";
  if (!run.fits.empty()) {
    const auto& last = run.fits.back().second;
    std::cout << "final reaper fit: half_width = " << last.half_width
              << ", residual = " << last.residual << "\n";
  }
  std::cout << "barrier min gap = " << barrier_report.min_gap << "\n";
  if (run.trajectory.stop == StopReason::axis_collision ||
      run.trajectory.stop == StopReason::instability ||
      run.trajectory.stop == StopReason::embeddedness)
    return numeric_abort(run.trajectory);
  if (!barrier_report.pass) return 1;
  return 0;
}

int cmd_analyze(const std::string& traj_path, const std::string& traj2_path,
                const std::string& check, double tol, int snap_index) {
  FlowTrajectory traj = load_trajectory(traj_path);
  json verdict;
  bool pass = false;
  if (check == "mean-convex") {
    auto rep = verify_mean_convex(traj, tol > 0 ? tol : 1e-6);
    pass = rep.pass;
    double worst = rep.series.front().second;
    for (auto& [t, h] : rep.series) worst = std::min(worst, h);
    verdict = {{"check", check}, {"pass", pass}, {"min_H", worst},
               {"threshold", rep.threshold}};
  } else if (check == "avoidance") {
    if (traj2_path.empty()) throw CLI::ValidationError("avoidance needs --traj2");
    auto rep = verify_avoidance(traj, load_trajectory(traj2_path), tol > 0 ? tol : 1e-3);
    pass = rep.pass;
    verdict = {{"check", check}, {"pass", pass}, {"degenerate", rep.degenerate},
               {"initial", rep.series.front().second}};
    double worst = 1e300;
    for (auto& [t, d] : rep.series) worst = std::min(worst, d);
    verdict["min_separation"] = worst;
  } else if (check == "nonconvex") {
    std::size_t index = snap_index >= 0 ? snap_index : traj.snapshots.size() / 2;
    if (index >= traj.snapshots.size())
      throw CLI::ValidationError("--snap out of range");
    auto rep = nonconvexity_check(traj.snapshots[index].curve, traj.n,
                                  tol > 0 ? tol : 1e-6, 1e-6);
    pass = rep.mean_convex_yet_nonconvex;
    verdict = {{"check", check}, {"pass", pass}, {"min_principal", rep.min_principal},
               {"min_H", rep.min_H}, {"snapshot", index}};
  } else if (check == "symmetry") {
    double worst = 0.0;
    for (const auto& snap : traj.snapshots) {
      const auto& p = snap.curve.points;
      for (std::size_t i = 0; i < p.size() / 2; ++i) {
        worst = std::max(worst, std::abs(p[i].x + p[p.size() - 1 - i].x));
        worst = std::max(worst, std::abs(p[i].y - p[p.size() - 1 - i].y));
      }
    }
    pass = worst <= (tol > 0 ? tol : 1e-9);
    verdict = {{"check", check}, {"pass", pass}, {"max_asymmetry", worst}};
  } else if (check == "monotone-outward") {
    pass = true;
    for (std::size_t k = 1; k < traj.snapshots.size(); ++k)
      if (traj.snapshots[k].diag.sup_dist_catenoid <
          traj.snapshots[k - 1].diag.sup_dist_catenoid - (tol > 0 ? tol : 1e-9))
        pass = false;
    verdict = {{"check", check}, {"pass", pass}};
  } else {
    throw CLI::ValidationError("unknown --check " + check);
  }
  std::cout << verdict.dump(2) << "\n";
  return pass ? 0 : 1;
}

int cmd_density(const Cli& cli, const std::string& traj_path, bool use_catenoid,
                bool use_plane, const std::string& probe_csv, double t_probe,
                const std::string& r_csv, double slack) {
  std::vector<double> radii = parse_list(r_csv);
  auto probe_vals = parse_list(probe_csv);
  if (probe_vals.size() != 2)
    throw CLI::ValidationError("--probe expects \"x,rho\"");
  Vec2 probe{probe_vals[0], probe_vals[1]};

  json values = json::array();
  bool pass = true;
  if (!traj_path.empty()) {
    FlowTrajectory traj = load_trajectory(traj_path);
    auto rep = density_monotonicity(traj, probe, t_probe, radii, slack);
    pass = rep.nondecreasing;
    for (std::size_t i = 0; i < rep.radii.size(); ++i)
      values.push_back({{"r", rep.radii[i]}, {"theta", rep.values[i]}});
  } else {
    ProfileCurve curve;
    Dimension n{cli.n};
    if (use_catenoid) {
      CatenoidSpec spec{n, cli.radius};
      double reach = cli.n == 2 ? 12.0 * radii.back()
                                : 0.98 * cli.radius * catenoid_asymptote(n);
      curve = cli.n == 2
                  ? catenoid_graph(spec, std::acosh(std::max(2.0, reach)), 0.01)
                  : catenoid_polyline(spec, 20.0 * radii.back(), 0.01);
    } else if (use_plane) {
      curve.mode = CurveMode::parametric;
      const double y_hi = 14.0 * radii.back();
      const int m = 4000;
      for (int i = 0; i <= m; ++i) curve.points.push_back({0.0, 1e-7 + y_hi * i / m});
    } else {
      throw CLI::ValidationError("density needs --traj, --catenoid or --plane");
    }
    double prev = -1e300;
    for (double r : radii) {
      double theta = gaussian_density(curve, n, probe, r).value;
      values.push_back({{"r", r}, {"theta", theta}});
      if (use_plane && std::abs(theta - 1.0) > 1e-6) pass = false;
      if (theta < prev - slack) pass = false;
      prev = theta;
    }
  }
  json verdict = {{"check", "density"}, {"pass", pass}, {"series", values},
                  {"slack", slack}};
  std::cout << verdict.dump(2) << "\n";
  return pass ? 0 : 1;
}

int cmd_stability(const Cli& cli, const std::string& L_csv, int grid,
                  const std::string& bisect_csv) {
  CatenoidSpec spec{Dimension{cli.n}, cli.radius};
  json rows = json::array();
  for (double L : parse_list(L_csv)) {
    StabilityResult res = jacobi_lambda1(spec, L, grid);
    rows.push_back({{"L", res.L}, {"lambda1", res.lambda1},
                    {"grid", res.grid}, {"iterations", res.iterations}});
    std::cout << "L = " << res.L << ": lambda1 = " << res.lambda1 << "\n";
  }
  json out = {{"check", "stability"}, {"series", rows}};
  if (!bisect_csv.empty()) {
    auto ends = parse_list(bisect_csv);
    if (ends.size() != 2) throw CLI::ValidationError("--bisect expects \"lo,hi\"");
    double L_star = lambda1_sign_change(spec, ends[0], ends[1], grid);
    out["sign_change_L"] = L_star;
    std::cout << "lambda1 sign change at L = " << L_star << "\n";
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_fit_reaper(const std::string& traj_path, double at_t, int index,
                   double window) {
  FlowTrajectory traj = load_trajectory(traj_path);
  ProfileCurve curve;
  if (at_t >= 0.0) {
    curve = curve_at_time(traj, at_t);
  } else {
    std::size_t k = index >= 0 ? static_cast<std::size_t>(index)
                               : traj.snapshots.size() - 1;
    if (k >= traj.snapshots.size()) throw CLI::ValidationError("--index out of range");
    curve = traj.snapshots[k].curve;
  }
  ReaperFit fit = fit_grim_reaper(curve, window);
  json out = {{"half_width", fit.half_width},
              {"vertical_offset", fit.vertical_offset},
              {"horizontal_offset", fit.horizontal_offset},
              {"residual", fit.residual},
              {"speed_of_fit", kPi / (2.0 * fit.half_width)}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_export(const Cli& cli, const std::string& traj_path, const std::string& out,
               int stride, bool overlay_catenoid, const std::string& overlay_reaper,
               bool no_axis) {
  FlowTrajectory traj = load_trajectory(traj_path);
  std::vector<ProfileCurve> curves;
  for (std::size_t k = 0; k < traj.snapshots.size();
       k += std::max(1, stride))
    curves.push_back(traj.snapshots[k].curve);
  if (curves.empty() ||
      curves.back().points != traj.snapshots.back().curve.points)
    curves.push_back(traj.snapshots.back().curve);

  SvgOptions opts;
  opts.axis = !no_axis;
  if (overlay_catenoid) {
    CatenoidSpec spec = traj.reference ? *traj.reference
                                       : CatenoidSpec{traj.n, cli.radius};
    double ymax = 0.0;
    for (const auto& p : curves.back().points) ymax = std::max(ymax, p.y);
    opts.overlays.push_back(
        {"catenoid", catenoid_polyline(spec, std::max(2.0, ymax), 0.01).points});
  }
  if (!overlay_reaper.empty()) {
    auto vals = parse_list(overlay_reaper);
    if (vals.size() != 2)
      throw CLI::ValidationError("--overlay-reaper expects \"half_width,offset\"");
    GrimReaperSpec reaper{vals[0], vals[1]};
    opts.overlays.push_back({"reaper", grim_reaper_graph(reaper, 0.95, 0.01).points});
  }
  write_text(out, render_svg(curves, opts));
  std::cout << "wrote " << out << " (" << curves.size() << " profiles, "
            << opts.overlays.size() << " overlays)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rotationally symmetric mean curvature flow laboratory"};
  app.require_subcommand(1);

  Cli cli;
  cli.command_line = join_args(argc, argv);

  auto add_common = [&cli](CLI::App* cmd, bool with_grid = true) {
    cmd->add_option("--n", cli.n, "hypersurface dimension (>= 2)");
    cmd->add_option("--radius", cli.radius, "catenoid neck radius");
    if (with_grid) {
      cmd->add_option("--dx", cli.dx, "target sample spacing");
      cmd->add_option("--cfl", cli.cfl, "timestep safety factor");
      cmd->add_option("--snap", cli.snapshot_dt, "snapshot cadence");
      cmd->add_option("--clamp", cli.clamp, "X_max (n=2) or Y_max (n>=3) end clamp");
      cmd->add_option("--scheme", cli.scheme, "euler | heun");
    }
  };

  // catenoid
  auto* catenoid = app.add_subcommand("catenoid", "sample a catenoid profile");
  int cat_samples = 257;
  double cat_xmax = 0.0, cat_ymax = 0.0;
  std::string cat_mode = "graph", cat_out = "catenoid.csv", cat_manifest;
  add_common(catenoid);
  catenoid->add_option("--samples", cat_samples, "sample count (graph mode)");
  catenoid->add_option("--xmax", cat_xmax, "graph half-span");
  catenoid->add_option("--ymax", cat_ymax, "polyline clamp height");
  catenoid->add_option("--mode", cat_mode, "graph | polyline");
  catenoid->add_option("--out", cat_out, "output file (.csv or .json)");
  catenoid->add_option("--manifest", cat_manifest, "write a run manifest");

  // flow
  auto* flow = app.add_subcommand("flow", "evolve a profile under the flow");
  FlowArgs flow_args;
  add_common(flow);
  flow->add_option("--init", flow_args.init,
                   "catenoid | offset | cylinder | reaper | file:PATH");
  flow->add_option("--delta", flow_args.delta, "offset distance (init = offset)");
  flow->add_option("--cyl-radius", flow_args.cyl_radius, "cylinder radius");
  flow->add_option("--reaper-halfwidth", flow_args.reaper_halfwidth,
                   "reaper half-width (init = reaper)");
  flow->add_option("--t-end", flow_args.t_end, "stop at this time");
  flow->add_option("--escape", flow_args.escape_eps, "stop at this sup distance");
  flow->add_option("--tip", flow_args.tip_target, "stop at this tip height");
  flow->add_option("--max-time", flow_args.max_time, "hard horizon");
  flow->add_option("--mode", flow_args.mode, "graph | parametric (override)");
  flow->add_option("--out", flow_args.out, "trajectory file (JSON lines)");
  flow->add_option("--manifest", flow_args.manifest_path, "write a run manifest");
  flow->add_option("--resume", flow_args.resume_path, "resume from a manifest");

  // construct
  auto* construct = app.add_subcommand("construct", "escape-time family (old-but-not-ancient ladder)");
  double con_eps1 = -1.0;
  std::string con_j = "1,2,3", con_out = "family";
  add_common(construct);
  construct->add_option("--eps1", con_eps1, "escape threshold (default 0.5R / 0.25R)");
  construct->add_option("--j", con_j, "comma-separated escape times");
  construct->add_option("--out", con_out, "output directory");

  // eternal
  auto* eternal = app.add_subcommand("eternal", "long forward run with reaper diagnostics");
  double et_delta = 0.05, et_tip = 8.0, et_fit_window = 2.5;
  double et_barrier_hw = -1.0, et_barrier_clearance = 0.25;
  std::string et_out = "eternal.jsonl", et_report, et_manifest;
  add_common(eternal);
  eternal->add_option("--delta", et_delta, "starting offset");
  eternal->add_option("--tip", et_tip, "target tip height");
  eternal->add_option("--fit-window", et_fit_window, "reaper-fit arclength radius");
  eternal->add_option("--barrier-halfwidth", et_barrier_hw, "barrier reaper half-width");
  eternal->add_option("--barrier-clearance", et_barrier_clearance,
                      "initial barrier gap");
  eternal->add_option("--out", et_out, "trajectory file");
  eternal->add_option("--report", et_report, "diagnostics report (JSON)");
  eternal->add_option("--manifest", et_manifest, "write a run manifest");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "verification checks on a trajectory");
  std::string an_traj, an_traj2, an_check = "mean-convex";
  double an_tol = -1.0;
  int an_snap = -1;
  analyze->add_option("--traj", an_traj, "trajectory file")->required();
  analyze->add_option("--traj2", an_traj2, "second trajectory (avoidance)");
  analyze->add_option("--check", an_check,
                      "mean-convex | avoidance | nonconvex | symmetry | monotone-outward");
  analyze->add_option("--tol", an_tol, "check tolerance override");
  analyze->add_option("--snap", an_snap, "snapshot index (nonconvex)");

  // density
  auto* density = app.add_subcommand("density", "Gaussian density ratios");
  std::string de_traj, de_probe = "0,0", de_r = "0.1,1,10";
  bool de_catenoid = false, de_plane = false;
  double de_t = 1.0, de_slack = 1e-4;
  add_common(density, false);
  density->add_option("--traj", de_traj, "trajectory file (monotonicity along a run)");
  density->add_flag("--catenoid", de_catenoid, "probe a static catenoid");
  density->add_flag("--plane", de_plane, "probe a static hyperplane");
  density->add_option("--probe", de_probe, "probe point \"x,rho\"");
  density->add_option("--t", de_t, "probe time (with --traj)");
  density->add_option("--r", de_r, "comma-separated radii");
  density->add_option("--slack", de_slack, "monotonicity slack");

  // stability
  auto* stability = app.add_subcommand("stability", "Jacobi-operator principal eigenvalue");
  std::string st_L = "0.1,2", st_bisect;
  int st_grid = 201;
  add_common(stability, false);
  stability->add_option("--L", st_L, "comma-separated arclength half-lengths");
  stability->add_option("--grid", st_grid, "interior grid size (>= 32)");
  stability->add_option("--bisect", st_bisect, "bracket \"lo,hi\" for the sign change");

  // fit-reaper
  auto* fit = app.add_subcommand("fit-reaper", "fit a grim reaper to a snapshot");
  std::string fr_traj;
  double fr_at = -1.0, fr_window = 2.5;
  int fr_index = -1;
  fit->add_option("--traj", fr_traj, "trajectory file")->required();
  fit->add_option("--at", fr_at, "time of the snapshot (interpolated)");
  fit->add_option("--index", fr_index, "snapshot index (default: last)");
  fit->add_option("--window", fr_window, "tip-centered arclength radius");

  // export
  auto* svg = app.add_subcommand("export", "deterministic SVG rendering");
  std::string ex_traj, ex_out = "out.svg", ex_reaper;
  int ex_stride = 10;
  bool ex_catenoid = false, ex_no_axis = false;
  add_common(svg, false);
  svg->add_option("--traj", ex_traj, "trajectory file")->required();
  svg->add_option("--out", ex_out, "SVG file");
  svg->add_option("--stride", ex_stride, "snapshot stride");
  svg->add_flag("--overlay-catenoid", ex_catenoid, "draw the reference catenoid");
  svg->add_option("--overlay-reaper", ex_reaper, "draw a reaper \"half_width,offset\"");
  svg->add_flag("--no-axis", ex_no_axis, "omit the rotation axis");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help/version exit clean; parse errors are usage errors
  }

  try {
    if (app.got_subcommand(catenoid))
      return cmd_catenoid(cli, cat_samples, cat_xmax, cat_ymax, cat_mode, cat_out,
                          cat_manifest);
    if (app.got_subcommand(flow)) return cmd_flow(cli, flow_args);
    if (app.got_subcommand(construct))
      return cmd_construct(cli, con_eps1, con_j, con_out);
    if (app.got_subcommand(eternal))
      return cmd_eternal(cli, et_delta, et_tip, et_fit_window, et_barrier_hw,
                         et_barrier_clearance, et_out, et_report, et_manifest);
    if (app.got_subcommand(analyze))
      return cmd_analyze(an_traj, an_traj2, an_check, an_tol, an_snap);
    if (app.got_subcommand(density))
      return cmd_density(cli, de_traj, de_catenoid, de_plane, de_probe, de_t, de_r,
                         de_slack);
    if (app.got_subcommand(stability))
      return cmd_stability(cli, st_L, st_grid, st_bisect);
    if (app.got_subcommand(fit))
      return cmd_fit_reaper(fr_traj, fr_at, fr_index, fr_window);
    if (app.got_subcommand(svg))
      return cmd_export(cli, ex_traj, ex_out, ex_stride, ex_catenoid, ex_reaper,
                        ex_no_axis);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const AxisCollisionError& e) {
    std::cerr << "numeric abort: " << e.what() << "\n";
    return 3;
  } catch (const InstabilityError& e) {
    std::cerr << "numeric abort: " << e.what() << "\n";
    return 3;
  } catch (const EmbeddednessError& e) {
    std::cerr << "numeric abort: " << e.what() << "\n";
    return 3;
  } catch (const EscapeTimeoutError& e) {
    std::cerr << "numeric abort: " << e.what() << "\n";
    return 3;
  } catch (const EigensolveError& e) {
    std::cerr << "numeric abort: " << e.what() << "\n";
    return 3;
  } catch (const CoverageError& e) {
    std::cerr << "numeric abort: " << e.what() << "\n";
    return 3;
  } catch (const ReachExceededError& e) {
    std::cerr << "numeric abort: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
