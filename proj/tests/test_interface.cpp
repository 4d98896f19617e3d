#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "rotmcf/construction.hpp"
#include "rotmcf/io.hpp"
#include "rotmcf/svg.hpp"

using namespace rotmcf;
namespace fs = std::filesystem;

namespace {
const Dimension n2{2};

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("rotmcf_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

FlowTrajectory sample_run(double t_end = 0.2) {
  CatenoidSpec spec{n2, 1.0};
  FlowConfig config;
  config.dx = 0.03;
  config.snapshot_dt = 0.02;
  config.clamp = 2.0;
  StopCriteria stop;
  stop.t_end = t_end;
  ProfileCurve start = normal_offset(catenoid_graph(spec, 2.0, 0.03), 0.05);
  return run_flow({0.0, start, n2, config}, stop, {spec});
}
}  // namespace

TEST_CASE("curve json round trip") {
  CatenoidSpec spec{n2, 1.0};
  ProfileCurve curve = catenoid_graph(spec, 1.5, 0.05);
  Dimension n_back;
  ProfileCurve back = curve_from_json(curve_to_json(curve, n2), &n_back);
  CHECK(n_back.value() == 2);
  CHECK(back.mode == curve.mode);
  CHECK(back.symmetric == curve.symmetric);
  REQUIRE(back.points.size() == curve.points.size());
  for (std::size_t i = 0; i < curve.points.size(); ++i)
    CHECK(back.points[i] == curve.points[i]);  // lossless doubles
}

TEST_CASE("csv export carries the x,y header") {
  TempDir tmp;
  CatenoidSpec spec{n2, 1.0};
  ProfileCurve curve = catenoid_graph(spec, 1.0, 0.25);
  fs::path path = tmp.path / "c.csv";
  save_curve_csv(curve, path);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "x,y");
  std::size_t rows = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == curve.points.size());
}

TEST_CASE("trajectory save/load round trip is lossless") {
  TempDir tmp;
  FlowTrajectory traj = sample_run();
  fs::path path = tmp.path / "run.jsonl";
  save_trajectory(traj, path);
  FlowTrajectory back = load_trajectory(path);

  CHECK(back.n.value() == traj.n.value());
  REQUIRE(back.reference.has_value());
  CHECK(back.reference->radius == traj.reference->radius);
  CHECK(back.stop == traj.stop);
  CHECK(back.escape_time == traj.escape_time);
  REQUIRE(back.snapshots.size() == traj.snapshots.size());
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    CHECK(back.snapshots[k].t == traj.snapshots[k].t);
    REQUIRE(back.snapshots[k].curve.points.size() ==
            traj.snapshots[k].curve.points.size());
    for (std::size_t i = 0; i < traj.snapshots[k].curve.points.size(); ++i)
      CHECK(back.snapshots[k].curve.points[i] == traj.snapshots[k].curve.points[i]);
    CHECK(back.snapshots[k].diag.min_H == traj.snapshots[k].diag.min_H);
    CHECK(back.snapshots[k].diag.tip_speed == traj.snapshots[k].diag.tip_speed);
  }

  // loaded diagnostics replay bitwise through the recompute path
  auto redone = recompute_diagnostics(back);
  for (std::size_t k = 0; k < redone.size(); ++k) {
    CHECK(std::abs(redone[k].min_H - back.snapshots[k].diag.min_H) < 1e-12);
    CHECK(std::abs(redone[k].sup_dist_catenoid -
                   back.snapshots[k].diag.sup_dist_catenoid) < 1e-12);
  }
}

TEST_CASE("trajectory loader: schema and parse errors") {
  TempDir tmp;
  fs::path bad_schema = tmp.path / "bad_schema.jsonl";
  {
    std::ofstream out(bad_schema);
    out << R"({"schema":"rotmcf-trajectory/999","n":2,"stop":"t_end","note":"","escape_time":-1,"reference":null})"
        << "\n";
  }
  CHECK_THROWS_AS(load_trajectory(bad_schema), SchemaError);

  FlowTrajectory traj = sample_run();
  fs::path path = tmp.path / "run.jsonl";
  save_trajectory(traj, path);
  // truncate the last line mid-record
  auto size = fs::file_size(path);
  fs::resize_file(path, size - 40);
  try {
    load_trajectory(path);
    CHECK(false);
  } catch (const TrajectoryParseError& e) {
    CHECK(e.line == traj.snapshots.size() + 1);  // header + snapshots
  }
}

TEST_CASE("manifest: save, load, deterministic content hash") {
  TempDir tmp;
  FlowTrajectory traj = sample_run();
  save_trajectory(traj, tmp.path / "a.jsonl");

  RunManifest manifest;
  manifest.command = "rotmcf flow --t-end 0.2";
  manifest.config = config_to_json(FlowConfig{});
  manifest.spec = {{"n", 2}, {"radius", 1.0}};
  manifest.parameters = {{"t_end", 0.2}};
  manifest.artifacts = {"a.jsonl"};
  save_manifest(manifest, tmp.path / "m.json");

  RunManifest back = load_manifest(tmp.path / "m.json");
  CHECK(back.command == manifest.command);
  CHECK(back.artifacts == manifest.artifacts);
  CHECK(!back.content_hash.empty());

  // re-running the identical computation reproduces the hash bitwise
  FlowTrajectory traj2 = sample_run();
  save_trajectory(traj2, tmp.path / "b.jsonl");
  CHECK(hash_artifacts({"b.jsonl"}, tmp.path) == hash_artifacts({"a.jsonl"}, tmp.path));

  FlowConfig cfg_back = config_from_json(back.config);
  CHECK(cfg_back.dx == FlowConfig{}.dx);
  CHECK(cfg_back.cfl == FlowConfig{}.cfl);
}

TEST_CASE("svg export: element counts, symmetry, determinism") {
  CatenoidSpec spec{n2, 1.0};
  ProfileCurve cat = catenoid_graph(spec, 1.5, 0.05);

  SUBCASE("single profile") {
    std::string svg = render_svg({cat});
    std::size_t polylines = 0, pos = 0;
    while ((pos = svg.find("<polyline", pos)) != std::string::npos) {
      ++polylines;
      ++pos;
    }
    CHECK(polylines == 1);
    CHECK(svg.find("<line class=\"axis\"") != std::string::npos);
  }

  SUBCASE("snapshots + overlays + axis") {
    FlowTrajectory traj = sample_run();
    std::vector<ProfileCurve> curves;
    for (const auto& snap : traj.snapshots) curves.push_back(snap.curve);
    SvgOptions opts;
    opts.overlays.push_back({"catenoid", cat.points});
    GrimReaperSpec reaper{2.0, 3.0};
    opts.overlays.push_back({"reaper", grim_reaper_graph(reaper, 0.9, 0.05).points});
    std::string svg = render_svg(curves, opts);
    std::size_t polylines = 0, pos = 0;
    while ((pos = svg.find("<polyline", pos)) != std::string::npos) {
      ++polylines;
      ++pos;
    }
    CHECK(polylines == curves.size() + opts.overlays.size());
    std::size_t axes = 0;
    pos = 0;
    while ((pos = svg.find("<line", pos)) != std::string::npos) {
      ++axes;
      ++pos;
    }
    CHECK(axes == 1);

    // byte-identical across repeated invocations
    CHECK(render_svg(curves, opts) == svg);
  }

  SUBCASE("empty input throws") {
    CHECK_THROWS_AS(render_svg({}), std::invalid_argument);
  }
}

TEST_CASE("trajectory persists through construct-style recentering") {
  TempDir tmp;
  FlowTrajectory traj = sample_run();
  for (auto& snap : traj.snapshots) snap.t -= 0.1;  // recentered clock
  save_trajectory(traj, tmp.path / "recentered.jsonl");
  FlowTrajectory back = load_trajectory(tmp.path / "recentered.jsonl");
  CHECK(back.snapshots.front().t == traj.snapshots.front().t);
  CHECK(back.snapshots.front().t < 0.0);
}
