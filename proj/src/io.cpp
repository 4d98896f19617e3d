#include "rotmcf/io.hpp"

#include <fstream>
#include <sstream>

namespace rotmcf {

using nlohmann::json;

namespace {

json vec2_list(const std::vector<Vec2>& pts) {
  json out = json::array();
  for (const auto& p : pts) out.push_back({p.x, p.y});
  return out;
}

std::vector<Vec2> vec2_list_from(const json& j) {
  std::vector<Vec2> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back({e.at(0).get<double>(), e.at(1).get<double>()});
  return out;
}

json diag_to_json(const SnapshotDiag& d) {
  return {{"min_H", d.min_H},         {"max_H", d.max_H},
          {"max_A2", d.max_A2},       {"tip_height", d.tip_height},
          {"tip_speed", d.tip_speed}, {"sup_dist_catenoid", d.sup_dist_catenoid},
          {"max_v", d.max_v},         {"clamp_gap", d.clamp_gap}};
}

SnapshotDiag diag_from_json(const json& j) {
  SnapshotDiag d;
  d.min_H = j.at("min_H").get<double>();
  d.max_H = j.at("max_H").get<double>();
  d.max_A2 = j.at("max_A2").get<double>();
  d.tip_height = j.at("tip_height").get<double>();
  d.tip_speed = j.at("tip_speed").get<double>();
  d.sup_dist_catenoid = j.at("sup_dist_catenoid").get<double>();
  d.max_v = j.at("max_v").get<double>();
  d.clamp_gap = j.at("clamp_gap").get<double>();
  return d;
}

StopReason stop_from_string(const std::string& s) {
  for (StopReason r : {StopReason::none, StopReason::t_end, StopReason::escape,
                       StopReason::tip_height, StopReason::axis_collision,
                       StopReason::instability, StopReason::embeddedness,
                       StopReason::timeout}) {
    if (to_string(r) == s) return r;
  }
  throw SchemaError("unknown stop reason: " + s);
}

}  // namespace

json curve_to_json(const ProfileCurve& curve, Dimension n) {
  return {{"mode", curve.mode == CurveMode::graph ? "graph" : "parametric"},
          {"n", n.value()},
          {"points", vec2_list(curve.points)},
          {"orientation", curve.orientation == Orientation::outward ? "outward" : "inward"},
          {"symmetric", curve.symmetric}};
}

ProfileCurve curve_from_json(const json& j, Dimension* n_out) {
  ProfileCurve curve;
  const std::string mode = j.at("mode").get<std::string>();
  if (mode == "graph")
    curve.mode = CurveMode::graph;
  else if (mode == "parametric")
    curve.mode = CurveMode::parametric;
  else
    throw SchemaError("unknown curve mode: " + mode);
  curve.points = vec2_list_from(j.at("points"));
  if (j.contains("orientation"))
    curve.orientation = j.at("orientation").get<std::string>() == "inward"
                            ? Orientation::inward
                            : Orientation::outward;
  if (j.contains("symmetric")) curve.symmetric = j.at("symmetric").get<bool>();
  if (n_out) *n_out = Dimension{j.at("n").get<int>()};
  return curve;
}

void save_curve_csv(const ProfileCurve& curve, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_curve_csv: cannot open " + path.string());
  out << "x,y\n";
  out.precision(17);
  for (const auto& p : curve.points) out << p.x << ',' << p.y << '\n';
}

json config_to_json(const FlowConfig& config) {
  return {{"dx", config.dx},
          {"cfl", config.cfl},
          {"clamp", config.clamp},
          {"snapshot_dt", config.snapshot_dt},
          {"scheme", config.scheme == TimeScheme::euler ? "euler" : "heun"},
          {"y_floor", config.y_floor},
          {"redistribution", config.redistribution},
          {"boundary",
           {{"kind", config.boundary.kind == BoundaryKind::pin_catenoid  ? "pin-to-catenoid"
                     : config.boundary.kind == BoundaryKind::pin_offset ? "pin-to-offset"
                                                                        : "fixed-value"},
            {"left", {config.boundary.left.x, config.boundary.left.y}},
            {"right", {config.boundary.right.x, config.boundary.right.y}},
            {"drift", config.boundary.drift}}},
          {"tolerances",
           {{"residual", config.tol.residual}, {"coverage", config.tol.coverage}}}};
}

FlowConfig config_from_json(const json& j) {
  FlowConfig config;
  config.dx = j.at("dx").get<double>();
  config.cfl = j.at("cfl").get<double>();
  config.clamp = j.at("clamp").get<double>();
  config.snapshot_dt = j.at("snapshot_dt").get<double>();
  config.scheme =
      j.at("scheme").get<std::string>() == "heun" ? TimeScheme::heun : TimeScheme::euler;
  config.y_floor = j.at("y_floor").get<double>();
  config.redistribution = j.at("redistribution").get<double>();
  const auto& b = j.at("boundary");
  const std::string kind = b.at("kind").get<std::string>();
  config.boundary.kind = kind == "pin-to-catenoid" ? BoundaryKind::pin_catenoid
                         : kind == "pin-to-offset" ? BoundaryKind::pin_offset
                                                   : BoundaryKind::fixed_value;
  config.boundary.left = {b.at("left").at(0).get<double>(), b.at("left").at(1).get<double>()};
  config.boundary.right = {b.at("right").at(0).get<double>(),
                           b.at("right").at(1).get<double>()};
  config.boundary.drift = b.at("drift").get<double>();
  config.tol.residual = j.at("tolerances").at("residual").get<double>();
  config.tol.coverage = j.at("tolerances").at("coverage").get<double>();
  return config;
}

void save_trajectory(const FlowTrajectory& traj, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_trajectory: cannot open " + path.string());
  json header = {{"schema", kTrajectorySchema},
                 {"version", kToolVersion},
                 {"n", traj.n.value()},
                 {"stop", to_string(traj.stop)},
                 {"note", traj.note},
                 {"escape_time", traj.escape_time}};
  if (traj.reference) {
    header["reference"] = {{"n", traj.reference->n.value()},
                           {"radius", traj.reference->radius}};
  } else {
    header["reference"] = nullptr;
  }
  out << header.dump() << '\n';
  for (const auto& snap : traj.snapshots) {
    json line = {{"t", snap.t},
                 {"n", traj.n.value()},
                 {"mode", snap.curve.mode == CurveMode::graph ? "graph" : "parametric"},
                 {"points", vec2_list(snap.curve.points)},
                 {"symmetric", snap.curve.symmetric},
                 {"diag", diag_to_json(snap.diag)}};
    out << line.dump() << '\n';
  }
}

FlowTrajectory load_trajectory(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_trajectory: cannot open " + path.string());
  std::string line;
  std::size_t lineno = 0;

  if (!std::getline(in, line))
    throw TrajectoryParseError("load_trajectory: empty file " + path.string(), 1);
  ++lineno;
  json header;
  try {
    header = json::parse(line);
  } catch (const json::exception& e) {
    throw TrajectoryParseError(
        "load_trajectory: bad header line 1: " + std::string(e.what()), 1);
  }
  if (!header.contains("schema") || header.at("schema").get<std::string>() != kTrajectorySchema)
    throw SchemaError("load_trajectory: schema mismatch (want " +
                      std::string(kTrajectorySchema) + ")");

  FlowTrajectory traj{Dimension{header.at("n").get<int>()}, std::nullopt, {},
                      stop_from_string(header.at("stop").get<std::string>()),
                      header.at("note").get<std::string>(),
                      header.at("escape_time").get<double>()};
  if (!header.at("reference").is_null()) {
    traj.reference = CatenoidSpec{Dimension{header.at("reference").at("n").get<int>()},
                                  header.at("reference").at("radius").get<double>()};
  }

  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
      Snapshot snap;
      snap.t = j.at("t").get<double>();
      snap.curve.mode = j.at("mode").get<std::string>() == "graph" ? CurveMode::graph
                                                                   : CurveMode::parametric;
      snap.curve.points = vec2_list_from(j.at("points"));
      snap.curve.symmetric = j.at("symmetric").get<bool>();
      snap.diag = diag_from_json(j.at("diag"));
      traj.snapshots.push_back(std::move(snap));
    } catch (const json::exception& e) {
      std::ostringstream msg;
      msg << "load_trajectory: parse error at line " << lineno << ": " << e.what();
      throw TrajectoryParseError(msg.str(), lineno);
    }
  }
  return traj;
}

std::string hash_artifacts(const std::vector<std::string>& artifacts,
                           const std::filesystem::path& base_dir) {
  std::uint64_t hash = 1469598103934665603ULL;  // FNV-1a offset basis
  auto mix = [&hash](const char* data, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) {
      hash ^= static_cast<unsigned char>(data[i]);
      hash *= 1099511628211ULL;
    }
  };
  for (const auto& name : artifacts) {
    std::filesystem::path p = base_dir / name;
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("hash_artifacts: cannot open " + p.string());
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0)
      mix(buf, static_cast<std::size_t>(in.gcount()));
  }
  std::ostringstream out;
  out << std::hex << hash;
  return out.str();
}

void save_manifest(RunManifest manifest, const std::filesystem::path& path) {
  manifest.content_hash =
      hash_artifacts(manifest.artifacts, path.parent_path().empty()
                                             ? std::filesystem::path(".")
                                             : path.parent_path());
  json j = {{"schema", kManifestSchema}, {"command", manifest.command},
            {"config", manifest.config}, {"spec", manifest.spec},
            {"parameters", manifest.parameters}, {"artifacts", manifest.artifacts},
            {"version", manifest.version}, {"content_hash", manifest.content_hash}};
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_manifest: cannot open " + path.string());
  out << j.dump(2) << '\n';
}

RunManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_manifest: cannot open " + path.string());
  json j = json::parse(in);
  if (!j.contains("schema") || j.at("schema").get<std::string>() != kManifestSchema)
    throw SchemaError("load_manifest: schema mismatch");
  RunManifest manifest;
  manifest.command = j.at("command").get<std::string>();
  manifest.config = j.at("config");
  manifest.spec = j.at("spec");
  manifest.parameters = j.at("parameters");
  manifest.artifacts = j.at("artifacts").get<std::vector<std::string>>();
  manifest.version = j.at("version").get<std::string>();
  manifest.content_hash = j.at("content_hash").get<std::string>();
  return manifest;
}

}  // namespace rotmcf
