#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "rotmcf/construction.hpp"

// Persistence: trajectories as JSON-lines (one snapshot per line behind a
// schema header), curves as JSON or CSV, run manifests as JSON with a content
// hash over the written artifacts. Everything round-trips losslessly (doubles
// are serialized shortest-round-trip).

namespace rotmcf {

inline constexpr const char* kTrajectorySchema = "rotmcf-trajectory/1";
inline constexpr const char* kManifestSchema = "rotmcf-manifest/1";
inline constexpr const char* kToolVersion = "0.1.0";

struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TrajectoryParseError : std::runtime_error {
  TrajectoryParseError(const std::string& what, std::size_t line_in)
      : std::runtime_error(what), line(line_in) {}
  std::size_t line;  // 1-based line in the file
};

// --- curves ---------------------------------------------------------------

nlohmann::json curve_to_json(const ProfileCurve& curve, Dimension n);
ProfileCurve curve_from_json(const nlohmann::json& j, Dimension* n_out = nullptr);

/// CSV with header "x,y", one sample per row.
void save_curve_csv(const ProfileCurve& curve, const std::filesystem::path& path);

// --- configs ---------------------------------------------------------------

nlohmann::json config_to_json(const FlowConfig& config);
FlowConfig config_from_json(const nlohmann::json& j);

// --- trajectories -----------------------------------------------------------

void save_trajectory(const FlowTrajectory& traj, const std::filesystem::path& path);

/// Throws SchemaError on a version mismatch and TrajectoryParseError (with
/// the offending line number) on truncated or malformed lines.
FlowTrajectory load_trajectory(const std::filesystem::path& path);

// --- manifests ----------------------------------------------------------------

struct RunManifest {
  std::string command;
  nlohmann::json config;
  nlohmann::json spec;        // {"n": ..., "radius": ...}
  nlohmann::json parameters;  // free-form per subcommand
  std::vector<std::string> artifacts;
  std::string version = kToolVersion;
  std::string content_hash;  // FNV-1a over artifact bytes, filled by save
};

/// FNV-1a (64 bit) over the bytes of every artifact, in listed order.
std::string hash_artifacts(const std::vector<std::string>& artifacts,
                           const std::filesystem::path& base_dir);

void save_manifest(RunManifest manifest, const std::filesystem::path& path);
RunManifest load_manifest(const std::filesystem::path& path);

}  // namespace rotmcf
