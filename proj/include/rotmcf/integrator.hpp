#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rotmcf/geometry.hpp"

// Time evolution of profile curves under rotationally symmetric mean
// curvature flow. Graph mode advances u_t = u_xx/(1+u_x^2) - (n-1)/u on a
// fixed x grid; parametric mode moves polyline vertices by H*nu plus a
// shape-invariant tangential redistribution velocity. Both are explicit with
// dt <= cfl * ds_min^2 and Dirichlet ends held to a reference curve.

namespace rotmcf {

enum class BoundaryKind { pin_catenoid, pin_offset, fixed_value };

/// Dirichlet end condition. For pin_catenoid / pin_offset the anchors resolve
/// to the initial curve's end samples (which lie on the catenoid resp. its
/// offset); fixed_value uses the stored anchors. `drift` translates the
/// anchors vertically at constant speed, for runs tracking a translator.
struct BoundaryCondition {
  BoundaryKind kind = BoundaryKind::pin_offset;
  Vec2 left{}, right{};
  double drift = 0.0;
};

enum class TimeScheme { euler, heun };

struct Tolerances {
  double residual = 1e-6;
  double coverage = 1e-6;
};

struct FlowConfig {
  double dx = 0.02;   // target sample spacing
  double cfl = 0.2;   // timestep safety factor, dt <= cfl * ds_min^2
  BoundaryCondition boundary{};
  double clamp = 0.0;        // X_max (graph runs) or Y_max (parametric runs)
  double snapshot_dt = 0.01; // snapshot / escape-check cadence
  TimeScheme scheme = TimeScheme::euler;
  double y_floor = 1e-3;     // axis floor (1e-3 * R); crossing it aborts
  double redistribution = 1.0;  // tangential arclength-equalization strength
  Tolerances tol{};
};

/// Throws std::invalid_argument when a config invariant fails
/// (dx <= 0, cfl outside (0, 0.25], negative cadence).
void validate_config(const FlowConfig& config);

struct FlowState {
  double t = 0.0;
  ProfileCurve curve;
  Dimension n;
  FlowConfig config;
};

struct SnapshotDiag {
  double min_H = 0.0;
  double max_H = 0.0;
  double max_A2 = 0.0;
  double tip_height = 0.0;
  double tip_speed = 0.0;  // centered difference across snapshots, filled post-run
  double sup_dist_catenoid = 0.0;  // -1 when no reference is attached
  double max_v = 0.0;
  double clamp_gap = 0.0;  // max |H| in the clamp collar (boundary-layer log)
};

struct Snapshot {
  double t = 0.0;
  ProfileCurve curve;
  SnapshotDiag diag;
};

enum class StopReason {
  none,
  t_end,
  escape,
  tip_height,
  axis_collision,
  instability,
  embeddedness,
  timeout,
};

std::string to_string(StopReason reason);

struct StopCriteria {
  std::optional<double> t_end;
  std::optional<double> escape_eps;  // sup distance to the reference catenoid
  std::optional<double> tip_target;  // stop once u(0) reaches this height
  double max_time = 1e6;
};

struct FlowTrajectory {
  Dimension n;
  std::optional<CatenoidSpec> reference;
  std::vector<Snapshot> snapshots;
  StopReason stop = StopReason::none;
  std::string note;
  double escape_time = -1.0;  // interpolated first crossing when stop == escape
};

struct AxisCollisionError : std::runtime_error {
  AxisCollisionError(const std::string& what, std::size_t index_in)
      : std::runtime_error(what), index(index_in) {}
  std::size_t index;
};

struct InstabilityError : std::runtime_error {
  InstabilityError(const std::string& what, std::size_t index_in)
      : std::runtime_error(what), index(index_in) {}
  std::size_t index;
};

struct EmbeddednessError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- spatial operators ------------------------------------------------------

/// du/dt of the rotationally symmetric graph flow at every sample
/// (boundary entries zero): u_xx/(1+u_x^2) - (n-1)/u with centered
/// second-order differences aware of nonuniform grids.
/// Throws AxisCollisionError when u <= 0 anywhere.
std::vector<double> graphical_rhs(const ProfileCurve& u, Dimension n);

/// Graphical curve shortening flow u_xx/(1+u_x^2); u may change sign.
std::vector<double> csf_rhs(const ProfileCurve& u);

// --- steppers ---------------------------------------------------------------

/// One explicit step of the graph flow; boundary samples reset per the
/// boundary condition at the new time.
FlowState step_graphical(const FlowState& state, double dt);

/// One explicit step of parametric motion by dt * (H nu + tangential
/// redistribution); ends clamped. Throws EmbeddednessError if the stepped
/// polyline self-intersects.
FlowState step_parametric(const FlowState& state, double dt);

/// Arclength-equidistributed resampling (cubic in arclength); preserves the
/// symmetry marker exactly by resampling one half and mirroring.
ProfileCurve remesh(const ProfileCurve& curve, double target_ds);

// --- driver -------------------------------------------------------------------

struct RunOptions {
  std::optional<CatenoidSpec> reference;  // enables sup-distance diagnostics
};

/// Repeated adaptive steps with snapshot recording and (parametric) remeshing
/// until a stop criterion fires. Numeric failures stop the run with a partial
/// trajectory and an error tag instead of throwing.
FlowTrajectory run_flow(const FlowState& initial, const StopCriteria& stop,
                        const RunOptions& options = {});

/// Diagnostics of a single curve, using the same reference-coverage policy as
/// run_flow (replayable: equal inputs give bitwise-equal results).
SnapshotDiag compute_diagnostics(const ProfileCurve& curve, Dimension n,
                                 const std::optional<CatenoidSpec>& reference);

/// Recomputes every snapshot diagnostic of a stored trajectory (tip speeds
/// included); used for cache-coherence checks after persistence round trips.
std::vector<SnapshotDiag> recompute_diagnostics(const FlowTrajectory& traj);

/// Curve at an intermediate time by linear interpolation between bracketing
/// snapshots (resampling when the meshes differ). Throws std::out_of_range
/// outside the recorded range.
ProfileCurve curve_at_time(const FlowTrajectory& traj, double t);

double tip_height_of(const ProfileCurve& curve);

}  // namespace rotmcf
