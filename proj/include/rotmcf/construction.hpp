#pragma once

#include <array>

#include "rotmcf/analysis.hpp"

// The offset/escape-time construction on the catenoid: ladders of normal
// offsets M + delta nu, their first escape times past a threshold eps1,
// bisection for prescribed escape times, time-recentered families, and the
// long forward (eternal) run with its grim-reaper diagnostics.

namespace rotmcf {

/// eps1 defaults: 0.5 R for n = 2, 0.25 R for n >= 3. Any threshold inside
/// the barrier-validity region shows the same phenomenology; the barrier
/// check validates the default.
double default_eps1(const CatenoidSpec& spec);

/// Clamp location for runs aiming at a given tip height: X_max for n = 2
/// graphs (wide enough for the rising cap), Y_max for n >= 3 polylines.
double default_clamp(const CatenoidSpec& spec, double tip_target);

/// Flow configuration preset for construction runs (graph mode for n = 2,
/// parametric for n >= 3, ends pinned to the initial offset).
FlowConfig construction_config(const CatenoidSpec& spec, double tip_target);

/// Clamped catenoid offset initial data: graph mode (n = 2, |x| <= clamp) or
/// arclength polyline (n >= 3, heights <= clamp). delta may be negative for
/// the inward diagnostic run.
ProfileCurve offset_initial_data(const CatenoidSpec& spec, double delta,
                                 const FlowConfig& config);

struct EscapeResult {
  double delta = 0.0;
  double T_delta = 0.0;   // first time sup distance reaches eps1 (interpolated)
  double escape_x = 0.0;  // profile location achieving the sup at escape
  FlowTrajectory trajectory;
};

struct EscapeTimeoutError : std::runtime_error {
  EscapeTimeoutError(const std::string& what, double delta_in, double horizon_in,
                     double last_sup_in)
      : std::runtime_error(what), delta(delta_in), horizon(horizon_in),
        last_sup(last_sup_in) {}
  double delta;
  double horizon;
  double last_sup;  // sup distance reached when the horizon ran out
};

/// Runs the flow of the delta-offset until its sup distance to the catenoid
/// first reaches eps1. Throws EscapeTimeoutError if that does not happen
/// within max_time (empirically "slow", not provably "never").
EscapeResult escape_time(const CatenoidSpec& spec, double delta, double eps1,
                         const FlowConfig& config, double max_time = 80.0);

struct DeltaForEscape {
  double delta = 0.0;
  EscapeResult escape;
  int probes = 0;
};

/// Bisection on log(delta) for T_delta = target_T within 1 percent of
/// target_T (40-iteration cap). Throws std::range_error when no bracket
/// exists above delta_min.
DeltaForEscape find_delta_for_escape(const CatenoidSpec& spec, double target_T,
                                     double eps1, const FlowConfig& config,
                                     double delta_min = 1e-6);

struct FamilyMember {
  int j = 0;
  double delta = 0.0;
  double T_delta = 0.0;
  FlowTrajectory recentered;  // time axis shifted so escape happens at t = 0
};

struct AncientFamily {
  double eps1 = 0.0;
  std::vector<FamilyMember> members;            // j strictly increasing
  std::vector<std::vector<double>> convergence; // Hausdorff sup on common windows
};

/// Escape-calibrated family: member j flows for time j before escaping, and
/// is recentered to live on [-j, 0]. Spatial recentering is the identity
/// (rotational and reflection symmetry pin the center). The convergence
/// matrix holds pairwise sup distances over [-min(j_a, j_b), 0]. Members are
/// independent runs; `workers` > 1 computes them concurrently with results
/// identical to the sequential order.
AncientFamily build_ancient_family(const CatenoidSpec& spec,
                                   const std::vector<int>& j_list, double eps1,
                                   const FlowConfig& config, int workers = 1);

/// Pairwise sup distance of two recentered members over [t_lo, t_hi]
/// (Hausdorff over aligned interpolated snapshots).
double member_distance(const FamilyMember& a, const FamilyMember& b, double t_lo,
                       double t_hi);

struct EternalRun {
  FlowTrajectory trajectory;
  double escape_time = -1.0;  // first crossing of the eps1 marker
  std::vector<std::pair<double, ReaperFit>> fits;          // (t, tip-window fit)
  std::vector<std::array<double, 3>> tip;                  // (t, height, speed)
  std::vector<std::pair<double, double>> flatness;         // (t, tip max |k|)
};

/// Long forward run from a small outward offset until the tip reaches
/// tip_target; populates reaper fits, tip series and the n = 2 flatness
/// series along the way.
EternalRun run_eternal(const CatenoidSpec& spec, double delta_start,
                       double tip_target, const FlowConfig& config,
                       double fit_window = 2.5, double max_time = 400.0);

struct BarrierReport {
  GrimReaperSpec reaper;
  double initial_gap = 0.0;
  double min_gap = 0.0;
  std::vector<std::pair<double, double>> gap_series;  // (t, min gap)
  bool pass = false;
};

/// Places nothing: verifies that the translating reaper stays strictly above
/// the run for its whole duration. Throws std::invalid_argument when the
/// reaper does not start strictly above the initial profile.
BarrierReport barrier_check(const FlowTrajectory& traj, const GrimReaperSpec& reaper);

/// Reaper of the given half-width raised so its initial minimum gap over the
/// curve equals `clearance`.
GrimReaperSpec place_barrier_above(const ProfileCurve& initial, double half_width,
                                   double clearance);

}  // namespace rotmcf
