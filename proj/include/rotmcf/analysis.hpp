#pragma once

#include <utility>
#include <vector>

#include "rotmcf/integrator.hpp"

// Verification suite over simulated trajectories: mean convexity, avoidance,
// grim-reaper fits and tip speeds, nonconvexity, Jacobi-operator stability,
// blowup rescaling and Gaussian-density monotonicity. Every function here is
// a pure function of its inputs; reports carry the raw series alongside the
// verdict so callers can persist them.

namespace rotmcf {

// --- per-snapshot series checks ----------------------------------------------

struct SeriesReport {
  std::vector<std::pair<double, double>> series;  // (t, value)
  bool pass = false;
  bool degenerate = false;  // e.g. avoidance of a trajectory against itself
  double threshold = 0.0;
};

/// min H per snapshot (outward convention, interior samples); pass iff
/// min >= -tol throughout.
SeriesReport verify_mean_convex(const FlowTrajectory& traj, double tol = 1e-6);

/// Separation of two flows on their common time range, aligned by
/// interpolation in t; pass iff the minimum never drops more than tol below
/// the initial separation. Zero initial separation is flagged degenerate,
/// not failed. Throws std::invalid_argument on disjoint time ranges.
SeriesReport verify_avoidance(const FlowTrajectory& a, const FlowTrajectory& b,
                              double tol = 1e-3);

/// (t, tip speed) series by centered differences of the tip height.
std::vector<std::pair<double, double>> tip_speed(const FlowTrajectory& traj);

// --- grim reaper fit -----------------------------------------------------------

struct ReaperFit {
  double half_width = 0.0;
  double vertical_offset = 0.0;
  double horizontal_offset = 0.0;
  double residual = 0.0;  // RMS height misfit over the fit window
  int iterations = 0;
};

/// Least-squares fit of a grim reaper (half-width, offsets) to the
/// tip-centered window of arclength radius `window`. Deterministic: three
/// seeds scaled off the tip curvature, best residual wins. Throws
/// std::invalid_argument when the window is not graphical or too small.
ReaperFit fit_grim_reaper(const ProfileCurve& curve, double window);

/// max |k| over samples within |x - x_tip| <= window (the n = 2 flatness
/// measure).
double tip_region_max_curvature(const ProfileCurve& curve, double window);

// --- pointwise convexity -----------------------------------------------------

struct NonconvexityReport {
  double min_principal = 0.0;  // min over samples of min(k, kappa_rot)
  double min_H = 0.0;
  bool mean_convex_yet_nonconvex = false;
};

NonconvexityReport nonconvexity_check(const ProfileCurve& curve, Dimension n,
                                      double principal_tol = 1e-6,
                                      double mean_tol = 1e-6);

// --- Jacobi operator stability -------------------------------------------------

struct StabilityResult {
  double L = 0.0;        // arclength half-length of the Dirichlet domain
  double lambda1 = 0.0;  // principal eigenvalue of -(Delta + |A|^2)
  std::vector<double> s;
  std::vector<double> eigenfunction;  // positive in the interior
  int grid = 0;
  int iterations = 0;
};

struct EigensolveError : std::runtime_error {
  EigensolveError(const std::string& what, std::vector<double> history_in)
      : std::runtime_error(what), history(std::move(history_in)) {}
  std::vector<double> history;
};

/// Principal Dirichlet eigenvalue of the Jacobi operator Delta + |A|^2 on
/// rotationally invariant functions over profile arclength (-L, L), catenoid
/// metric factors, |A|^2 from point_geometry; inverse iteration with shift.
/// Instability of the piece shows as lambda1 < 0.
StabilityResult jacobi_lambda1(const CatenoidSpec& spec, double L, int grid);

/// Bisection for the L at which lambda1 changes sign on [L_lo, L_hi].
double lambda1_sign_change(const CatenoidSpec& spec, double L_lo, double L_hi,
                           int grid, double tol = 1e-3);

// --- blowup rescaling ------------------------------------------------------------

struct BlowupResult {
  double lambda_m = 0.0;    // sup of sup|A| over history up to t_m
  double base_scale = 0.0;  // sup|A| on the base snapshot; the rescaling factor
  double x_m = 0.0;         // base point (>= 0 branch)
  double t_m = 0.0;         // base snapshot time (nearest to the request)
  std::vector<double> rescaled_times;
  std::vector<ProfileCurve> rescaled_profiles;
  double rescaled_sup_k = 0.0;   // sup curvature of the rescaled profile at t=0
  double csf_residual = 0.0;     // max |du/dt - csf_rhs| over the rescaled flow
  double correction_bound = 0.0; // max of (n-1)/(scale * u) over the window
};

struct BlowupOptions {
  double span = 0.5;        // rescaled time window [-span, 0]
  int time_samples = 9;
  double xi_radius = 2.5;   // rescaled spatial half-window
  int xi_samples = 201;
};

/// Curvature-scale rescaling u^m(xi, tau) = s (u(xi/s + x_m, tau/s^2 + t_m)
/// - u(x_m, t_m)) about the snapshot nearest the requested t_m, where the
/// scale s is that snapshot's curvature sup (equal to the history sup
/// lambda_m whenever the sup is achieved at t_m, as in the blowup setting;
/// for flows whose curvature peaked earlier the base snapshot keeps the
/// rescaling centered where it was asked for).
/// Throws std::invalid_argument when the trajectory lacks history.
BlowupResult blowup_rescale(const FlowTrajectory& traj, double t_m,
                            const BlowupOptions& opts = {});

// --- Gaussian density monotonicity ------------------------------------------------

struct DensityReport {
  std::vector<double> radii;
  std::vector<double> values;
  bool nondecreasing = false;
  double slack = 0.0;
};

/// Theta(M, X, r) along the trajectory for each r in the ladder (surface
/// taken at t_probe - r^2), checked nondecreasing in r within slack.
DensityReport density_monotonicity(const FlowTrajectory& traj, Vec2 probe,
                                   double t_probe, const std::vector<double>& r_ladder,
                                   double slack = 1e-4,
                                   const DensityOptions& opts = {});

}  // namespace rotmcf
