#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Reference geometry for rotationally symmetric hypersurfaces in R^{n+1}:
// catenoid profiles, grim reapers, normal offsets, pointwise curvatures and
// Gaussian density ratios of profile curves. Everything here is a pure
// function of its inputs.

namespace rotmcf {

constexpr double kPi = 3.14159265358979323846;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
double norm(Vec2 a);

/// Hypersurface dimension n (the surface lives in R^{n+1}); n >= 2.
class Dimension {
 public:
  explicit Dimension(int n = 2);
  int value() const { return n_; }

 private:
  int n_;
};

/// Catenoid rotationally symmetric about the x-axis with neck radius R,
/// profile w_R(x) = R * w(x / R) where w is the radius-1 profile, w(0) = 1.
struct CatenoidSpec {
  Dimension n;
  double radius = 1.0;
};

/// Grim reaper graph over (-half_width, half_width) translating vertically
/// at speed() = pi / (2 * half_width).
struct GrimReaperSpec {
  double half_width = kPi / 2.0;
  double vertical_offset = 0.0;
  double speed() const { return kPi / (2.0 * half_width); }
};

enum class CurveMode { graph, parametric };
enum class Orientation { outward, inward };

/// Sampled planar profile of a surface of revolution about the x-axis.
/// Graph mode: samples on a strictly increasing x grid. Parametric mode:
/// simple polyline, typically arclength-equidistributed. The stored normal
/// convention ("outward") has positive radial component at the neck; every
/// curvature sign in the repository follows it.
struct ProfileCurve {
  CurveMode mode = CurveMode::graph;
  std::vector<Vec2> points;
  Orientation orientation = Orientation::outward;
  bool symmetric = false;  // reflection symmetry about x = 0

  std::size_t size() const { return points.size(); }
};

/// Pointwise curvature data at an interior sample, outward convention.
/// H = k + (n-1) * kappa_rot holds exactly given k, theta and y.
struct PointGeometry {
  double k = 0.0;          // profile curvature
  double theta = 0.0;      // tangent angle against the +x axis
  double kappa_rot = 0.0;  // rotational principal curvature, -cos(theta)/y
  double H = 0.0;          // mean curvature
  double A2 = 0.0;         // |A|^2 = k^2 + (n-1) * kappa_rot^2
  double v = 0.0;          // gradient quantity (1 + u_x^2)^{1/2}
};

struct ProfileDomainError : std::domain_error {
  ProfileDomainError(const std::string& what, double limit_in)
      : std::domain_error(what), limit(limit_in) {}
  double limit;  // |x| bound of the admissible domain
};

struct ReachExceededError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CoverageError : std::runtime_error {
  CoverageError(const std::string& what, double bound_in)
      : std::runtime_error(what), truncation_bound(bound_in) {}
  double truncation_bound;
};

/// Throws std::invalid_argument when a ProfileCurve invariant fails
/// (y <= 0, non-monotone x in graph mode, self-intersection, size < 3).
void validate_profile(const ProfileCurve& curve);

bool polyline_is_simple(const std::vector<Vec2>& pts);

// --- catenoid reference ---------------------------------------------------

/// Half-width W_n of the radius-1 catenoid,
///   W_n = (1/2) Integral_1^inf ds / sqrt(s^{2(n-1)} - 1),
/// with W_2 = +infinity. Relative quadrature error <= 1e-8.
double half_width(Dimension n);

/// |x| location of the vertical asymptotes of the radius-1 profile; the
/// profile w(x) is defined for |x| < catenoid_asymptote(n) and diverges
/// there. Equals 2 * half_width(n); +infinity for n = 2.
double catenoid_asymptote(Dimension n);

/// Profile height w_R(x). Throws ProfileDomainError outside the profile
/// domain |x| < R * catenoid_asymptote(n).
double catenoid_profile(const CatenoidSpec& spec, double x);

/// d/dx of the profile, sqrt((w/R)^{2(n-1)} - 1) signed by x.
double catenoid_slope(const CatenoidSpec& spec, double x);

/// Graph-mode samples on the uniform grid |x| <= x_max, spacing ~dx,
/// exactly mirror-symmetric about x = 0 (odd sample count).
ProfileCurve catenoid_graph(const CatenoidSpec& spec, double x_max, double dx);

/// Parametric arclength-equidistributed samples of the profile up to height
/// y_max on both branches, spacing ~ds, mirror-symmetric.
ProfileCurve catenoid_polyline(const CatenoidSpec& spec, double y_max, double ds);

/// Same, but out to profile arclength s_max from the neck on each branch
/// (samples sit at arclength multiples of ds exactly).
ProfileCurve catenoid_polyline_by_arclength(const CatenoidSpec& spec, double s_max,
                                            double ds);

/// Height of an x-monotone curve at x (cubic interpolation in x).
/// Throws std::out_of_range outside the sampled range.
double height_at(const ProfileCurve& curve, double x);

// --- grim reaper ----------------------------------------------------------

/// Height of the translating reaper at position x and time t:
///   vertical_offset + c*t - (1/c) * log(cos(c*x)),  c = pi/(2*half_width).
/// Throws ProfileDomainError for |x| >= half_width.
double grim_reaper_height(const GrimReaperSpec& spec, double x, double t);

/// Graph samples of the reaper at time t over |x| <= span_fraction * half_width.
ProfileCurve grim_reaper_graph(const GrimReaperSpec& spec, double span_fraction,
                               double dx, double t = 0.0);

// --- pointwise geometry ---------------------------------------------------

/// Second-order finite-difference curvatures at interior sample i.
/// Throws std::out_of_range at boundary samples and std::invalid_argument
/// on degenerate spacing or y <= 0.
PointGeometry point_geometry(const ProfileCurve& curve, std::size_t i, Dimension n);

/// Unit tangent at sample i by centered differences (one-sided at the ends).
Vec2 tangent_at(const ProfileCurve& curve, std::size_t i);

/// Outward unit normal at sample i (tangent rotated by +90 degrees).
Vec2 outward_normal_at(const ProfileCurve& curve, std::size_t i);

// --- offsets ----------------------------------------------------------------

/// Displaces every sample by delta along the outward unit normal.
/// Positive delta moves the curve away from the axis at the neck. Throws
/// ReachExceededError if the offset polyline self-intersects and
/// std::invalid_argument if it touches the axis.
ProfileCurve normal_offset(const ProfileCurve& curve, double delta);

// --- Gaussian density ratio -------------------------------------------------

struct DensityOptions {
  int azimuthal_order = 32;   // Gauss nodes for the sphere average
  int segment_order = 8;      // Gauss nodes per polyline subsegment
  double coverage_tol = 1e-6; // admissible truncation-mass bound
};

struct DensityResult {
  double value = 0.0;
  double truncation_bound = 0.0;  // Gaussian tail estimate past the curve ends
};

/// Gaussian density ratio of the surface of revolution spanned by `curve`,
/// probed at the spatial point (probe.x on the axis direction, probe.y =
/// distance from the axis) with scale r. Caller supplies the timeslice
/// t - r^2 of the flow. The spherical average reduces to a fixed-order
/// Gauss rule in u = <omega, e1> with weight (1-u^2)^{(n-3)/2}; the profile
/// integral is composite Gauss on subsegments of length <= r/2.
/// Throws CoverageError when the truncation bound exceeds coverage_tol.
DensityResult gaussian_density(const ProfileCurve& curve, Dimension n, Vec2 probe,
                               double r, const DensityOptions& opts = {});

// --- distances ---------------------------------------------------------------

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b);

/// Distance from p to the polyline, exact; `hint` is a segment index used to
/// warm-start the x-window search (curves here are x-monotone).
double point_polyline_distance(Vec2 p, const std::vector<Vec2>& pts);

struct SupDistance {
  double value = 0.0;
  double at_x = 0.0;  // x of the curve sample achieving the sup
};

/// Supremum over curve samples of the planar distance to the catenoid
/// profile polyline (point-to-segment, not sample-to-sample).
SupDistance sup_distance_to_catenoid(const ProfileCurve& curve, const CatenoidSpec& spec);

/// Same, against an explicit reference polyline.
SupDistance sup_distance_to_polyline(const ProfileCurve& curve,
                                     const std::vector<Vec2>& reference);

/// min over samples of (y_i - w_R(x_i)); positive iff the curve lies strictly
/// outside the catenoid over its sampled range.
double min_height_above_catenoid(const ProfileCurve& curve, const CatenoidSpec& spec);

/// Minimum separation between two polylines (symmetric).
double polyline_separation(const std::vector<Vec2>& a, const std::vector<Vec2>& b);

// --- small quadrature/arclength helpers (exposed for reuse and testing) ----

/// Nodes/weights of the m-point Gauss-Legendre rule on [-1, 1].
void gauss_legendre(int m, std::vector<double>& nodes, std::vector<double>& weights);

/// Adaptive composite Gauss integration of f on [a, b] to relative
/// tolerance rel_tol (interval-halving until two refinement levels agree).
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol);

std::vector<double> cumulative_arclength(const std::vector<Vec2>& pts);

/// Surface area of the unit m-sphere S^m in R^{m+1} (|S^0| = 2).
double unit_sphere_area(int m);

}  // namespace rotmcf
