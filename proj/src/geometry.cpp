#include "rotmcf/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace rotmcf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sq(double a) { return a * a; }

}  // namespace

double norm(Vec2 a) { return std::hypot(a.x, a.y); }

Dimension::Dimension(int n) : n_(n) {
  if (n < 2) throw std::invalid_argument("hypersurface dimension must be >= 2");
}

// --- quadrature -------------------------------------------------------------

void gauss_legendre(int m, std::vector<double>& nodes, std::vector<double>& weights) {
  if (m < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  nodes.assign(m, 0.0);
  weights.assign(m, 0.0);
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      // Legendre recurrence for P_m(x) and P'_m(x)
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= m; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = m * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[m - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[i] = w;
    weights[m - 1 - i] = w;
  }
}

namespace {

struct GaussRule {
  std::vector<double> x, w;
  explicit GaussRule(int m) { gauss_legendre(m, x, w); }
  double apply(const std::function<double(double)>& f, double a, double b) const {
    double mid = 0.5 * (a + b), half = 0.5 * (b - a), s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * f(mid + half * x[i]);
    return half * s;
  }
};

double integrate_rec(const GaussRule& rule, const std::function<double(double)>& f,
                     double a, double b, double whole, double tol, int depth) {
  double mid = 0.5 * (a + b);
  double left = rule.apply(f, a, mid);
  double right = rule.apply(f, mid, b);
  double delta = left + right - whole;
  double floor = 4e-15 * (std::abs(left) + std::abs(right));  // machine noise
  if (std::abs(delta) <= std::max(tol, floor) || depth >= 28) return left + right;
  return integrate_rec(rule, f, a, mid, left, 0.5 * tol, depth + 1) +
         integrate_rec(rule, f, mid, b, right, 0.5 * tol, depth + 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol) {
  static const GaussRule rule(15);
  double whole = rule.apply(f, a, b);
  double tol = std::max(std::abs(whole) * rel_tol, 1e-300);
  return integrate_rec(rule, f, a, b, whole, tol, 0);
}

double unit_sphere_area(int m) {
  if (m < 0) throw std::invalid_argument("unit_sphere_area: m >= 0");
  return 2.0 * std::pow(kPi, 0.5 * (m + 1)) / std::tgamma(0.5 * (m + 1));
}

// --- catenoid reference -------------------------------------------------------

namespace {

// Integral_1^inf ds / sqrt(s^{2(n-1)} - 1) with the s = 1 + t^2 substitution on
// [1, 2] (clears the endpoint singularity) and s = 2/tau on the tail.
double asymptote_integral(int n, double rel_tol) {
  const int m = n - 1;
  auto near_part = [m](double t) {
    // 2t / sqrt((1+t^2)^{2m} - 1), stable for tiny t
    if (t == 0.0) return 2.0 / std::sqrt(2.0 * m);
    double growth = std::expm1(2.0 * m * std::log1p(t * t)) / (t * t);
    return 2.0 / std::sqrt(growth);
  };
  auto tail_part = [m](double tau) {
    // (2/tau^2) / sqrt((2/tau)^{2m} - 1) in overflow-free form
    return std::pow(2.0, 1 - m) * std::pow(tau, m - 2) /
           std::sqrt(1.0 - std::pow(0.5 * tau, 2 * m));
  };
  return integrate(near_part, 0.0, 1.0, rel_tol) +
         integrate(tail_part, 0.0, 1.0, rel_tol);
}

}  // namespace

double half_width(Dimension n) {
  if (n.value() == 2) return kInf;
  return 0.5 * asymptote_integral(n.value(), 1e-10);
}

double catenoid_asymptote(Dimension n) {
  if (n.value() == 2) return kInf;
  return asymptote_integral(n.value(), 1e-10);
}

namespace {

// Marches the radius-1 profile outward from the neck and reports w at the
// requested stations (strictly increasing, all inside the domain). The march
// starts from the series w = 1 + (n-1)x^2/2 + (n-1)^2(2n-3)x^4/24, which
// clears the square-root degeneracy of w_x = sqrt(w^{2(n-1)} - 1) at x = 0;
// past the handoff it integrates the equivalent smooth system
// (w' = p, p' = (n-1) w^{2n-3}), whose first integral is the defining ODE.
std::vector<double> march_profile(int n, const std::vector<double>& stations) {
  const int m = n - 1;
  auto series = [m](double x) {
    return 1.0 + 0.5 * m * x * x + m * m * (2.0 * m - 1.0) * x * x * x * x / 24.0;
  };
  auto series_slope = [m](double x) {
    return m * x + m * m * (2.0 * m - 1.0) * x * x * x / 6.0;
  };
  std::vector<double> out;
  out.reserve(stations.size());
  const double x_series = 0.01;
  std::size_t next = 0;
  while (next < stations.size() && stations[next] <= x_series) {
    out.push_back(series(stations[next]));
    ++next;
  }
  if (next >= stations.size()) return out;
  auto accel = [m](double w) { return m * std::pow(w, 2 * m - 1); };
  double x = x_series;
  double w = series(x_series);
  double p = series_slope(x_series);
  std::size_t guard = 0;
  while (next < stations.size()) {
    double target = stations[next];
    double h = std::min({1e-3, target - x, 0.02 * w / std::max(1.0, p)});
    h = std::max(h, 1e-12);
    double k1w = p, k1p = accel(w);
    double k2w = p + 0.5 * h * k1p, k2p = accel(w + 0.5 * h * k1w);
    double k3w = p + 0.5 * h * k2p, k3p = accel(w + 0.5 * h * k2w);
    double k4w = p + h * k3p, k4p = accel(w + h * k3w);
    w += h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
    p += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    x += h;
    if (x >= target - 1e-13) {
      out.push_back(w);
      ++next;
    }
    if (++guard > 50'000'000) throw std::runtime_error("catenoid march stalled");
  }
  return out;
}

}  // namespace

double catenoid_profile(const CatenoidSpec& spec, double x) {
  if (spec.radius <= 0.0) throw std::invalid_argument("catenoid radius must be > 0");
  const double xi = std::abs(x) / spec.radius;
  if (spec.n.value() == 2) return spec.radius * std::cosh(xi);
  const double limit = catenoid_asymptote(spec.n);
  if (xi >= limit) {
    std::ostringstream msg;
    msg << "catenoid profile undefined at |x| = " << std::abs(x)
        << "; the profile diverges at |x| = " << spec.radius * limit;
    throw ProfileDomainError(msg.str(), spec.radius * limit);
  }
  return spec.radius * march_profile(spec.n.value(), {xi}).front();
}

double catenoid_slope(const CatenoidSpec& spec, double x) {
  double w = catenoid_profile(spec, x) / spec.radius;
  double p = std::expm1(2.0 * (spec.n.value() - 1) * std::log(w));
  double s = p > 0.0 ? std::sqrt(p) : 0.0;
  return x >= 0.0 ? s : -s;
}

ProfileCurve catenoid_graph(const CatenoidSpec& spec, double x_max, double dx) {
  if (x_max <= 0.0 || dx <= 0.0) throw std::invalid_argument("catenoid_graph: bad grid");
  const double limit = spec.radius * catenoid_asymptote(spec.n);
  if (x_max >= limit) {
    throw ProfileDomainError("catenoid_graph: x_max reaches the profile asymptote", limit);
  }
  const int half = std::max(1, static_cast<int>(std::llround(x_max / dx)));
  const double step = x_max / half;
  std::vector<double> stations(half);
  for (int k = 1; k <= half; ++k) stations[k - 1] = k * step / spec.radius;
  std::vector<double> w;
  if (spec.n.value() == 2) {
    w.resize(half);
    for (int k = 0; k < half; ++k) w[k] = std::cosh(stations[k]);
  } else {
    w = march_profile(spec.n.value(), stations);
  }
  ProfileCurve curve;
  curve.mode = CurveMode::graph;
  curve.symmetric = true;
  curve.points.resize(2 * half + 1);
  curve.points[half] = {0.0, spec.radius};
  for (int k = 1; k <= half; ++k) {
    Vec2 p{k * step, spec.radius * w[k - 1]};
    curve.points[half + k] = p;
    curve.points[half - k] = {-p.x, p.y};
  }
  return curve;
}

namespace {

// arclength march of (x, y, theta): x' = cos, y' = sin, theta' = (n-1)cos/y,
// recording a sample every ds; stops when `done(y, s)` fires.
std::vector<Vec2> march_branch(const CatenoidSpec& spec, double ds,
                               const std::function<bool(double, double)>& done) {
  const int m = spec.n.value() - 1;
  auto rhs = [m](const std::array<double, 3>& s, std::array<double, 3>& d) {
    d[0] = std::cos(s[2]);
    d[1] = std::sin(s[2]);
    d[2] = m * std::cos(s[2]) / s[1];
  };
  auto rk4 = [&rhs](std::array<double, 3>& s, double step) {
    std::array<double, 3> k1, k2, k3, k4, tmp;
    rhs(s, k1);
    for (int i = 0; i < 3; ++i) tmp[i] = s[i] + 0.5 * step * k1[i];
    rhs(tmp, k2);
    for (int i = 0; i < 3; ++i) tmp[i] = s[i] + 0.5 * step * k2[i];
    rhs(tmp, k3);
    for (int i = 0; i < 3; ++i) tmp[i] = s[i] + step * k3[i];
    rhs(tmp, k4);
    for (int i = 0; i < 3; ++i) s[i] += step / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  };
  std::array<double, 3> state{0.0, spec.radius, 0.0};
  std::vector<Vec2> branch;
  const double h = ds / 8.0;
  double arclen = 0.0;
  long guard = 0;
  while (!done(state[1], arclen)) {
    for (int sub = 0; sub < 8; ++sub) rk4(state, h);
    arclen += ds;
    branch.push_back({state[0], state[1]});
    if (++guard > 100'000'000) throw std::runtime_error("catenoid march stalled");
  }
  return branch;
}

ProfileCurve mirror_branch(const CatenoidSpec& spec, const std::vector<Vec2>& branch) {
  ProfileCurve curve;
  curve.mode = CurveMode::parametric;
  curve.symmetric = true;
  curve.points.resize(2 * branch.size() + 1);
  const std::size_t half = branch.size();
  curve.points[half] = {0.0, spec.radius};
  for (std::size_t k = 0; k < half; ++k) {
    curve.points[half + 1 + k] = branch[k];
    curve.points[half - 1 - k] = {-branch[k].x, branch[k].y};
  }
  return curve;
}

}  // namespace

ProfileCurve catenoid_polyline(const CatenoidSpec& spec, double y_max, double ds) {
  if (ds <= 0.0) throw std::invalid_argument("catenoid_polyline: ds must be > 0");
  if (y_max <= spec.radius)
    throw std::invalid_argument("catenoid_polyline: y_max must exceed the neck radius");
  auto branch = march_branch(spec, ds, [y_max](double y, double) { return y >= y_max; });
  return mirror_branch(spec, branch);
}

ProfileCurve catenoid_polyline_by_arclength(const CatenoidSpec& spec, double s_max,
                                            double ds) {
  if (ds <= 0.0 || s_max <= ds)
    throw std::invalid_argument("catenoid_polyline_by_arclength: bad spacing");
  auto branch =
      march_branch(spec, ds, [s_max](double, double s) { return s >= s_max - 1e-12; });
  return mirror_branch(spec, branch);
}

double height_at(const ProfileCurve& curve, double x) {
  const auto& p = curve.points;
  if (p.size() < 2) throw std::invalid_argument("height_at: curve too short");
  if (x < p.front().x || x > p.back().x)
    throw std::out_of_range("height_at: x outside the sampled range");
  std::size_t seg = 0;
  {
    std::size_t lo = 0, hi = p.size() - 1;
    while (hi - lo > 1) {
      std::size_t mid = (lo + hi) / 2;
      (p[mid].x <= x ? lo : hi) = mid;
    }
    seg = lo;
  }
  std::size_t first = (seg == 0) ? 0 : seg - 1;
  std::size_t last = std::min(first + 3, p.size() - 1);
  first = (last >= 3) ? last - 3 : 0;
  double acc = 0.0;
  for (std::size_t i = first; i <= last; ++i) {
    double w = 1.0;
    for (std::size_t j = first; j <= last; ++j) {
      if (j == i) continue;
      w *= (x - p[j].x) / (p[i].x - p[j].x);
    }
    acc += w * p[i].y;
  }
  return acc;
}

// --- grim reaper ----------------------------------------------------------

double grim_reaper_height(const GrimReaperSpec& spec, double x, double t) {
  if (spec.half_width <= 0.0) throw std::invalid_argument("reaper half_width must be > 0");
  if (std::abs(x) >= spec.half_width) {
    std::ostringstream msg;
    msg << "grim reaper undefined at |x| = " << std::abs(x) << " >= " << spec.half_width;
    throw ProfileDomainError(msg.str(), spec.half_width);
  }
  const double c = spec.speed();
  return spec.vertical_offset + c * t - std::log(std::cos(c * x)) / c;
}

ProfileCurve grim_reaper_graph(const GrimReaperSpec& spec, double span_fraction,
                               double dx, double t) {
  if (span_fraction <= 0.0 || span_fraction >= 1.0)
    throw std::invalid_argument("grim_reaper_graph: span_fraction in (0,1)");
  const double x_max = span_fraction * spec.half_width;
  const int half = std::max(1, static_cast<int>(std::llround(x_max / dx)));
  const double step = x_max / half;
  ProfileCurve curve;
  curve.mode = CurveMode::graph;
  curve.symmetric = true;
  curve.points.resize(2 * half + 1);
  for (int k = -half; k <= half; ++k) {
    double x = k * step;
    curve.points[half + k] = {x, grim_reaper_height(spec, x, t)};
  }
  return curve;
}

// --- profile validation -----------------------------------------------------

bool polyline_is_simple(const std::vector<Vec2>& pts) {
  if (pts.size() < 3) return true;
  bool monotone = true;
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (pts[i].x <= pts[i - 1].x) {
      monotone = false;
      break;
    }
  if (monotone) return true;  // graphs of functions cannot self-intersect
  auto intersects = [](Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
    double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
  };
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    for (std::size_t j = i + 2; j + 1 < pts.size(); ++j) {
      if (intersects(pts[i], pts[i + 1], pts[j], pts[j + 1])) return false;
    }
  }
  return true;
}

void validate_profile(const ProfileCurve& curve) {
  if (curve.points.size() < 3)
    throw std::invalid_argument("profile curve needs at least 3 samples");
  for (const auto& p : curve.points)
    if (!(p.y > 0.0))
      throw std::invalid_argument("profile curve must stay strictly above the axis");
  if (curve.mode == CurveMode::graph) {
    for (std::size_t i = 1; i < curve.points.size(); ++i)
      if (curve.points[i].x <= curve.points[i - 1].x)
        throw std::invalid_argument("graph-mode profile needs strictly increasing x");
  }
  if (!polyline_is_simple(curve.points))
    throw std::invalid_argument("profile polyline must be simple");
}

// --- pointwise geometry -----------------------------------------------------

Vec2 tangent_at(const ProfileCurve& curve, std::size_t i) {
  const auto& p = curve.points;
  if (p.size() < 2) throw std::invalid_argument("tangent_at: curve too short");
  Vec2 d;
  if (i == 0)
    d = p[1] - p[0];
  else if (i + 1 >= p.size())
    d = p[p.size() - 1] - p[p.size() - 2];
  else
    d = p[i + 1] - p[i - 1];
  double len = norm(d);
  if (len <= 0.0) throw std::invalid_argument("tangent_at: degenerate spacing");
  return {d.x / len, d.y / len};
}

Vec2 outward_normal_at(const ProfileCurve& curve, std::size_t i) {
  Vec2 t = tangent_at(curve, i);
  return {-t.y, t.x};
}

PointGeometry point_geometry(const ProfileCurve& curve, std::size_t i, Dimension n) {
  const auto& p = curve.points;
  if (i == 0 || i + 1 >= p.size())
    throw std::out_of_range("point_geometry: boundary sample has no stencil");
  if (!(p[i].y > 0.0)) throw std::invalid_argument("point_geometry: sample on the axis");

  PointGeometry g;
  if (curve.mode == CurveMode::graph) {
    // same nonuniform stencil as the graph integrator, so that
    // H * sqrt(1+u_x^2) reproduces its right-hand side exactly
    const double hl = p[i].x - p[i - 1].x;
    const double hr = p[i + 1].x - p[i].x;
    if (!(hl > 0.0) || !(hr > 0.0))
      throw std::invalid_argument("point_geometry: degenerate graph spacing");
    const double denom = hl * hr * (hl + hr);
    const double ux =
        (p[i + 1].y * hl * hl - p[i - 1].y * hr * hr + p[i].y * (hr * hr - hl * hl)) / denom;
    const double uxx = 2.0 * (p[i + 1].y * hl + p[i - 1].y * hr - p[i].y * (hl + hr)) / denom;
    const double v2 = 1.0 + ux * ux;
    g.v = std::sqrt(v2);
    g.theta = std::atan(ux);
    g.k = uxx / (v2 * g.v);
    g.kappa_rot = -1.0 / (p[i].y * g.v);
  } else {
    // parametrization-free stencil (circumscribed circle through the three
    // samples); robust on near-vertical parts where the graph form degrades
    const Vec2 a = p[i] - p[i - 1];
    const Vec2 b = p[i + 1] - p[i];
    const double la = norm(a), lb = norm(b), lc = norm(a + b);
    if (la <= 0.0 || lb <= 0.0 || lc <= 0.0)
      throw std::invalid_argument("point_geometry: degenerate spacing");
    g.k = 2.0 * cross(a, b) / (la * lb * lc);
    const Vec2 t = {(a.x + b.x) / lc, (a.y + b.y) / lc};
    g.theta = std::atan2(t.y, t.x);
    g.kappa_rot = -t.x / p[i].y;
    g.v = 1.0 / std::clamp(std::abs(t.x), 1e-12, 1.0);
  }
  g.H = g.k + (n.value() - 1) * g.kappa_rot;
  g.A2 = g.k * g.k + (n.value() - 1) * g.kappa_rot * g.kappa_rot;
  return g;
}

// --- offsets ------------------------------------------------------------------

ProfileCurve normal_offset(const ProfileCurve& curve, double delta) {
  if (curve.points.size() < 3)
    throw std::invalid_argument("normal_offset: curve needs at least 3 samples");
  ProfileCurve out = curve;
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    Vec2 nu = outward_normal_at(curve, i);
    out.points[i] = curve.points[i] + delta * nu;
  }
  for (const auto& q : out.points)
    if (!(q.y > 0.0))
      throw std::invalid_argument("normal_offset: offset curve touches the axis");
  if (!polyline_is_simple(out.points))
    throw ReachExceededError("normal_offset: offset exceeds the tubular reach (self-intersection)");
  return out;
}

// --- Gaussian density -----------------------------------------------------------

DensityResult gaussian_density(const ProfileCurve& curve, Dimension n, Vec2 probe,
                               double r, const DensityOptions& opts) {
  if (!(r > 0.0)) throw std::invalid_argument("gaussian_density: r must be > 0");
  if (curve.points.size() < 2)
    throw std::invalid_argument("gaussian_density: curve too short");
  const int nd = n.value();
  const double rho = probe.y;
  if (rho < 0.0) throw std::invalid_argument("gaussian_density: probe radius >= 0");

  // spherical average: Integral_{S^{n-1}} g(<w,e1>) = |S^{n-2}| * sum a_k g(u_k)
  // with u = cos(phi) and weight sin^{n-2}(phi); Gauss-Legendre in phi keeps the
  // n = 2 endpoint singularity out of the rule.
  std::vector<double> gx, gw;
  gauss_legendre(opts.azimuthal_order, gx, gw);
  const double sphere_factor = unit_sphere_area(nd - 2);
  std::vector<double> au(opts.azimuthal_order), aw(opts.azimuthal_order);
  for (int k = 0; k < opts.azimuthal_order; ++k) {
    double phi = 0.5 * kPi * (gx[k] + 1.0);
    au[k] = std::cos(phi);
    aw[k] = sphere_factor * 0.5 * kPi * gw[k] * std::pow(std::sin(phi), nd - 2);
  }

  std::vector<double> sx, sw;
  gauss_legendre(opts.segment_order, sx, sw);

  const double inv4r2 = 1.0 / (4.0 * r * r);
  const double prefactor = std::pow(4.0 * kPi * r * r, -0.5 * nd);
  const double max_seg = 0.5 * r;

  auto integrand = [&](Vec2 q) {
    const double d2 = sq(q.x - probe.x) + sq(q.y - rho);
    double s = 0.0;
    for (int k = 0; k < opts.azimuthal_order; ++k) {
      double expo = -(d2 + 2.0 * q.y * rho * (1.0 - au[k])) * inv4r2;
      if (expo > -745.0) s += aw[k] * std::exp(expo);
    }
    return prefactor * std::pow(q.y, nd - 1) * s;
  };

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < curve.points.size(); ++i) {
    const Vec2 a = curve.points[i], b = curve.points[i + 1];
    const double len = norm(b - a);
    if (len <= 0.0) continue;
    // skip segments whose Gaussian weight cannot matter
    const double dmin = point_segment_distance({probe.x, rho}, a, b);
    const double ymax = std::max(a.y, b.y);
    if (sq(dmin) * inv4r2 - (nd - 1) * std::log(std::max(1.0, ymax)) > 60.0) continue;
    const int pieces = std::max(1, static_cast<int>(std::ceil(len / max_seg)));
    for (int piece = 0; piece < pieces; ++piece) {
      const double t0 = static_cast<double>(piece) / pieces;
      const double t1 = static_cast<double>(piece + 1) / pieces;
      const double half = 0.5 * (t1 - t0) * len;
      for (int q = 0; q < opts.segment_order; ++q) {
        double t = 0.5 * (t0 + t1) + 0.5 * (t1 - t0) * sx[q];
        Vec2 pos = {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
        total += half * sw[q] * integrand(pos);
      }
    }
  }

  // Tail bound past the curve ends: a full hyperplane at the end distance
  // would contribute exp(-d^2 / 4r^2); an end closing onto the axis misses at
  // most the n-ball of radius end.y under a kernel bounded by its peak.
  const double ball_vol = std::pow(kPi, 0.5 * nd) / std::tgamma(0.5 * nd + 1.0);
  double bound = 0.0;
  for (const Vec2 end : {curve.points.front(), curve.points.back()}) {
    double d2 = sq(end.x - probe.x) + sq(end.y - rho);
    double plane_tail = std::exp(-d2 * inv4r2);
    double axis_disk = prefactor * ball_vol * std::pow(end.y, nd);
    bound += std::min(plane_tail, axis_disk);
  }
  if (bound > opts.coverage_tol) {
    std::ostringstream msg;
    msg << "gaussian_density: truncation-mass bound " << bound
        << " exceeds tolerance " << opts.coverage_tol;
    throw CoverageError(msg.str(), bound);
  }
  return {total, bound};
}

// --- distances ----------------------------------------------------------------

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 <= 0.0) return norm(p - a);
  double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return norm(p - (a + t * ab));
}

double point_polyline_distance(Vec2 p, const std::vector<Vec2>& pts) {
  if (pts.size() < 2) throw std::invalid_argument("point_polyline_distance: empty polyline");
  double best = kInf;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    double lo = std::min(pts[i].x, pts[i + 1].x), hi = std::max(pts[i].x, pts[i + 1].x);
    double xgap = (p.x < lo) ? lo - p.x : (p.x > hi ? p.x - hi : 0.0);
    if (xgap >= best) continue;
    best = std::min(best, point_segment_distance(p, pts[i], pts[i + 1]));
  }
  return best;
}

SupDistance sup_distance_to_polyline(const ProfileCurve& curve,
                                     const std::vector<Vec2>& reference) {
  if (curve.points.empty() || reference.size() < 2)
    throw std::invalid_argument("sup_distance: empty input");
  SupDistance result{-1.0, 0.0};
  for (const auto& p : curve.points) {
    double d = point_polyline_distance(p, reference);
    if (d > result.value) result = {d, p.x};
  }
  return result;
}

SupDistance sup_distance_to_catenoid(const ProfileCurve& curve, const CatenoidSpec& spec) {
  if (curve.points.empty()) throw std::invalid_argument("sup_distance: empty curve");
  double ymax = 0.0;
  for (const auto& p : curve.points) ymax = std::max(ymax, p.y);
  ProfileCurve ref = catenoid_polyline(spec, std::max(2.0 * spec.radius, 1.5 * ymax),
                                       0.005 * spec.radius);
  return sup_distance_to_polyline(curve, ref.points);
}

double min_height_above_catenoid(const ProfileCurve& curve, const CatenoidSpec& spec) {
  const double limit = spec.radius * catenoid_asymptote(spec.n);
  double worst = kInf;
  for (const auto& p : curve.points) {
    if (std::abs(p.x) >= limit) continue;  // beyond the asymptote: outside by default
    worst = std::min(worst, p.y - catenoid_profile(spec, p.x));
  }
  if (worst == kInf) throw std::invalid_argument("min_height_above_catenoid: no overlap");
  return worst;
}

double polyline_separation(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
  if (a.size() < 2 || b.size() < 2)
    throw std::invalid_argument("polyline_separation: polylines too short");
  double best = kInf;
  for (const auto& p : a) best = std::min(best, point_polyline_distance(p, b));
  for (const auto& p : b) best = std::min(best, point_polyline_distance(p, a));
  return best;
}

std::vector<double> cumulative_arclength(const std::vector<Vec2>& pts) {
  std::vector<double> s(pts.size(), 0.0);
  for (std::size_t i = 1; i < pts.size(); ++i) s[i] = s[i - 1] + norm(pts[i] - pts[i - 1]);
  return s;
}

}  // namespace rotmcf
