#include "rotmcf/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace rotmcf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double snapshot_min_H(const ProfileCurve& curve, Dimension n) {
  double worst = kInf;
  for (std::size_t i = 1; i + 1 < curve.points.size(); ++i)
    worst = std::min(worst, point_geometry(curve, i, n).H);
  return worst;
}

std::size_t tip_index(const ProfileCurve& curve) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < curve.points.size(); ++i)
    if (curve.points[i].y < curve.points[best].y) best = i;
  return best;
}

// curvature of a planar curve (no y > 0 requirement, unlike point_geometry)
double planar_curvature(const ProfileCurve& curve, std::size_t i) {
  const auto& p = curve.points;
  if (i == 0 || i + 1 >= p.size())
    throw std::out_of_range("planar_curvature: boundary sample");
  if (curve.mode == CurveMode::graph) {
    const double hl = p[i].x - p[i - 1].x;
    const double hr = p[i + 1].x - p[i].x;
    const double denom = hl * hr * (hl + hr);
    const double ux =
        (p[i + 1].y * hl * hl - p[i - 1].y * hr * hr + p[i].y * (hr * hr - hl * hl)) / denom;
    const double uxx = 2.0 * (p[i + 1].y * hl + p[i - 1].y * hr - p[i].y * (hl + hr)) / denom;
    return uxx / std::pow(1.0 + ux * ux, 1.5);
  }
  const Vec2 a = p[i] - p[i - 1];
  const Vec2 b = p[i + 1] - p[i];
  const double la = norm(a), lb = norm(b), lc = norm(a + b);
  if (la <= 0.0 || lb <= 0.0 || lc <= 0.0)
    throw std::invalid_argument("planar_curvature: degenerate spacing");
  return 2.0 * cross(a, b) / (la * lb * lc);
}

// sub-sample tip: vertex of the parabola through the lowest sample and its
// neighbors (Newton form)
Vec2 refined_tip(const ProfileCurve& curve) {
  std::size_t i = tip_index(curve);
  const auto& p = curve.points;
  if (i == 0 || i + 1 >= p.size()) return p[i];
  double x0 = p[i - 1].x, x1 = p[i].x, x2 = p[i + 1].x;
  double f01 = (p[i].y - p[i - 1].y) / (x1 - x0);
  double f12 = (p[i + 1].y - p[i].y) / (x2 - x1);
  double f012 = (f12 - f01) / (x2 - x0);
  if (std::abs(f012) < 1e-300) return p[i];
  double xt = 0.5 * (x0 + x1) - f01 / (2.0 * f012);
  double yt = p[i - 1].y + f01 * (xt - x0) + f012 * (xt - x0) * (xt - x1);
  return {xt, yt};
}

}  // namespace

SeriesReport verify_mean_convex(const FlowTrajectory& traj, double tol) {
  if (traj.snapshots.empty())
    throw std::invalid_argument("verify_mean_convex: empty trajectory");
  SeriesReport report;
  report.threshold = -tol;
  report.pass = true;
  for (const auto& snap : traj.snapshots) {
    double h = snapshot_min_H(snap.curve, traj.n);
    report.series.push_back({snap.t, h});
    if (h < -tol) report.pass = false;
  }
  return report;
}

SeriesReport verify_avoidance(const FlowTrajectory& a, const FlowTrajectory& b,
                              double tol) {
  if (a.snapshots.empty() || b.snapshots.empty())
    throw std::invalid_argument("verify_avoidance: empty trajectory");
  const double t0 = std::max(a.snapshots.front().t, b.snapshots.front().t);
  const double t1 = std::min(a.snapshots.back().t, b.snapshots.back().t);
  if (t1 < t0)
    throw std::invalid_argument("verify_avoidance: disjoint time ranges");
  double cadence = kInf;
  for (std::size_t k = 1; k < a.snapshots.size(); ++k)
    cadence = std::min(cadence, a.snapshots[k].t - a.snapshots[k - 1].t);
  for (std::size_t k = 1; k < b.snapshots.size(); ++k)
    cadence = std::min(cadence, b.snapshots[k].t - b.snapshots[k - 1].t);
  if (!std::isfinite(cadence)) cadence = std::max(1e-6, t1 - t0);

  SeriesReport report;
  report.threshold = tol;
  const int steps = (t1 > t0) ? std::max(1, static_cast<int>(std::round((t1 - t0) / cadence)))
                              : 0;
  for (int k = 0; k <= steps; ++k) {
    double t = (steps == 0) ? t0 : t0 + (t1 - t0) * k / steps;
    double sep = polyline_separation(curve_at_time(a, t).points, curve_at_time(b, t).points);
    report.series.push_back({t, sep});
  }
  double initial = report.series.front().second;
  if (initial <= 1e-12) {
    report.degenerate = true;  // same (or touching) flows: not a failure mode
    report.pass = true;
    return report;
  }
  report.pass = true;
  for (const auto& [t, sep] : report.series)
    if (sep < initial - tol) report.pass = false;
  return report;
}

std::vector<std::pair<double, double>> tip_speed(const FlowTrajectory& traj) {
  const auto& snaps = traj.snapshots;
  std::vector<std::pair<double, double>> out;
  if (snaps.size() < 2) return out;
  out.reserve(snaps.size());
  for (std::size_t k = 0; k < snaps.size(); ++k) {
    std::size_t lo = (k == 0) ? 0 : k - 1;
    std::size_t hi = (k + 1 == snaps.size()) ? k : k + 1;
    double dt = snaps[hi].t - snaps[lo].t;
    double v = dt > 0.0
                   ? (tip_height_of(snaps[hi].curve) - tip_height_of(snaps[lo].curve)) / dt
                   : 0.0;
    out.push_back({snaps[k].t, v});
  }
  return out;
}

// --- grim reaper fit ------------------------------------------------------------

namespace {

struct FitWindow {
  std::vector<double> x, y;
  double x_tip = 0.0, y_tip = 0.0, k_tip = 0.0;
};

FitWindow extract_window(const ProfileCurve& curve, double window) {
  const auto s = cumulative_arclength(curve.points);
  const std::size_t it = tip_index(curve);
  FitWindow w;
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    if (std::abs(s[i] - s[it]) > window) continue;
    w.x.push_back(curve.points[i].x);
    w.y.push_back(curve.points[i].y);
  }
  if (w.x.size() < 8)
    throw std::invalid_argument("fit_grim_reaper: window holds fewer than 8 samples");
  for (std::size_t i = 1; i < w.x.size(); ++i)
    if (w.x[i] <= w.x[i - 1])
      throw std::invalid_argument("fit_grim_reaper: window is not graphical");
  Vec2 tip = refined_tip(curve);
  w.x_tip = tip.x;
  w.y_tip = tip.y;
  if (it == 0 || it + 1 >= curve.points.size())
    throw std::invalid_argument("fit_grim_reaper: tip on the window boundary");

  // noise-robust tip curvature: least-squares parabola over the central part
  // of the window (a 3-point stencil amplifies sample noise by 1/dx^2)
  {
    double span = (w.x.back() - w.x.front()) / 6.0;
    double s0 = 0, s1 = 0, s2 = 0, s3 = 0, s4 = 0, b0 = 0, b1 = 0, b2 = 0;
    int used = 0;
    for (std::size_t i = 0; i < w.x.size(); ++i) {
      double dx = w.x[i] - w.x_tip;
      if (std::abs(dx) > span) continue;
      double d2 = dx * dx;
      s0 += 1;
      s1 += dx;
      s2 += d2;
      s3 += d2 * dx;
      s4 += d2 * d2;
      b0 += w.y[i];
      b1 += w.y[i] * dx;
      b2 += w.y[i] * d2;
      ++used;
    }
    double k_est = 0.0;
    if (used >= 5) {
      // solve the 3x3 normal system for (alpha, beta, gamma)
      double A[3][4] = {{s0, s1, s2, b0}, {s1, s2, s3, b1}, {s2, s3, s4, b2}};
      for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int row = col + 1; row < 3; ++row)
          if (std::abs(A[row][col]) > std::abs(A[piv][col])) piv = row;
        std::swap(A[piv], A[col]);
        for (int row = col + 1; row < 3; ++row) {
          double f = A[row][col] / A[col][col];
          for (int q = col; q < 4; ++q) A[row][q] -= f * A[col][q];
        }
      }
      double sol[3];
      for (int p = 2; p >= 0; --p) {
        sol[p] = A[p][3];
        for (int q = p + 1; q < 3; ++q) sol[p] -= A[p][q] * sol[q];
        sol[p] /= A[p][p];
      }
      k_est = std::abs(2.0 * sol[2]) / std::pow(1.0 + sol[1] * sol[1], 1.5);
    } else {
      k_est = std::abs(planar_curvature(curve, it));
    }
    w.k_tip = (k_est > 1e-9) ? k_est : 1e-9;
  }
  return w;
}

// one Levenberg-damped Gauss-Newton descent from a fixed seed
ReaperFit fit_from_seed(const FitWindow& w, double c0) {
  double c = c0, x0 = w.x_tip, y0 = w.y_tip;
  const std::size_t m = w.x.size();
  auto rms = [&](double cc, double xx, double yy) {
    double worst_arg = 0.0;
    for (double xi : w.x) worst_arg = std::max(worst_arg, std::abs(cc * (xi - xx)));
    if (worst_arg >= 0.999 * kPi / 2.0 || !(cc > 0.0)) return kInf;
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      double arg = cc * (w.x[i] - xx);
      double r = yy - std::log(std::cos(arg)) / cc - w.y[i];
      acc += r * r;
    }
    return std::sqrt(acc / m);
  };
  double err = rms(c, x0, y0);
  if (!std::isfinite(err)) return {0.0, 0.0, 0.0, kInf, 0};
  double lambda = 1e-4;
  int iter = 0;
  for (; iter < 200; ++iter) {
    // normal equations for params (c, x0, y0)
    double JtJ[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
    double Jtr[3] = {0, 0, 0};
    for (std::size_t i = 0; i < m; ++i) {
      double xi = w.x[i] - x0;
      double arg = c * xi;
      double tn = std::tan(arg);
      double lc = std::log(std::cos(arg));
      double r = y0 - lc / c - w.y[i];
      double J[3] = {lc / (c * c) + xi * tn / c, -tn, 1.0};
      for (int p = 0; p < 3; ++p) {
        Jtr[p] += J[p] * r;
        for (int q = 0; q < 3; ++q) JtJ[p][q] += J[p] * J[q];
      }
    }
    double step[3];
    bool improved = false;
    for (int attempt = 0; attempt < 40 && !improved; ++attempt) {
      double A[3][4];
      for (int p = 0; p < 3; ++p) {
        for (int q = 0; q < 3; ++q) A[p][q] = JtJ[p][q] + (p == q ? lambda * JtJ[p][p] : 0.0);
        A[p][3] = -Jtr[p];
      }
      // 3x3 Gaussian elimination with partial pivoting
      bool singular = false;
      for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int row = col + 1; row < 3; ++row)
          if (std::abs(A[row][col]) > std::abs(A[piv][col])) piv = row;
        if (std::abs(A[piv][col]) < 1e-30) {
          singular = true;
          break;
        }
        std::swap(A[piv], A[col]);
        for (int row = col + 1; row < 3; ++row) {
          double f = A[row][col] / A[col][col];
          for (int q = col; q < 4; ++q) A[row][q] -= f * A[col][q];
        }
      }
      if (singular) {
        lambda *= 10.0;
        continue;
      }
      for (int p = 2; p >= 0; --p) {
        step[p] = A[p][3];
        for (int q = p + 1; q < 3; ++q) step[p] -= A[p][q] * step[q];
        step[p] /= A[p][p];
      }
      double trial = rms(c + step[0], x0 + step[1], y0 + step[2]);
      if (trial < err) {
        c += step[0];
        x0 += step[1];
        y0 += step[2];
        double gain = err - trial;
        err = trial;
        lambda = std::max(lambda * 0.3, 1e-12);
        improved = true;
        if (gain < 1e-15 * (1.0 + err)) {
          iter = 201;  // converged
        }
      } else {
        lambda *= 10.0;
      }
    }
    if (!improved) break;
  }
  ReaperFit fit;
  fit.half_width = kPi / (2.0 * c);
  fit.horizontal_offset = x0;
  fit.vertical_offset = y0;
  fit.residual = err;
  fit.iterations = iter;
  return fit;
}

}  // namespace

ReaperFit fit_grim_reaper(const ProfileCurve& curve, double window) {
  if (!(window > 0.0)) throw std::invalid_argument("fit_grim_reaper: window must be > 0");
  FitWindow w = extract_window(curve, window);
  // deterministic multi-start off the tip curvature (reaper tip curvature = c)
  ReaperFit best;
  best.residual = kInf;
  for (double scale : {1.0, 0.55, 1.8}) {
    ReaperFit fit = fit_from_seed(w, scale * w.k_tip);
    if (fit.residual < best.residual) best = fit;
  }
  if (!std::isfinite(best.residual))
    throw std::invalid_argument("fit_grim_reaper: no feasible seed");
  return best;
}

double tip_region_max_curvature(const ProfileCurve& curve, double window) {
  const std::size_t it = tip_index(curve);
  const double x_tip = curve.points[it].x;
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < curve.points.size(); ++i) {
    if (std::abs(curve.points[i].x - x_tip) > window) continue;
    worst = std::max(worst, std::abs(planar_curvature(curve, i)));
  }
  return worst;
}

// --- nonconvexity ------------------------------------------------------------------

NonconvexityReport nonconvexity_check(const ProfileCurve& curve, Dimension n,
                                      double principal_tol, double mean_tol) {
  validate_profile(curve);
  NonconvexityReport report;
  report.min_principal = kInf;
  report.min_H = kInf;
  for (std::size_t i = 1; i + 1 < curve.points.size(); ++i) {
    auto g = point_geometry(curve, i, n);
    report.min_principal = std::min({report.min_principal, g.k, g.kappa_rot});
    report.min_H = std::min(report.min_H, g.H);
  }
  report.mean_convex_yet_nonconvex =
      report.min_principal < -principal_tol && report.min_H >= -mean_tol;
  return report;
}

// --- Jacobi operator ------------------------------------------------------------------

StabilityResult jacobi_lambda1(const CatenoidSpec& spec, double L, int grid) {
  if (!(L > 0.0)) throw std::invalid_argument("jacobi_lambda1: L must be > 0");
  if (grid < 32) throw std::invalid_argument("jacobi_lambda1: grid must be >= 32");

  const double h = 2.0 * L / (grid + 1);
  // catenoid profile sampled at arclength multiples of h/2 so every node
  // s_i = -L + i h lands on a sample regardless of grid parity
  ProfileCurve cat = catenoid_polyline_by_arclength(spec, L + 3.0 * h, 0.5 * h);
  const std::size_t center = cat.points.size() / 2;

  std::vector<double> y(grid + 2), a2(grid + 2);  // including Dirichlet ends
  for (int i = 0; i <= grid + 1; ++i) {
    auto idx = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(center) +
                                        (2 * i - (grid + 1)));
    y[i] = cat.points[idx].y;
    a2[i] = point_geometry(cat, idx, spec.n).A2;
  }

  const int m = spec.n.value() - 1;
  std::vector<double> J(grid + 2);
  for (int i = 0; i <= grid + 1; ++i) J[i] = std::pow(y[i], m);

  // tridiagonal A phi = -(J phi')'/J - |A|^2 phi on interior nodes
  std::vector<double> diag(grid), lower(grid, 0.0), upper(grid, 0.0);
  double max_a2 = 0.0;
  for (int i = 1; i <= grid; ++i) {
    double jm = 0.5 * (J[i - 1] + J[i]);
    double jp = 0.5 * (J[i] + J[i + 1]);
    diag[i - 1] = (jm + jp) / (h * h * J[i]) - a2[i];
    if (i > 1) lower[i - 1] = -jm / (h * h * J[i]);
    if (i < grid) upper[i - 1] = -jp / (h * h * J[i]);
    max_a2 = std::max(max_a2, a2[i]);
  }

  // inverse iteration with a shift below the spectrum
  const double shift = -max_a2 - 1.0;
  std::vector<double> dd(grid), ll(grid), uu(grid);
  for (int i = 0; i < grid; ++i) {
    dd[i] = diag[i] - shift;
    ll[i] = lower[i];
    uu[i] = upper[i];
  }
  auto thomas = [&](std::vector<double>& rhs) {
    std::vector<double> c(grid), d(grid);
    c[0] = uu[0] / dd[0];
    d[0] = rhs[0] / dd[0];
    for (int i = 1; i < grid; ++i) {
      double m2 = dd[i] - ll[i] * c[i - 1];
      c[i] = uu[i] / m2;
      d[i] = (rhs[i] - ll[i] * d[i - 1]) / m2;
    }
    rhs[grid - 1] = d[grid - 1];
    for (int i = grid - 2; i >= 0; --i) rhs[i] = d[i] - c[i] * rhs[i + 1];
  };
  auto weighted_dot = [&](const std::vector<double>& u, const std::vector<double>& v) {
    double acc = 0.0;
    for (int i = 0; i < grid; ++i) acc += J[i + 1] * u[i] * v[i];
    return acc;
  };
  auto apply_A = [&](const std::vector<double>& u, std::vector<double>& out) {
    for (int i = 0; i < grid; ++i) {
      out[i] = diag[i] * u[i];
      if (i > 0) out[i] += lower[i] * u[i - 1];
      if (i + 1 < grid) out[i] += upper[i] * u[i + 1];
    }
  };

  std::vector<double> phi(grid, 1.0), Aphi(grid);
  double lambda = 0.0, lambda_prev = kInf;
  std::vector<double> history;
  int it = 0;
  for (; it < 500; ++it) {
    thomas(phi);
    double nrm = std::sqrt(weighted_dot(phi, phi));
    if (!(nrm > 0.0) || !std::isfinite(nrm))
      throw EigensolveError("jacobi_lambda1: inverse iteration degenerated", history);
    for (auto& v : phi) v /= nrm;
    apply_A(phi, Aphi);
    lambda = weighted_dot(phi, Aphi) / weighted_dot(phi, phi);
    history.push_back(lambda);
    if (std::abs(lambda - lambda_prev) < 1e-12 * std::max(1.0, std::abs(lambda))) break;
    lambda_prev = lambda;
  }
  if (it >= 500) throw EigensolveError("jacobi_lambda1: no convergence in 500 iterations", history);

  // principal eigenfunction: fix the sign, then require interior positivity
  double mass = 0.0;
  for (double v : phi) mass += v;
  if (mass < 0.0)
    for (auto& v : phi) v = -v;
  for (double v : phi)
    if (!(v > 0.0))
      throw EigensolveError("jacobi_lambda1: eigenfunction not positive", history);

  StabilityResult result;
  result.L = L;
  result.lambda1 = lambda;
  result.grid = grid;
  result.iterations = it + 1;
  result.s.resize(grid);
  for (int i = 1; i <= grid; ++i) result.s[i - 1] = -L + i * h;
  result.eigenfunction = phi;
  return result;
}

double lambda1_sign_change(const CatenoidSpec& spec, double L_lo, double L_hi,
                           int grid, double tol) {
  double f_lo = jacobi_lambda1(spec, L_lo, grid).lambda1;
  double f_hi = jacobi_lambda1(spec, L_hi, grid).lambda1;
  if (!(f_lo > 0.0) || !(f_hi < 0.0))
    throw std::invalid_argument("lambda1_sign_change: endpoints do not bracket a sign change");
  while (L_hi - L_lo > tol) {
    double mid = 0.5 * (L_lo + L_hi);
    (jacobi_lambda1(spec, mid, grid).lambda1 > 0.0 ? L_lo : L_hi) = mid;
  }
  return 0.5 * (L_lo + L_hi);
}

// --- blowup rescaling ----------------------------------------------------------------

BlowupResult blowup_rescale(const FlowTrajectory& traj, double t_m,
                            const BlowupOptions& opts) {
  const auto& snaps = traj.snapshots;
  if (snaps.size() < 3) throw std::invalid_argument("blowup_rescale: trajectory too short");
  if (t_m < snaps.front().t || t_m > snaps.back().t + 1e-12)
    throw std::invalid_argument("blowup_rescale: t_m outside the stored history");

  BlowupResult result;
  std::size_t base = 0;
  for (std::size_t k = 0; k < snaps.size(); ++k) {
    if (snaps[k].t <= t_m + 1e-12) base = k;
    if (snaps[k].t <= t_m + 1e-12)
      result.lambda_m =
          std::max(result.lambda_m, std::sqrt(std::max(0.0, snaps[k].diag.max_A2)));
  }
  result.t_m = snaps[base].t;
  const ProfileCurve& bc = snaps[base].curve;
  double best_a = -kInf;
  for (std::size_t i = 1; i + 1 < bc.points.size(); ++i) {
    double a = std::sqrt(point_geometry(bc, i, traj.n).A2);
    if (a > best_a) {
      best_a = a;
      result.x_m = std::abs(bc.points[i].x);  // symmetric flows: keep the x >= 0 branch
    }
  }
  result.base_scale = best_a;

  const double lam = result.base_scale;
  if (!(lam > 0.0)) throw std::invalid_argument("blowup_rescale: vanishing curvature scale");
  const double u_base = height_at(bc, result.x_m);

  double correction = 0.0;
  const int nt = std::max(3, opts.time_samples);
  for (int j = 0; j < nt; ++j) {
    double tau = -opts.span + opts.span * j / (nt - 1.0);
    double t = result.t_m + tau / (lam * lam);
    if (t < snaps.front().t - 1e-12)
      throw std::invalid_argument("blowup_rescale: insufficient history for the window");
    ProfileCurve slice = curve_at_time(traj, std::max(t, snaps.front().t));
    ProfileCurve out;
    out.mode = CurveMode::graph;
    for (int q = 0; q < opts.xi_samples; ++q) {
      double xi = -opts.xi_radius + 2.0 * opts.xi_radius * q / (opts.xi_samples - 1.0);
      double x = xi / lam + result.x_m;
      if (x < slice.points.front().x || x > slice.points.back().x) continue;
      double u = height_at(slice, x);
      out.points.push_back({xi, lam * (u - u_base)});
      correction = std::max(correction, (traj.n.value() - 1) / (lam * u));
    }
    if (out.points.size() < 5)
      throw std::invalid_argument("blowup_rescale: rescaled window has no coverage");
    result.rescaled_times.push_back(tau);
    result.rescaled_profiles.push_back(std::move(out));
  }
  result.correction_bound = correction;

  // sup curvature of the rescaled t = 0 profile (graph-mode samples)
  {
    const ProfileCurve& last = result.rescaled_profiles.back();
    double sup = 0.0;
    for (std::size_t i = 1; i + 1 < last.points.size(); ++i)
      sup = std::max(sup, std::abs(planar_curvature(last, i)));
    result.rescaled_sup_k = sup;
  }

  // residual of the rescaled flow against graphical CSF (centered in time)
  double worst = 0.0;
  for (std::size_t j = 1; j + 1 < result.rescaled_profiles.size(); ++j) {
    const auto& lo = result.rescaled_profiles[j - 1];
    const auto& mid = result.rescaled_profiles[j];
    const auto& hi = result.rescaled_profiles[j + 1];
    if (lo.points.size() != mid.points.size() || hi.points.size() != mid.points.size())
      continue;
    double dtau = result.rescaled_times[j + 1] - result.rescaled_times[j - 1];
    auto rhs = csf_rhs(mid);
    for (std::size_t i = 1; i + 1 < mid.points.size(); ++i) {
      double dudt = (hi.points[i].y - lo.points[i].y) / dtau;
      worst = std::max(worst, std::abs(dudt - rhs[i]));
    }
  }
  result.csf_residual = worst;
  return result;
}

// --- density monotonicity ---------------------------------------------------------------

DensityReport density_monotonicity(const FlowTrajectory& traj, Vec2 probe,
                                   double t_probe, const std::vector<double>& r_ladder,
                                   double slack, const DensityOptions& opts) {
  if (traj.snapshots.empty())
    throw std::invalid_argument("density_monotonicity: empty trajectory");
  DensityReport report;
  report.slack = slack;
  for (double r : r_ladder) {
    double t = t_probe - r * r;
    if (t < traj.snapshots.front().t - 1e-12)
      throw std::invalid_argument(
          "density_monotonicity: ladder reaches before the stored history");
    ProfileCurve slice = curve_at_time(traj, t);
    report.radii.push_back(r);
    report.values.push_back(gaussian_density(slice, traj.n, probe, r, opts).value);
  }
  report.nondecreasing = true;
  for (std::size_t k = 1; k < report.values.size(); ++k)
    if (report.values[k] < report.values[k - 1] - slack) report.nondecreasing = false;
  return report;
}

}  // namespace rotmcf
