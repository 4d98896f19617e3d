#include "rotmcf/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace rotmcf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_positive_height(const ProfileCurve& u, double floor) {
  for (std::size_t i = 0; i < u.points.size(); ++i) {
    if (!(u.points[i].y > floor)) {
      std::ostringstream msg;
      msg << "axis collision: sample " << i << " at x = " << u.points[i].x
          << " reached height " << u.points[i].y << " (floor " << floor << ")";
      throw AxisCollisionError(msg.str(), i);
    }
  }
}

void check_finite(const ProfileCurve& u) {
  for (std::size_t i = 0; i < u.points.size(); ++i) {
    if (!std::isfinite(u.points[i].x) || !std::isfinite(u.points[i].y)) {
      std::ostringstream msg;
      msg << "numeric instability at sample " << i;
      throw InstabilityError(msg.str(), i);
    }
  }
}

// Ends move only by the boundary drift (pin kinds) or track explicit anchors.
void apply_boundary(ProfileCurve& curve, const ProfileCurve& prev,
                    const BoundaryCondition& bc, double t_new, double dt) {
  if (bc.kind == BoundaryKind::fixed_value) {
    curve.points.front() = {bc.left.x, bc.left.y + bc.drift * t_new};
    curve.points.back() = {bc.right.x, bc.right.y + bc.drift * t_new};
  } else {
    curve.points.front() = {prev.points.front().x, prev.points.front().y + bc.drift * dt};
    curve.points.back() = {prev.points.back().x, prev.points.back().y + bc.drift * dt};
  }
}

std::vector<double> graph_rhs_impl(const ProfileCurve& u, int n, bool rotational_term) {
  const auto& p = u.points;
  if (p.size() < 3) throw std::invalid_argument("graph rhs: need at least 3 samples");
  std::vector<double> out(p.size(), 0.0);
  for (std::size_t i = 1; i + 1 < p.size(); ++i) {
    const double hl = p[i].x - p[i - 1].x;
    const double hr = p[i + 1].x - p[i].x;
    if (!(hl > 0.0) || !(hr > 0.0))
      throw std::invalid_argument("graph rhs: non-monotone or degenerate grid");
    const double denom = hl * hr * (hl + hr);
    const double ux =
        (p[i + 1].y * hl * hl - p[i - 1].y * hr * hr + p[i].y * (hr * hr - hl * hl)) / denom;
    const double uxx = 2.0 * (p[i + 1].y * hl + p[i - 1].y * hr - p[i].y * (hl + hr)) / denom;
    out[i] = uxx / (1.0 + ux * ux);
    if (rotational_term) out[i] -= (n - 1) / p[i].y;
  }
  return out;
}

std::vector<Vec2> parametric_velocity(const ProfileCurve& curve, int n, double redistribution) {
  const auto& p = curve.points;
  if (p.size() < 3) throw std::invalid_argument("parametric velocity: need 3 samples");
  std::vector<Vec2> vel(p.size(), Vec2{0.0, 0.0});
  for (std::size_t i = 1; i + 1 < p.size(); ++i) {
    const Vec2 a = p[i] - p[i - 1];
    const Vec2 b = p[i + 1] - p[i];
    const double hl = norm(a), hr = norm(b), lc = norm(a + b);
    if (!(hl > 0.0) || !(hr > 0.0) || !(lc > 0.0))
      throw std::invalid_argument("parametric velocity: degenerate spacing");
    const double k = 2.0 * cross(a, b) / (hl * hr * lc);
    const Vec2 tangent{(a.x + b.x) / lc, (a.y + b.y) / lc};
    const Vec2 nu{-tangent.y, tangent.x};
    const double H = k - (n - 1) * tangent.x / p[i].y;
    // tangential part of X_ss equalizes arclength without moving the shape
    const double scale = 2.0 / (hl * hr * (hl + hr));
    const Vec2 xss = scale * Vec2{hl * p[i + 1].x + hr * p[i - 1].x - (hl + hr) * p[i].x,
                                  hl * p[i + 1].y + hr * p[i - 1].y - (hl + hr) * p[i].y};
    const double tangential = redistribution * dot(xss, tangent);
    vel[i] = H * nu + tangential * tangent;
  }
  return vel;
}

}  // namespace

void validate_config(const FlowConfig& config) {
  if (!(config.dx > 0.0)) throw std::invalid_argument("config: dx must be > 0");
  if (!(config.cfl > 0.0) || config.cfl > 0.25)
    throw std::invalid_argument("config: cfl must lie in (0, 0.25]");
  if (!(config.snapshot_dt > 0.0))
    throw std::invalid_argument("config: snapshot cadence must be > 0");
  if (config.y_floor < 0.0) throw std::invalid_argument("config: y_floor must be >= 0");
}

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::none: return "none";
    case StopReason::t_end: return "t_end";
    case StopReason::escape: return "escape";
    case StopReason::tip_height: return "tip_height";
    case StopReason::axis_collision: return "axis_collision";
    case StopReason::instability: return "instability";
    case StopReason::embeddedness: return "embeddedness";
    case StopReason::timeout: return "timeout";
  }
  return "unknown";
}

std::vector<double> graphical_rhs(const ProfileCurve& u, Dimension n) {
  for (std::size_t i = 0; i < u.points.size(); ++i) {
    if (!(u.points[i].y > 0.0)) {
      std::ostringstream msg;
      msg << "graphical_rhs: sample " << i << " touches the axis";
      throw AxisCollisionError(msg.str(), i);
    }
  }
  return graph_rhs_impl(u, n.value(), true);
}

std::vector<double> csf_rhs(const ProfileCurve& u) { return graph_rhs_impl(u, 2, false); }

FlowState step_graphical(const FlowState& state, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_graphical: dt must be > 0");
  FlowState out = state;
  const auto f1 = graphical_rhs(state.curve, state.n);
  for (std::size_t i = 1; i + 1 < out.curve.points.size(); ++i)
    out.curve.points[i].y += dt * f1[i];
  if (state.config.scheme == TimeScheme::heun) {
    apply_boundary(out.curve, state.curve, state.config.boundary, state.t + dt, dt);
    const auto f2 = graphical_rhs(out.curve, state.n);
    for (std::size_t i = 1; i + 1 < out.curve.points.size(); ++i)
      out.curve.points[i].y = state.curve.points[i].y + 0.5 * dt * (f1[i] + f2[i]);
  }
  apply_boundary(out.curve, state.curve, state.config.boundary, state.t + dt, dt);
  out.t = state.t + dt;
  check_finite(out.curve);
  check_positive_height(out.curve, state.config.y_floor);
  return out;
}

FlowState step_parametric(const FlowState& state, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_parametric: dt must be > 0");
  FlowState out = state;
  const auto v1 = parametric_velocity(state.curve, state.n.value(), state.config.redistribution);
  for (std::size_t i = 1; i + 1 < out.curve.points.size(); ++i)
    out.curve.points[i] = state.curve.points[i] + dt * v1[i];
  if (state.config.scheme == TimeScheme::heun) {
    apply_boundary(out.curve, state.curve, state.config.boundary, state.t + dt, dt);
    const auto v2 = parametric_velocity(out.curve, state.n.value(), state.config.redistribution);
    for (std::size_t i = 1; i + 1 < out.curve.points.size(); ++i)
      out.curve.points[i] = state.curve.points[i] + 0.5 * dt * (v1[i] + v2[i]);
  }
  apply_boundary(out.curve, state.curve, state.config.boundary, state.t + dt, dt);
  out.t = state.t + dt;
  check_finite(out.curve);
  check_positive_height(out.curve, state.config.y_floor);
  if (!polyline_is_simple(out.curve.points))
    throw EmbeddednessError("step_parametric: curve self-intersects");
  return out;
}

// --- remeshing ---------------------------------------------------------------

namespace {

// cubic Lagrange interpolation of the polyline as a function of arclength
Vec2 eval_at_arclength(const std::vector<Vec2>& pts, const std::vector<double>& s,
                       double target) {
  const std::size_t count = pts.size();
  auto it = std::upper_bound(s.begin(), s.end(), target);
  std::size_t seg = (it == s.begin()) ? 0 : (it - s.begin() - 1);
  seg = std::min(seg, count - 2);
  std::size_t lo = (seg == 0) ? 0 : seg - 1;
  std::size_t hi = std::min(lo + 3, count - 1);
  lo = (hi >= 3) ? hi - 3 : 0;
  Vec2 acc{0.0, 0.0};
  for (std::size_t i = lo; i <= hi; ++i) {
    double w = 1.0;
    for (std::size_t j = lo; j <= hi; ++j) {
      if (j == i) continue;
      w *= (target - s[j]) / (s[i] - s[j]);
    }
    acc = acc + w * pts[i];
  }
  return acc;
}

std::vector<Vec2> resample_stations(const std::vector<Vec2>& pts,
                                    const std::vector<double>& s, double s_lo,
                                    double s_hi, std::size_t count) {
  std::vector<Vec2> out(count);
  for (std::size_t k = 0; k < count; ++k) {
    double target = s_lo + (s_hi - s_lo) * static_cast<double>(k) / (count - 1);
    out[k] = eval_at_arclength(pts, s, target);
  }
  return out;
}

}  // namespace

ProfileCurve remesh(const ProfileCurve& curve, double target_ds) {
  if (!(target_ds > 0.0)) throw std::invalid_argument("remesh: target spacing must be > 0");
  if (curve.points.size() < 3) throw std::invalid_argument("remesh: curve too short");
  const auto s = cumulative_arclength(curve.points);
  const double total = s.back();
  if (!(total > 0.0)) throw std::invalid_argument("remesh: degenerate (zero length) input");

  ProfileCurve out = curve;
  if (curve.symmetric) {
    // resample the right half and mirror so symmetry stays exact
    std::size_t center = 0;
    for (std::size_t i = 1; i < curve.points.size(); ++i)
      if (std::abs(curve.points[i].x) < std::abs(curve.points[center].x)) center = i;
    const double s_half = s.back() - s[center];
    const std::size_t half =
        std::max<std::size_t>(2, static_cast<std::size_t>(std::llround(s_half / target_ds)));
    auto right = resample_stations(curve.points, s, s[center], s.back(), half + 1);
    out.points.assign(2 * half + 1, Vec2{});
    out.points[half] = {0.0, right[0].y};
    for (std::size_t k = 1; k <= half; ++k) {
      out.points[half + k] = right[k];
      out.points[half - k] = {-right[k].x, right[k].y};
    }
  } else {
    const std::size_t count =
        std::max<std::size_t>(3, static_cast<std::size_t>(std::llround(total / target_ds)) + 1);
    out.points = resample_stations(curve.points, s, 0.0, total, count);
  }
  return out;
}

// --- diagnostics ---------------------------------------------------------------

double tip_height_of(const ProfileCurve& curve) {
  if (curve.points.empty()) throw std::invalid_argument("tip_height_of: empty curve");
  std::size_t best = 0;
  for (std::size_t i = 1; i < curve.points.size(); ++i)
    if (std::abs(curve.points[i].x) < std::abs(curve.points[best].x)) best = i;
  return curve.points[best].y;
}

namespace {

// Reference polylines cover a quantized height R * 2^k so that replays pick
// identical coverage for identical snapshots.
double quantized_cover(const CatenoidSpec& spec, double y_max) {
  double need = std::max(2.0 * spec.radius, 1.3 * y_max);
  double cover = 2.0 * spec.radius;
  while (cover < need) cover *= 2.0;
  return cover;
}

std::vector<Vec2> reference_polyline(const CatenoidSpec& spec, double cover) {
  return catenoid_polyline(spec, cover, 0.005 * spec.radius).points;
}

SnapshotDiag diag_against(const ProfileCurve& curve, Dimension n,
                          const std::vector<Vec2>* reference) {
  SnapshotDiag d;
  d.min_H = kInf;
  d.max_H = -kInf;
  d.max_A2 = 0.0;
  d.max_v = 0.0;
  const std::size_t count = curve.points.size();
  const std::size_t collar = 3;
  for (std::size_t i = 1; i + 1 < count; ++i) {
    PointGeometry g = point_geometry(curve, i, n);
    d.min_H = std::min(d.min_H, g.H);
    d.max_H = std::max(d.max_H, g.H);
    d.max_A2 = std::max(d.max_A2, g.A2);
    d.max_v = std::max(d.max_v, g.v);
    if (i <= collar || i + 1 + collar >= count)
      d.clamp_gap = std::max(d.clamp_gap, std::abs(g.H));
  }
  d.tip_height = tip_height_of(curve);
  d.tip_speed = 0.0;
  d.sup_dist_catenoid = reference ? sup_distance_to_polyline(curve, *reference).value : -1.0;
  return d;
}

void fill_tip_speeds(FlowTrajectory& traj) {
  auto& snaps = traj.snapshots;
  for (std::size_t k = 0; k < snaps.size(); ++k) {
    if (snaps.size() < 2) {
      snaps[k].diag.tip_speed = 0.0;
      continue;
    }
    std::size_t a = (k == 0) ? 0 : k - 1;
    std::size_t b = (k + 1 == snaps.size()) ? k : k + 1;
    double dt = snaps[b].t - snaps[a].t;
    snaps[k].diag.tip_speed =
        dt > 0.0 ? (snaps[b].diag.tip_height - snaps[a].diag.tip_height) / dt : 0.0;
  }
}

}  // namespace

SnapshotDiag compute_diagnostics(const ProfileCurve& curve, Dimension n,
                                 const std::optional<CatenoidSpec>& reference) {
  if (!reference) return diag_against(curve, n, nullptr);
  double ymax = 0.0;
  for (const auto& p : curve.points) ymax = std::max(ymax, p.y);
  auto ref = reference_polyline(*reference, quantized_cover(*reference, ymax));
  return diag_against(curve, n, &ref);
}

std::vector<SnapshotDiag> recompute_diagnostics(const FlowTrajectory& traj) {
  FlowTrajectory replay = traj;
  for (auto& snap : replay.snapshots)
    snap.diag = compute_diagnostics(snap.curve, traj.n, traj.reference);
  fill_tip_speeds(replay);
  std::vector<SnapshotDiag> out;
  out.reserve(replay.snapshots.size());
  for (const auto& snap : replay.snapshots) out.push_back(snap.diag);
  return out;
}

// --- driver ----------------------------------------------------------------------

FlowTrajectory run_flow(const FlowState& initial, const StopCriteria& stop,
                        const RunOptions& options) {
  validate_config(initial.config);
  validate_profile(initial.curve);

  FlowTrajectory traj{initial.n, options.reference, {}, StopReason::none, "", -1.0};
  FlowState state = initial;
  const double snap_dt = initial.config.snapshot_dt;

  // cached reference polyline at quantized coverage
  std::vector<Vec2> ref;
  double ref_cover = 0.0;
  auto refresh_reference = [&](const ProfileCurve& curve) -> const std::vector<Vec2>* {
    if (!options.reference) return nullptr;
    double ymax = 0.0;
    for (const auto& p : curve.points) ymax = std::max(ymax, p.y);
    double cover = quantized_cover(*options.reference, ymax);
    if (cover != ref_cover) {
      ref = reference_polyline(*options.reference, cover);
      ref_cover = cover;
    }
    return &ref;
  };

  auto record = [&](const FlowState& s) {
    traj.snapshots.push_back({s.t, s.curve, diag_against(s.curve, s.n, refresh_reference(s.curve))});
  };

  auto min_spacing = [](const ProfileCurve& curve) {
    double m = kInf;
    for (std::size_t i = 1; i < curve.points.size(); ++i)
      m = std::min(m, norm(curve.points[i] - curve.points[i - 1]));
    return m;
  };
  auto max_spacing = [](const ProfileCurve& curve) {
    double m = 0.0;
    for (std::size_t i = 1; i < curve.points.size(); ++i)
      m = std::max(m, norm(curve.points[i] - curve.points[i - 1]));
    return m;
  };

  record(state);

  auto stopped_by_snapshot = [&](const Snapshot& snap) -> bool {
    if (stop.escape_eps && snap.diag.sup_dist_catenoid >= *stop.escape_eps) {
      traj.stop = StopReason::escape;
      // linear interpolation of the first crossing between snapshots
      if (traj.snapshots.size() >= 2) {
        const auto& prev = traj.snapshots[traj.snapshots.size() - 2];
        double d0 = prev.diag.sup_dist_catenoid, d1 = snap.diag.sup_dist_catenoid;
        traj.escape_time =
            d1 > d0 ? prev.t + (snap.t - prev.t) * (*stop.escape_eps - d0) / (d1 - d0) : snap.t;
      } else {
        traj.escape_time = snap.t;
      }
      return true;
    }
    if (stop.tip_target && snap.diag.tip_height >= *stop.tip_target) {
      traj.stop = StopReason::tip_height;
      return true;
    }
    return false;
  };

  if (stopped_by_snapshot(traj.snapshots.back())) {
    fill_tip_speeds(traj);
    return traj;
  }

  const double t0 = state.t;
  long period = 0;
  while (true) {
    double target = t0 + (period + 1) * snap_dt;
    if (stop.t_end) target = std::min(target, *stop.t_end);
    target = std::min(target, t0 + stop.max_time);
    double span = target - state.t;
    if (span <= 1e-15) {
      traj.stop = stop.t_end && target >= *stop.t_end - 1e-15 ? StopReason::t_end
                                                              : StopReason::timeout;
      break;
    }

    double ds = min_spacing(state.curve);
    long substeps = std::max(1L, static_cast<long>(
                                     std::ceil(span / (state.config.cfl * ds * ds) - 1e-9)));
    double dt = span / substeps;
    bool aborted = false;
    try {
      for (long s = 0; s < substeps; ++s) {
        state = (state.curve.mode == CurveMode::graph) ? step_graphical(state, dt)
                                                       : step_parametric(state, dt);
      }
    } catch (const AxisCollisionError& e) {
      traj.stop = StopReason::axis_collision;
      traj.note = e.what();
      aborted = true;
    } catch (const InstabilityError& e) {
      traj.stop = StopReason::instability;
      traj.note = e.what();
      aborted = true;
    } catch (const EmbeddednessError& e) {
      traj.stop = StopReason::embeddedness;
      traj.note = e.what();
      aborted = true;
    }
    if (aborted) break;
    state.t = target;  // suppress accumulated roundoff at period boundaries

    if (state.curve.mode == CurveMode::parametric) {
      double lo = min_spacing(state.curve), hi = max_spacing(state.curve);
      if (hi > 1.35 * state.config.dx || lo < 0.7 * state.config.dx) {
        state.curve = remesh(state.curve, state.config.dx);
      }
    }

    record(state);
    if (stopped_by_snapshot(traj.snapshots.back())) break;
    if (stop.t_end && state.t >= *stop.t_end - 1e-12) {
      traj.stop = StopReason::t_end;
      break;
    }
    if (state.t - t0 >= stop.max_time - 1e-12) {
      traj.stop = StopReason::timeout;
      break;
    }
    ++period;
  }

  fill_tip_speeds(traj);
  return traj;
}

ProfileCurve curve_at_time(const FlowTrajectory& traj, double t) {
  const auto& snaps = traj.snapshots;
  if (snaps.empty()) throw std::out_of_range("curve_at_time: empty trajectory");
  if (t < snaps.front().t - 1e-12 || t > snaps.back().t + 1e-12)
    throw std::out_of_range("curve_at_time: t outside the recorded range");
  if (t <= snaps.front().t) return snaps.front().curve;
  if (t >= snaps.back().t) return snaps.back().curve;
  std::size_t hi = 1;
  while (snaps[hi].t < t) ++hi;
  const auto& a = snaps[hi - 1];
  const auto& b = snaps[hi];
  double lam = (t - a.t) / (b.t - a.t);
  ProfileCurve out = a.curve;
  if (a.curve.points.size() == b.curve.points.size()) {
    for (std::size_t i = 0; i < out.points.size(); ++i)
      out.points[i] = (1.0 - lam) * a.curve.points[i] + lam * b.curve.points[i];
    return out;
  }
  // meshes differ (remesh happened): align by normalized arclength
  auto sa = cumulative_arclength(a.curve.points);
  auto sb = cumulative_arclength(b.curve.points);
  for (std::size_t i = 0; i < out.points.size(); ++i) {
    double frac = sa[i] / sa.back();
    Vec2 pb = eval_at_arclength(b.curve.points, sb, frac * sb.back());
    out.points[i] = (1.0 - lam) * a.curve.points[i] + lam * pb;
  }
  return out;
}

}  // namespace rotmcf
