#include "rotmcf/construction.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

namespace rotmcf {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double default_eps1(const CatenoidSpec& spec) {
  return (spec.n.value() == 2 ? 0.5 : 0.25) * spec.radius;
}

double default_clamp(const CatenoidSpec& spec, double tip_target) {
  const double R = spec.radius;
  if (spec.n.value() == 2) {
    // the rising cap occupies |x| <~ R * arccosh(tip/R); leave headroom
    double reach = R * std::acosh(std::max(2.0, 1.25 * tip_target / R));
    return reach + 0.6 * R;
  }
  return std::max(4.0 * R, 1.5 * tip_target);
}

FlowConfig construction_config(const CatenoidSpec& spec, double tip_target) {
  FlowConfig config;
  config.dx = 0.02 * spec.radius;
  config.cfl = 0.2;
  config.snapshot_dt = 0.01;
  config.boundary.kind = BoundaryKind::pin_offset;
  config.clamp = default_clamp(spec, tip_target);
  config.y_floor = 1e-3 * spec.radius;
  return config;
}

ProfileCurve offset_initial_data(const CatenoidSpec& spec, double delta,
                                 const FlowConfig& config) {
  if (!(config.clamp > 0.0))
    throw std::invalid_argument("offset_initial_data: config.clamp must be set");
  ProfileCurve base = (spec.n.value() == 2)
                          ? catenoid_graph(spec, config.clamp, config.dx)
                          : catenoid_polyline(spec, config.clamp, config.dx);
  if (delta == 0.0) return base;
  return normal_offset(base, delta);
}

EscapeResult escape_time(const CatenoidSpec& spec, double delta, double eps1,
                         const FlowConfig& config, double max_time) {
  if (!(eps1 > 0.0) || eps1 > 0.75 * spec.radius)
    throw std::invalid_argument(
        "escape_time: eps1 must lie in (0, 0.75 R] (barrier validity)");
  if (std::abs(delta) > eps1)
    throw std::invalid_argument("escape_time: |delta| must not exceed eps1");

  FlowState initial{0.0, offset_initial_data(spec, delta, config), spec.n, config};
  StopCriteria stop;
  stop.escape_eps = eps1;
  stop.max_time = max_time;
  FlowTrajectory traj = run_flow(initial, stop, {spec});
  if (traj.stop != StopReason::escape) {
    std::ostringstream msg;
    msg << "escape_time: no escape past " << eps1 << " within t = " << max_time
        << " for delta = " << delta << " (stop: " << to_string(traj.stop) << ")";
    throw EscapeTimeoutError(msg.str(), delta, max_time,
                             traj.snapshots.back().diag.sup_dist_catenoid);
  }
  EscapeResult result;
  result.delta = delta;
  result.T_delta = traj.escape_time;
  result.escape_x = sup_distance_to_catenoid(traj.snapshots.back().curve, spec).at_x;
  result.trajectory = std::move(traj);
  return result;
}

DeltaForEscape find_delta_for_escape(const CatenoidSpec& spec, double target_T,
                                     double eps1, const FlowConfig& config,
                                     double delta_min) {
  if (!(target_T > 0.0))
    throw std::invalid_argument("find_delta_for_escape: target time must be > 0");
  const double horizon = 3.0 * target_T + 10.0;
  int probes = 0;
  auto measure = [&](double delta) -> double {
    ++probes;
    try {
      return escape_time(spec, delta, eps1, config, horizon).T_delta;
    } catch (const EscapeTimeoutError&) {
      return kInf;  // slower than the horizon: usable as the small-delta side
    }
  };

  double hi = 0.8 * eps1;  // escapes almost immediately
  double t_hi = measure(hi);
  while (t_hi > target_T && hi < 0.995 * eps1) {
    hi = std::min(0.999 * eps1, 0.5 * (hi + eps1));  // tiny targets: delta -> eps1
    t_hi = measure(hi);
  }
  if (t_hi > target_T)
    throw std::range_error("find_delta_for_escape: largest offset is already too slow");
  double lo = hi;
  double t_lo = t_hi;
  while (t_lo <= target_T) {
    lo *= 0.25;
    if (lo < delta_min)
      throw std::range_error("find_delta_for_escape: no bracket above delta_min");
    t_lo = measure(lo);
  }

  // bisection on log(delta); T grows steeply as delta shrinks
  double best_delta = hi;
  for (int it = 0; it < 40; ++it) {
    double mid = std::sqrt(lo * hi);
    double t_mid = measure(mid);
    best_delta = mid;
    if (std::abs(t_mid - target_T) <= 0.01 * target_T) break;
    if (t_mid > target_T)
      lo = mid;
    else
      hi = mid;
  }
  DeltaForEscape out;
  out.delta = best_delta;
  out.escape = escape_time(spec, best_delta, eps1, config, horizon);
  out.probes = probes;
  return out;
}

namespace {

FlowTrajectory recenter_time(FlowTrajectory traj, double shift) {
  for (auto& snap : traj.snapshots) snap.t -= shift;
  if (traj.escape_time >= 0.0) traj.escape_time -= shift;
  return traj;
}

}  // namespace

double member_distance(const FamilyMember& a, const FamilyMember& b, double t_lo,
                       double t_hi) {
  const double lo = std::max({t_lo, a.recentered.snapshots.front().t,
                              b.recentered.snapshots.front().t});
  const double hi = std::min({t_hi, a.recentered.snapshots.back().t,
                              b.recentered.snapshots.back().t});
  if (hi < lo) throw std::invalid_argument("member_distance: empty common window");
  const int steps = 50;
  double sup = 0.0;
  for (int k = 0; k <= steps; ++k) {
    double t = lo + (hi - lo) * k / steps;
    ProfileCurve ca = curve_at_time(a.recentered, t);
    ProfileCurve cb = curve_at_time(b.recentered, t);
    sup = std::max(sup, sup_distance_to_polyline(ca, cb.points).value);
    sup = std::max(sup, sup_distance_to_polyline(cb, ca.points).value);
  }
  return sup;
}

AncientFamily build_ancient_family(const CatenoidSpec& spec,
                                   const std::vector<int>& j_list, double eps1,
                                   const FlowConfig& config, int workers) {
  if (j_list.empty()) throw std::invalid_argument("build_ancient_family: empty j list");
  AncientFamily family;
  family.eps1 = eps1;
  family.members.resize(j_list.size());

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::string first_error;
  std::mutex error_mutex;
  auto worker = [&]() {
    for (std::size_t k = next.fetch_add(1); k < j_list.size(); k = next.fetch_add(1)) {
      if (failed.load()) return;
      try {
        const int j = j_list[k];
        DeltaForEscape found =
            find_delta_for_escape(spec, static_cast<double>(j), eps1, config);
        FamilyMember member;
        member.j = j;
        member.delta = found.delta;
        member.T_delta = found.escape.T_delta;
        member.recentered =
            recenter_time(std::move(found.escape.trajectory), found.escape.T_delta);
        family.members[k] = std::move(member);
      } catch (const std::exception& e) {
        std::scoped_lock lock(error_mutex);
        if (!failed.exchange(true)) first_error = e.what();
      }
    }
  };
  const int pool = std::clamp(workers, 1, static_cast<int>(j_list.size()));
  if (pool <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < pool; ++w) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  if (failed.load()) throw std::runtime_error("build_ancient_family: " + first_error);
  const std::size_t count = family.members.size();
  family.convergence.assign(count, std::vector<double>(count, 0.0));
  for (std::size_t a = 0; a < count; ++a) {
    for (std::size_t b = a + 1; b < count; ++b) {
      double window = std::min(family.members[a].j, family.members[b].j);
      double d = member_distance(family.members[a], family.members[b], -window, 0.0);
      family.convergence[a][b] = d;
      family.convergence[b][a] = d;
    }
  }
  return family;
}

EternalRun run_eternal(const CatenoidSpec& spec, double delta_start,
                       double tip_target, const FlowConfig& config,
                       double fit_window, double max_time) {
  if (!(delta_start > 0.0))
    throw std::invalid_argument("run_eternal: delta_start must be > 0 (outward)");
  FlowState initial{0.0, offset_initial_data(spec, delta_start, config), spec.n, config};
  StopCriteria stop;
  stop.tip_target = tip_target;
  stop.max_time = max_time;

  EternalRun run;
  run.trajectory = run_flow(initial, stop, {spec});

  // escape marker: first crossing of the default eps1 in the sup-distance series
  const double marker = default_eps1(spec);
  const auto& snaps = run.trajectory.snapshots;
  for (std::size_t k = 1; k < snaps.size(); ++k) {
    double d0 = snaps[k - 1].diag.sup_dist_catenoid;
    double d1 = snaps[k].diag.sup_dist_catenoid;
    if (d0 < marker && d1 >= marker) {
      run.escape_time =
          snaps[k - 1].t + (snaps[k].t - snaps[k - 1].t) * (marker - d0) / (d1 - d0);
      break;
    }
  }

  const std::size_t stride = std::max<std::size_t>(1, snaps.size() / 160);
  for (std::size_t k = 0; k < snaps.size(); ++k) {
    run.flatness.push_back(
        {snaps[k].t, tip_region_max_curvature(snaps[k].curve, 2.0 * spec.radius)});
    if (k % stride == 0 || k + 1 == snaps.size()) {
      try {
        run.fits.push_back({snaps[k].t, fit_grim_reaper(snaps[k].curve, fit_window)});
      } catch (const std::invalid_argument&) {
        // window not usable yet (too few samples early on): skip the frame
      }
    }
  }
  for (const auto& [t, v] : tip_speed(run.trajectory)) {
    run.tip.push_back({t, 0.0, v});
  }
  for (std::size_t k = 0; k < snaps.size() && k < run.tip.size(); ++k)
    run.tip[k][1] = snaps[k].diag.tip_height;
  return run;
}

GrimReaperSpec place_barrier_above(const ProfileCurve& initial, double half_width,
                                   double clearance) {
  if (!(half_width > 0.0) || !(clearance > 0.0))
    throw std::invalid_argument("place_barrier_above: bad parameters");
  GrimReaperSpec reaper{half_width, 0.0};
  const double c = reaper.speed();
  double offset = -kInf;
  for (const auto& p : initial.points) {
    if (std::abs(p.x) >= 0.9999 * half_width) continue;
    offset = std::max(offset, p.y + clearance + std::log(std::cos(c * p.x)) / c);
  }
  if (!std::isfinite(offset))
    throw std::invalid_argument("place_barrier_above: curve does not meet the reaper span");
  reaper.vertical_offset = offset;
  return reaper;
}

BarrierReport barrier_check(const FlowTrajectory& traj, const GrimReaperSpec& reaper) {
  if (traj.snapshots.empty())
    throw std::invalid_argument("barrier_check: empty trajectory");
  BarrierReport report;
  report.reaper = reaper;
  report.min_gap = kInf;
  const double c = reaper.speed();
  const double t0 = traj.snapshots.front().t;
  for (const auto& snap : traj.snapshots) {
    double gap = kInf;
    for (const auto& p : snap.curve.points) {
      if (std::abs(p.x) >= 0.9999 * reaper.half_width) continue;
      double rp = reaper.vertical_offset + c * (snap.t - t0) -
                  std::log(std::cos(c * p.x)) / c;
      gap = std::min(gap, rp - p.y);
    }
    if (!std::isfinite(gap)) gap = kInf;  // no overlap: reaper already far above
    report.gap_series.push_back({snap.t, gap});
  }
  report.initial_gap = report.gap_series.front().second;
  if (!(report.initial_gap > 0.0))
    throw std::invalid_argument("barrier_check: reaper does not start above the profile");
  for (const auto& [t, gap] : report.gap_series)
    report.min_gap = std::min(report.min_gap, gap);
  report.pass = report.min_gap > 0.0;
  return report;
}

}  // namespace rotmcf
