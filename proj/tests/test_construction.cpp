#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "rotmcf/construction.hpp"

using namespace rotmcf;

namespace {
const Dimension n2{2};
const Dimension n3{3};

FlowConfig quick_config(const CatenoidSpec& spec) {
  FlowConfig config = construction_config(spec, 3.0);
  config.dx = 0.025 * spec.radius;
  return config;
}
}  // namespace

TEST_CASE("defaults per dimension") {
  CHECK(default_eps1({n2, 1.0}) == doctest::Approx(0.5));
  CHECK(default_eps1({n3, 1.0}) == doctest::Approx(0.25));
  CHECK(default_eps1({n2, 2.0}) == doctest::Approx(1.0));
  CHECK(default_clamp({n2, 1.0}, 8.0) > std::acosh(8.0));
  CHECK(default_clamp({n3, 1.0}, 8.0) >= 12.0);
}

TEST_CASE("offset initial data per mode") {
  CatenoidSpec spec{n2, 1.0};
  FlowConfig config = quick_config(spec);
  ProfileCurve out = offset_initial_data(spec, 0.05, config);
  CHECK(out.mode == CurveMode::graph);
  CHECK(min_height_above_catenoid(out, spec) > 0.0);

  CatenoidSpec spec3{n3, 1.0};
  FlowConfig config3 = construction_config(spec3, 2.0);
  ProfileCurve out3 = offset_initial_data(spec3, 0.05, config3);
  CHECK(out3.mode == CurveMode::parametric);
  CHECK(min_height_above_catenoid(out3, spec3) > 0.0);

  // inward diagnostic data sits inside
  CHECK(min_height_above_catenoid(offset_initial_data(spec, -0.05, config), spec) < 0.0);
}

TEST_CASE("escape_time: finite, monotone in delta, threshold bracketed") {
  CatenoidSpec spec{n2, 1.0};
  FlowConfig config = quick_config(spec);
  const double eps1 = 0.3;
  EscapeResult fast = escape_time(spec, 0.1, eps1, config);
  EscapeResult slow = escape_time(spec, 0.05, eps1, config);
  CHECK(fast.T_delta > 0.0);
  CHECK(slow.T_delta > fast.T_delta);  // smaller offsets escape later
  CHECK(fast.trajectory.stop == StopReason::escape);

  // sup distance at escape lies in [eps1, eps1 + one-period overshoot]
  double final_sup = slow.trajectory.snapshots.back().diag.sup_dist_catenoid;
  CHECK(final_sup >= eps1);
  CHECK(final_sup <= eps1 + 0.02);

  // the unstable mode is concentrated at the neck
  CHECK(std::abs(slow.escape_x) < 1.2);

  // outward run stays outside the catenoid
  for (const auto& snap : slow.trajectory.snapshots)
    CHECK(min_height_above_catenoid(snap.curve, spec) > 0.0);
}

TEST_CASE("escape_time: validation and timeout") {
  CatenoidSpec spec{n2, 1.0};
  FlowConfig config = quick_config(spec);
  CHECK_THROWS_AS(escape_time(spec, 0.05, 0.9, config), std::invalid_argument);
  CHECK_THROWS_AS(escape_time(spec, 0.4, 0.3, config), std::invalid_argument);
  CHECK_THROWS_AS(escape_time(spec, 0.01, 0.3, config, 0.05), EscapeTimeoutError);
  try {
    escape_time(spec, 0.01, 0.3, config, 0.05);
  } catch (const EscapeTimeoutError& e) {
    CHECK(e.delta == doctest::Approx(0.01));
    CHECK(e.horizon == doctest::Approx(0.05));
    CHECK(e.last_sup > 0.0);
  }
}

TEST_CASE("find_delta_for_escape hits the target time") {
  CatenoidSpec spec{n2, 1.0};
  FlowConfig config = quick_config(spec);
  DeltaForEscape found = find_delta_for_escape(spec, 1.0, 0.3, config);
  CHECK(std::abs(found.escape.T_delta - 1.0) <= 0.01);
  CHECK(found.delta > 0.0);
  CHECK(found.delta < 0.3);
  CHECK(found.probes <= 45);

  // tiny target time: delta ends up near the threshold itself
  DeltaForEscape quick = find_delta_for_escape(spec, 0.05, 0.3, config);
  CHECK(quick.delta > 0.15);
}

TEST_CASE("build_ancient_family: recentering, ordering, convergence matrix") {
  CatenoidSpec spec{n2, 1.0};
  FlowConfig config = quick_config(spec);
  const double eps1 = 0.3;
  AncientFamily family = build_ancient_family(spec, {1, 2}, eps1, config);
  REQUIRE(family.members.size() == 2);

  // delta_j strictly decreasing in j
  CHECK(family.members[0].delta > family.members[1].delta);

  for (const auto& member : family.members) {
    const auto& snaps = member.recentered.snapshots;
    // escape recentered to t = 0 (within one snapshot period)
    CHECK(std::abs(snaps.back().t) <= config.snapshot_dt + 1e-9);
    CHECK(snaps.front().t == doctest::Approx(-member.T_delta).epsilon(1e-9));
    // sup distance at t = 0 equals eps1 within the overshoot budget
    CHECK(snaps.back().diag.sup_dist_catenoid == doctest::Approx(eps1).epsilon(0.04));
    // members stay outside the catenoid at all recorded times
    for (const auto& snap : snaps)
      CHECK(min_height_above_catenoid(snap.curve, spec) > 0.0);
  }

  CHECK(family.convergence[0][1] == family.convergence[1][0]);
  CHECK(family.convergence[0][1] > 0.0);

  // member with larger delta lies outside the member with smaller delta at
  // equal time since release (avoidance + initial nesting); recentered
  // clocks differ by T_delta
  double t_abs = 0.5;
  ProfileCurve outer =
      curve_at_time(family.members[0].recentered, t_abs - family.members[0].T_delta);
  ProfileCurve inner =
      curve_at_time(family.members[1].recentered, t_abs - family.members[1].T_delta);
  std::size_t mid = outer.points.size() / 2;
  CHECK(outer.points[mid].y > height_at(inner, outer.points[mid].x));
}

TEST_CASE("family members keep reflection symmetry") {
  CatenoidSpec spec{n2, 1.0};
  FlowConfig config = quick_config(spec);
  EscapeResult run = escape_time(spec, 0.08, 0.3, config);
  for (const auto& snap : run.trajectory.snapshots) {
    const auto& p = snap.curve.points;
    for (std::size_t i = 0; i < p.size() / 2; ++i) {
      CHECK(std::abs(p[i].x + p[p.size() - 1 - i].x) < 1e-9);
      CHECK(std::abs(p[i].y - p[p.size() - 1 - i].y) < 1e-9);
    }
  }
}

TEST_CASE("run_eternal: tip rises, fits and series populate") {
  CatenoidSpec spec{n2, 1.0};
  FlowConfig config = construction_config(spec, 3.0);
  config.dx = 0.025;
  EternalRun run = run_eternal(spec, 0.1, 3.0, config, 1.8);
  REQUIRE(run.trajectory.stop == StopReason::tip_height);
  CHECK(run.escape_time > 0.0);

  // tip height strictly increasing after escape (mean convexity)
  bool after = false;
  double prev = 0.0;
  for (const auto& snap : run.trajectory.snapshots) {
    if (snap.t >= run.escape_time) {
      if (after) CHECK(snap.diag.tip_height >= prev - 1e-12);
      prev = snap.diag.tip_height;
      after = true;
    }
  }
  CHECK(run.trajectory.snapshots.back().diag.tip_height >= 3.0);
  CHECK(!run.fits.empty());
  CHECK(!run.tip.empty());
  CHECK(run.flatness.size() == run.trajectory.snapshots.size());

  // early snapshots stay within twice the starting offset
  CHECK(run.trajectory.snapshots.front().diag.sup_dist_catenoid <= 2.0 * 0.1);

  // flattening under way: late tip curvature below the escape-time value
  double k_escape = 0.0, k_end = run.flatness.back().second;
  for (const auto& [t, k] : run.flatness)
    if (t <= run.escape_time) k_escape = k;
  CHECK(k_end < k_escape);
}

TEST_CASE("barrier_check: reaper stays above the run") {
  CatenoidSpec spec{n2, 1.0};
  FlowConfig config = quick_config(spec);
  EscapeResult run = escape_time(spec, 0.1, 0.3, config);
  ProfileCurve initial = run.trajectory.snapshots.front().curve;
  GrimReaperSpec reaper = place_barrier_above(initial, 2.0, 0.3);

  BarrierReport report = barrier_check(run.trajectory, reaper);
  CHECK(report.initial_gap == doctest::Approx(0.3).epsilon(1e-6));
  CHECK(report.pass);
  CHECK(report.min_gap > 0.0);

  // dense brute-force evaluation of the gap series
  for (std::size_t k = 0; k < run.trajectory.snapshots.size(); k += 7) {
    const auto& snap = run.trajectory.snapshots[k];
    double brute = 1e300;
    const double c = reaper.speed();
    for (const auto& p : snap.curve.points) {
      if (std::abs(p.x) >= 0.9999 * reaper.half_width) continue;
      double rp = reaper.vertical_offset + c * snap.t - std::log(std::cos(c * p.x)) / c;
      brute = std::min(brute, rp - p.y);
    }
    CHECK(report.gap_series[k].second == doctest::Approx(brute).epsilon(1e-10));
  }

  // an invalid placement is rejected up front
  GrimReaperSpec touching{2.0, -5.0};
  CHECK_THROWS_AS(barrier_check(run.trajectory, touching), std::invalid_argument);
}

TEST_CASE("member_distance: empty window throws") {
  CatenoidSpec spec{n2, 1.0};
  FlowConfig config = quick_config(spec);
  EscapeResult a = escape_time(spec, 0.1, 0.3, config);
  FamilyMember ma{1, 0.1, a.T_delta, a.trajectory};
  FamilyMember mb = ma;
  for (auto& snap : mb.recentered.snapshots) snap.t += 100.0;
  CHECK_THROWS_AS(member_distance(ma, mb, -1.0, 0.0), std::invalid_argument);
}
