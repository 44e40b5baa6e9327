#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "nrsurf/resource_grid.hpp"
#include "nrsurf/scenario.hpp"

using namespace nrsurf;

namespace {

Environment simple_env() {
  Environment env;
  env.bs_position = {50.0, 0.0};
  SurfaceDef s;
  s.position = {0.0, 0.0};
  s.facing_deg = 0.0;
  s.codebook_targets_deg = {10.0, 30.0, 50.0, 70.0};
  env.surfaces.push_back(s);
  UeDef u;
  u.waypoints = {{8.0, 3.0}};
  env.ues.push_back(u);
  return env;
}

}  // namespace

TEST_CASE("layout validation and cp budgets") {
  PeriodLayout l;
  CHECK_NOTHROW(l.validate());
  CHECK(l.data_window_sec() == doctest::Approx(15e-3));
  CHECK(l.cp_budget_sec() == doctest::Approx(585e-9));
  l.cp_mode = CpMode::kHalfSubframe;
  l.non_colocated = true;
  CHECK(l.cp_budget_sec() == doctest::Approx(1106e-9 - 260e-9));
  l.report_delay_sec = 24e-3;
  CHECK_THROWS_AS(l.validate(), std::invalid_argument);
  l = PeriodLayout{};
  l.surface_ssb_count = 65;
  CHECK_THROWS_AS(l.validate(), std::invalid_argument);
}

TEST_CASE("cp snapping lands on symbol starts") {
  // Oracle: the symbol-start table itself.
  for (int n : {0, 1, 6, 7, 13}) {
    const double s = symbol_start_time(n);
    CHECK(snap_to_cp(s, CpMode::kSymbol) == doctest::Approx(s));
    CHECK(snap_to_cp(s + 20e-6, CpMode::kSymbol) == doctest::Approx(s));
  }
  // Mid-period times carry the subframe offset.
  CHECK(snap_to_cp(5.2e-3, CpMode::kSymbol) ==
        doctest::Approx(5e-3 + symbol_start_time(2)));
  CHECK(snap_to_cp(12.6e-3, CpMode::kHalfSubframe) == doctest::Approx(12.5e-3));
  CHECK(snap_to_cp(12.49e-3, CpMode::kHalfSubframe) == doctest::Approx(12.0e-3));
}

TEST_CASE("multi-ue schedule splits the data window") {
  const PeriodLayout l;
  const BeamSchedule one = schedule_multi({{0, 3}}, 0, l);
  REQUIRE(one.entries.size() == 1);
  CHECK(one.entries[0].time_sec == doctest::Approx(5e-3));
  CHECK(one.entries[0].beam_id == 3);

  const BeamSchedule two = schedule_multi({{0, 3}, {1, 5}}, 0, l);
  REQUIRE(two.entries.size() == 2);
  CHECK(two.entries[0].time_sec == doctest::Approx(5e-3));
  CHECK(two.entries[1].time_sec == doctest::Approx(snap_to_cp(12.5e-3, CpMode::kSymbol)));
  CHECK(two.entries[1].beam_id == 5);
  CHECK(schedule_multi({}, 0, l).entries.empty());
}

TEST_CASE("ue walks its polyline at constant speed") {
  UeDef u;
  u.waypoints = {{0.0, 0.0}, {10.0, 0.0}, {10.0, 5.0}};
  u.speed_mps = 2.0;
  CHECK(u.position(0.0).x == doctest::Approx(0.0));
  CHECK(u.position(2.5).x == doctest::Approx(5.0));
  CHECK(u.position(6.0).y == doctest::Approx(2.0));
  CHECK(u.position(100.0).y == doctest::Approx(5.0));  // parked at the end
  UeDef empty;
  empty.waypoints.clear();
  CHECK_THROWS_AS(empty.position(0.0), std::invalid_argument);
}

TEST_CASE("bearings and blockage windows") {
  SurfaceDef s;
  s.position = {0.0, 0.0};
  s.facing_deg = 0.0;
  CHECK(s.bearing_to({1.0, 1.0}) == doctest::Approx(45.0));
  s.facing_deg = 90.0;
  CHECK(s.bearing_to({0.0, 5.0}) == doctest::Approx(0.0));

  Environment env = simple_env();
  env.blockages.push_back({0, 0, 1.0, 2.0, 40.0});
  CHECK(env.blockage_db(0, 0, 1.5) == doctest::Approx(40.0));
  CHECK(env.blockage_db(0, 0, 2.5) == 0.0);
  CHECK(env.blockage_db(0, 1, 1.5) == 0.0);
}

TEST_CASE("ue snr applies both legs and the array term") {
  Environment env = simple_env();
  env.ues[0].waypoints = {{10.0, 0.0}};  // broadside, 10 m
  const SurfaceDef& s = env.surfaces[0];
  const std::vector<uint8_t> uniform(s.cfg.columns, 0);
  const double snr = ue_snr(env, 0, uniform, 0, 0, 0.0);
  // ref 60 - 10log(50) - 10log(10) x2 exponents + |16 x 0.6|^2 term. The BS
  // sits on the normal too, so the uniform codeword is phase-aligned.
  const double expect = 60.0 - 20.0 * std::log10(50.0) - 20.0 * std::log10(10.0) +
                        lin_to_db(std::norm(cplx{16 * 0.6, 0.0}));
  CHECK(snr == doctest::Approx(expect).epsilon(1e-6));
  CHECK(ue_snr_best_antenna(env, 0, uniform, 0, 0.0) == doctest::Approx(snr));
}

TEST_CASE("reports fold in after the delay and a miss holds the beam") {
  const Environment env = simple_env();
  PeriodLayout layout;
  SimState st = make_state(env);

  run_period(st, env, layout);  // period 0: sweep only, nothing scheduled yet
  bool any_reconfig = false;
  for (const auto& e : st.events) any_reconfig |= (e.kind == "reconfig");
  CHECK(!any_reconfig);
  CHECK(st.in_flight.size() == 1);
  CHECK(st.in_flight[0].ready_sec == doctest::Approx(5e-3 + 27e-3));

  // The report is ready at 32 ms, after period 1's NBPU at 20 ms, so period 1
  // still has no schedule.
  run_period(st, env, layout);
  int reconfigs = 0;
  for (const auto& e : st.events) reconfigs += (e.kind == "reconfig");
  CHECK(reconfigs == 0);

  run_period(st, env, layout);  // period 2 at 40 ms folds the 32 ms report
  reconfigs = 0;
  for (const auto& e : st.events) reconfigs += (e.kind == "reconfig");
  CHECK(reconfigs == 1);
  const int applied = st.applied_beam[0];

  run_period(st, env, layout, /*nbpu_ok=*/false);  // missed frame: hold
  CHECK(st.applied_beam[0] == applied);
  int misses = 0;
  for (const auto& e : st.events) misses += (e.kind == "nbpu_miss");
  CHECK(misses == 1);
}

TEST_CASE("scenario runs are deterministic") {
  ScenarioConfig cfg;
  cfg.env = simple_env();
  cfg.periods = 6;
  cfg.nbpu_miss_periods = {4};
  const SimState a = run_scenario(cfg);
  const SimState b = run_scenario(cfg);
  REQUIRE(a.events.size() == b.events.size());
  for (size_t i = 0; i < a.events.size(); ++i) {
    CHECK(a.events[i].t == b.events[i].t);
    CHECK(a.events[i].kind == b.events[i].kind);
    CHECK(a.events[i].beam == b.events[i].beam);
  }
  const std::string path = "test_scenario_events.csv";
  write_event_log(a.events, path);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,event,surface,beam,ue,snr_db");
  int lines = 0;
  for (std::string line; std::getline(in, line);) ++lines;
  CHECK(lines == int(a.events.size()));
  std::remove(path.c_str());
}

TEST_CASE("duty cycle timeline covers the period with wake leads") {
  PeriodLayout layout;
  const BeamSchedule sched = schedule_multi({{0, 1}, {1, 2}}, 0, layout);
  const PowerTimeline tl = duty_cycle_timeline(layout, sched);
  CHECK(tl.total_duration() == doctest::Approx(kPeriodSec));
  int nbpu = 0, rcfg = 0, wake = 0;
  for (const auto& seg : tl.segments) {
    if (seg.state == PowerState::kNbpuActive) ++nbpu;
    if (seg.state == PowerState::kReconfigActive) ++rcfg;
    if (seg.state == PowerState::kWake) ++wake;
  }
  CHECK(nbpu == 1);
  CHECK(rcfg == layout.surface_ssb_count + int(sched.entries.size()));
  CHECK(wake == nbpu + rcfg);
  // Every burst is preceded by its wake segment.
  for (size_t i = 0; i < tl.segments.size(); ++i)
    if (tl.segments[i].state == PowerState::kNbpuActive ||
        tl.segments[i].state == PowerState::kReconfigActive)
      CHECK(tl.segments[i - 1].state == PowerState::kWake);
}

TEST_CASE("json scenario config round trip") {
  const std::string path = "test_scenario_cfg.json";
  {
    std::ofstream out(path);
    out << R"({
      "version": 1,
      "periods": 4,
      "nbpu_miss_periods": [2],
      "layout": {"sweep_window_ms": 5.0, "surface_ssb_count": 4, "report_delay_ms": 27.0,
                 "cp_mode": "half_subframe", "non_colocated": true},
      "environment": {
        "bs_position": [50, 0],
        "ref_snr_db": 58.0,
        "surfaces": [{"position": [0, 0], "facing_deg": 0,
                      "codebook_targets_deg": [10, 30, 50, 70]}],
        "ues": [{"waypoints": [[8, 3], [8, 8]], "speed_mps": 0.5,
                 "antennas": [[0, 0], [0.1, 0]]}],
        "blockages": [{"ue": 0, "antenna": 1, "from_ms": 100, "to_ms": 200,
                       "attenuation_db": 35}]
      }
    })";
  }
  const ScenarioConfig cfg = ScenarioConfig::from_json_file(path);
  CHECK(cfg.periods == 4);
  CHECK(cfg.nbpu_miss_periods == std::vector<int>{2});
  CHECK(cfg.layout.cp_mode == CpMode::kHalfSubframe);
  CHECK(cfg.layout.non_colocated);
  CHECK(cfg.layout.surface_ssb_count == 4);
  CHECK(cfg.env.ref_snr_db == doctest::Approx(58.0));
  REQUIRE(cfg.env.ues.size() == 1);
  CHECK(cfg.env.ues[0].antennas.size() == 2);
  REQUIRE(cfg.env.blockages.size() == 1);
  CHECK(cfg.env.blockages[0].from_sec == doctest::Approx(0.1));
  CHECK_NOTHROW(run_scenario(cfg));

  {
    std::ofstream out(path);
    out << R"({"version": 2, "environment": {"bs_position": [0,0], "surfaces": [], "ues": []}})";
  }
  CHECK_THROWS_AS(ScenarioConfig::from_json_file(path), std::invalid_argument);
  std::remove(path.c_str());
  CHECK_THROWS_AS(ScenarioConfig::from_json_file(path), std::runtime_error);
}
