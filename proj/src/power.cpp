#include "nrsurf/power.hpp"

#include <stdexcept>

namespace nrsurf {

const char* power_state_name(PowerState s) {
  switch (s) {
    case PowerState::kIdle: return "idle";
    case PowerState::kWake: return "wake";
    case PowerState::kNbpuActive: return "nbpu_active";
    case PowerState::kReconfigActive: return "reconfig_active";
  }
  throw std::logic_error("unknown power state");
}

double PowerTable::of(PowerState s) const {
  switch (s) {
    case PowerState::kIdle: return idle;
    case PowerState::kWake: return wake;
    case PowerState::kNbpuActive: return nbpu_active;
    case PowerState::kReconfigActive: return reconfig_active;
  }
  throw std::logic_error("unknown power state");
}

double PowerTimeline::total_duration() const {
  double t = 0.0;
  for (const PowerSegment& s : segments) t += s.duration_sec;
  return t;
}

void PowerTimeline::append(PowerState s, double duration_sec) {
  if (duration_sec < 0.0) throw std::invalid_argument("negative segment duration");
  if (duration_sec == 0.0) return;
  segments.push_back({s, duration_sec});
}

double average_power(const PowerTimeline& timeline, const PowerTable& table) {
  const double span = timeline.total_duration();
  if (span <= 0.0) throw std::invalid_argument("empty timeline");
  double energy = 0.0;
  for (const PowerSegment& s : timeline.segments) energy += table.of(s.state) * s.duration_sec;
  return energy / span;
}

double battery_life_years(double avg_watts, double capacity_wh) {
  if (avg_watts <= 0.0 || capacity_wh <= 0.0)
    throw std::invalid_argument("load and capacity must be positive");
  const double hours = capacity_wh / avg_watts;
  return hours / 8766.0;  // mean Gregorian year
}

double duty_component(const PowerTimeline& timeline, const PowerTable& table, PowerState state) {
  const double span = timeline.total_duration();
  if (span <= 0.0) throw std::invalid_argument("empty timeline");
  double energy = 0.0;
  double pending_wake = 0.0;
  for (const PowerSegment& s : timeline.segments) {
    if (s.state == PowerState::kWake) {
      pending_wake += table.of(s.state) * s.duration_sec;
      continue;
    }
    if (s.state == state) energy += pending_wake + table.of(s.state) * s.duration_sec;
    pending_wake = 0.0;
  }
  return energy / span;
}

PowerTimeline default_period_timeline(int reconfig_events, double reconfig_burst_sec) {
  if (reconfig_events < 0) throw std::invalid_argument("negative event count");
  PowerTimeline tl;
  tl.append(PowerState::kWake, kWakeLeadSec);
  tl.append(PowerState::kNbpuActive, kSubframeSec);
  const double active = kWakeLeadSec + kSubframeSec +
                        reconfig_events * (kWakeLeadSec + reconfig_burst_sec);
  if (active >= kPeriodSec) throw std::invalid_argument("active time exceeds the period");
  // Spread the reconfiguration bursts over the rest of the period.
  const double idle_each =
      (kPeriodSec - active) / (reconfig_events > 0 ? reconfig_events + 1 : 1);
  for (int i = 0; i < reconfig_events; ++i) {
    tl.append(PowerState::kIdle, idle_each);
    tl.append(PowerState::kWake, kWakeLeadSec);
    tl.append(PowerState::kReconfigActive, reconfig_burst_sec);
  }
  tl.append(PowerState::kIdle, idle_each);
  return tl;
}

}  // namespace nrsurf
