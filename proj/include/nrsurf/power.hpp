#pragma once

#include <string>
#include <vector>

#include "nrsurf/common.hpp"

namespace nrsurf {

enum class PowerState { kIdle, kWake, kNbpuActive, kReconfigActive };

const char* power_state_name(PowerState s);

// Measured state powers (watts).
struct PowerTable {
  double nbpu_active = 2.4e-3;     // amp 655u + adc 294u + timer 111u + logic 1.36m
  double reconfig_active = 1.67e-3;
  double idle = 6.4e-6;            // standby 5.9u + timer 0.5u + cell leakage 0.072u
  double wake = 1.67e-3;           // MCU spin-up billed at the reconfig rate

  double of(PowerState s) const;
};

struct PowerSegment {
  PowerState state;
  double duration_sec;
};

struct PowerTimeline {
  std::vector<PowerSegment> segments;

  double total_duration() const;
  void append(PowerState s, double duration_sec);
};

// Energy-weighted average over the timeline (throws on empty/zero span).
double average_power(const PowerTimeline& timeline, const PowerTable& table);

// capacity (Wh) / load (W), in years. Throws on non-positive load or capacity.
double battery_life_years(double avg_watts, double capacity_wh);

// Duty-cycled contribution of one active state (its segments plus the wake
// lead-ins immediately preceding them), as average watts over the timeline.
double duty_component(const PowerTimeline& timeline, const PowerTable& table, PowerState state);

inline constexpr double kAaCapacityWh = 4.5;
inline constexpr double kWakeLeadSec = 10e-6;

// The default 20 ms duty cycle: one NBPU subframe plus `reconfig_events`
// reconfiguration bursts, each preceded by a wake segment, idle elsewhere.
PowerTimeline default_period_timeline(int reconfig_events = 10,
                                      double reconfig_burst_sec = 130e-6);

}  // namespace nrsurf
