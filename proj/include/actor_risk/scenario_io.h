#ifndef ACTOR_RISK_SCENARIO_IO_H_
#define ACTOR_RISK_SCENARIO_IO_H_

#include <filesystem>
#include <string>
#include <string_view>

#include "actor_risk/scenario.h"

namespace actor_risk {

inline constexpr int kScenarioFormatVersion = 1;

// Scenario documents are JSON:
//
//   {"version": 1,
//    "map": {"lane_count", "lane_width", "road_length", "speed_limit"},
//    "dt": <s>, "horizon_ticks": <T>,
//    "ego": {"state": [x, y, heading, speed], "radius": <m>},
//    "actors": [{"id": "208", "radius": <m>, "states": [[x, y, heading, speed], ...]}],
//    "phase_metadata": [{"name", "start_tick", "end_tick"}]}
//
// Every actor carries exactly horizon_ticks + 1 states starting at tick 0.
// Numbers are written with enough digits to round-trip exactly.

// Throws kValidation with the offending field path.
Scenario LoadScenario(std::string_view text);
std::string SaveScenario(const Scenario& scenario);

Scenario LoadScenarioFile(const std::filesystem::path& path);
void SaveScenarioFile(const Scenario& scenario, const std::filesystem::path& path);

}  // namespace actor_risk

#endif  // ACTOR_RISK_SCENARIO_IO_H_
