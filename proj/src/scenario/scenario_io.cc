#include "actor_risk/scenario_io.h"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace actor_risk {
namespace {

using nlohmann::json;

[[noreturn]] void SchemaError(const std::string& path, const std::string& what) {
  Fail(ErrorCode::kValidation, path + ": " + what);
}

const json& Field(const json& object, const std::string& key, const std::string& path) {
  if (!object.is_object()) SchemaError(path, "expected an object");
  auto it = object.find(key);
  if (it == object.end()) SchemaError(path + "." + key, "missing field");
  return *it;
}

double Number(const json& value, const std::string& path) {
  if (!value.is_number()) SchemaError(path, "expected a number");
  return value.get<double>();
}

int Integer(const json& value, const std::string& path) {
  if (!value.is_number_integer()) SchemaError(path, "expected an integer");
  return value.get<int>();
}

ActorState StateFrom(const json& value, const std::string& path) {
  if (!value.is_array() || value.size() != 4) {
    SchemaError(path, "expected [x, y, heading, speed]");
  }
  ActorState s;
  s.x = Number(value[0], path + "[0]");
  s.y = Number(value[1], path + "[1]");
  s.heading = Number(value[2], path + "[2]");
  s.speed = Number(value[3], path + "[3]");
  return s;
}

std::string Num(double v) { return json(v).dump(); }

std::string StateText(const ActorState& s) {
  return "[" + Num(s.x) + ", " + Num(s.y) + ", " + Num(s.heading) + ", " + Num(s.speed) + "]";
}

}  // namespace

Scenario LoadScenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    SchemaError("$", std::string("malformed document: ") + e.what());
  }
  Scenario s;
  s.version = Integer(Field(doc, "version", "$"), "$.version");
  if (s.version != kScenarioFormatVersion) {
    SchemaError("$.version", "unsupported version " + std::to_string(s.version));
  }
  const json& map = Field(doc, "map", "$");
  s.map.lane_count = Integer(Field(map, "lane_count", "$.map"), "$.map.lane_count");
  s.map.lane_width = Number(Field(map, "lane_width", "$.map"), "$.map.lane_width");
  s.map.road_length = Number(Field(map, "road_length", "$.map"), "$.map.road_length");
  s.map.speed_limit = Number(Field(map, "speed_limit", "$.map"), "$.map.speed_limit");
  s.dt = Number(Field(doc, "dt", "$"), "$.dt");
  s.horizon_ticks = Integer(Field(doc, "horizon_ticks", "$"), "$.horizon_ticks");
  const json& ego = Field(doc, "ego", "$");
  s.ego_initial = StateFrom(Field(ego, "state", "$.ego"), "$.ego.state");
  s.ego_radius = Number(Field(ego, "radius", "$.ego"), "$.ego.radius");

  const json& actors = Field(doc, "actors", "$");
  if (!actors.is_array()) SchemaError("$.actors", "expected an array");
  for (std::size_t i = 0; i < actors.size(); ++i) {
    const std::string path = "$.actors[" + std::to_string(i) + "]";
    const json& a = actors[i];
    const json& id_value = Field(a, "id", path);
    if (!id_value.is_string() && !id_value.is_number_integer()) {
      SchemaError(path + ".id", "expected a string or integer");
    }
    const ActorId id(id_value.is_string() ? id_value.get<std::string>()
                                          : std::to_string(id_value.get<long long>()));
    if (id == EgoId()) SchemaError(path + ".id", "'ego' is reserved");
    if (s.npc_trajectories.contains(id)) {
      SchemaError(path + ".id", "duplicate actor id " + id.str());
    }
    const double radius = Number(Field(a, "radius", path), path + ".radius");
    const json& states = Field(a, "states", path);
    if (!states.is_array()) SchemaError(path + ".states", "expected an array");
    if (static_cast<long long>(states.size()) != static_cast<long long>(s.horizon_ticks) + 1) {
      std::ostringstream msg;
      msg << "actor " << id << " has " << states.size() << " states, expected horizon_ticks + 1 = "
          << s.horizon_ticks + 1;
      SchemaError(path + ".states", msg.str());
    }
    Trajectory t;
    t.actor_id = id;
    t.start_tick = 0;
    t.dt = s.dt;
    t.states.reserve(states.size());
    for (std::size_t j = 0; j < states.size(); ++j) {
      t.states.push_back(StateFrom(states[j], path + ".states[" + std::to_string(j) + "]"));
    }
    s.npc_trajectories.emplace(id, std::move(t));
    s.actor_radius.emplace(id, radius);
  }

  if (doc.contains("phase_metadata")) {
    const json& phases = doc["phase_metadata"];
    if (!phases.is_array()) SchemaError("$.phase_metadata", "expected an array");
    for (std::size_t i = 0; i < phases.size(); ++i) {
      const std::string path = "$.phase_metadata[" + std::to_string(i) + "]";
      const json& name = Field(phases[i], "name", path);
      if (!name.is_string()) SchemaError(path + ".name", "expected a string");
      s.phases.push_back(PhaseSpan{name.get<std::string>(),
                                   Integer(Field(phases[i], "start_tick", path), path + ".start_tick"),
                                   Integer(Field(phases[i], "end_tick", path), path + ".end_tick")});
    }
  }
  ValidateScenario(s);
  return s;
}

std::string SaveScenario(const Scenario& s) {
  std::ostringstream out;
  out << "{\n";
  out << "  \"version\": " << s.version << ",\n";
  out << "  \"map\": {\"lane_count\": " << s.map.lane_count
      << ", \"lane_width\": " << Num(s.map.lane_width)
      << ", \"road_length\": " << Num(s.map.road_length)
      << ", \"speed_limit\": " << Num(s.map.speed_limit) << "},\n";
  out << "  \"dt\": " << Num(s.dt) << ",\n";
  out << "  \"horizon_ticks\": " << s.horizon_ticks << ",\n";
  out << "  \"ego\": {\"state\": " << StateText(s.ego_initial)
      << ", \"radius\": " << Num(s.ego_radius) << "},\n";
  out << "  \"actors\": [";
  bool first_actor = true;
  for (const auto& [id, trajectory] : s.npc_trajectories) {
    out << (first_actor ? "\n" : ",\n");
    first_actor = false;
    out << "    {\"id\": " << json(id.str()).dump() << ", \"radius\": " << Num(s.RadiusOf(id))
        << ", \"states\": [";
    for (std::size_t j = 0; j < trajectory.states.size(); ++j) {
      out << (j == 0 ? "\n      " : ",\n      ") << StateText(trajectory.states[j]);
    }
    out << "\n    ]}";
  }
  out << (first_actor ? "],\n" : "\n  ],\n");
  out << "  \"phase_metadata\": [";
  for (std::size_t i = 0; i < s.phases.size(); ++i) {
    const PhaseSpan& p = s.phases[i];
    out << (i == 0 ? "\n" : ",\n") << "    {\"name\": " << json(p.name).dump()
        << ", \"start_tick\": " << p.start_tick << ", \"end_tick\": " << p.end_tick << "}";
  }
  out << (s.phases.empty() ? "]\n" : "\n  ]\n");
  out << "}\n";
  return out.str();
}

Scenario LoadScenarioFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kValidation, "cannot open scenario file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return LoadScenario(buffer.str());
}

void SaveScenarioFile(const Scenario& scenario, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kConfig, "cannot write scenario file " + path.string());
  out << SaveScenario(scenario);
  if (!out) Fail(ErrorCode::kConfig, "failed writing scenario file " + path.string());
}

}  // namespace actor_risk
