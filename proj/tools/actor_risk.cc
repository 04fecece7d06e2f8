// Command-line front end: scenario generation, closed-loop risk runs and the
// exact lattice oracle.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "actor_risk/case_study.h"
#include "actor_risk/report.h"
#include "actor_risk/risk.h"
#include "actor_risk/scenario_io.h"
#include "actor_risk/simulation.h"

namespace {

using namespace actor_risk;

constexpr int kExitConfig = 2;

struct RunArgs {
  std::string scenario;
  bool casestudy_defaults = false;
  bool reference_timing = false;
  uint64_t seed = 42;
  int horizon = 50;
  int replan_every = 15;
  int samples = 1;
  double noise_accel = 0.0;
  double noise_yawrate = 0.0;
  std::string op = "euclid";
  bool exact = false;
  int ticks_per_step = 10;
  std::string maneuvers = "keep,shift_left,shift_right";
  int iterations = -1;
  double target_speed = -1.0;
  int threads = 1;
  std::string out = "out";
};

struct OracleArgs {
  std::string scenario;
  int t = 0;
  int k = 30;
  int steps = 3;
  std::string maneuvers = "keep,shift_left,shift_right";
};

struct CaseStudyArgs {
  std::string out;
  bool reference_timing = false;
  bool no_brake = false;
  double brake_decel = -1.0;
  double brake_duration = -1.0;
  double steady_duration = -1.0;
  double steady2_duration = -1.0;
  double lane_change_duration = -1.0;
  double init_accel = -1.0;
};

CaseStudyParams BaseParams(bool reference_timing) {
  return reference_timing ? CaseStudyParams::ReferenceTiming() : CaseStudyParams::Defaults();
}

int CmdRun(const RunArgs& a) {
  Scenario scenario;
  RunConfig cfg;
  if (a.casestudy_defaults == !a.scenario.empty()) {
    Fail(ErrorCode::kConfig, "give exactly one of --scenario or --casestudy-defaults");
  }
  if (a.casestudy_defaults) {
    const CaseStudy cs = GenerateCaseStudy(BaseParams(a.reference_timing));
    scenario = cs.scenario;
    cfg.planner.target_speed = cs.params.ego_desired_speed;
    cfg.planner.iteration_budget = cs.params.planner_iterations;
  } else {
    scenario = LoadScenarioFile(a.scenario);
  }
  if (a.target_speed >= 0.0) cfg.planner.target_speed = a.target_speed;
  cfg.seed = a.seed;
  cfg.horizon = a.horizon;
  cfg.replan_every = a.replan_every;
  cfg.prediction.sample_count = a.samples;
  cfg.prediction.noise_accel_sigma = a.noise_accel;
  cfg.prediction.noise_yawrate_sigma = a.noise_yawrate;
  if (a.iterations >= 0) cfg.planner.iteration_budget = a.iterations;
  cfg.threads = a.threads;
  cfg.euclid = a.op == "euclid" || a.op == "both";
  cfg.kl = a.op == "kl" || a.op == "both";
  cfg.exact = a.exact;
  if (a.ticks_per_step < 1 || a.horizon % a.ticks_per_step != 0) {
    Fail(ErrorCode::kConfig, "--ticks-per-step must divide --horizon");
  }
  cfg.lattice.ticks_per_step = a.ticks_per_step;
  cfg.lattice.decision_steps = a.horizon / a.ticks_per_step;
  cfg.lattice.maneuvers = ParseManeuverList(a.maneuvers);

  const RunResult result = RunSimulation(scenario, cfg);
  WriteRunArtifacts(a.out, result, scenario.phases);
  std::cerr << "wrote " << result.records.size() << " records for " << result.replan_ticks.size()
            << " replans to " << a.out << "\n";
  return 0;
}

int CmdOracle(const OracleArgs& a) {
  const Scenario scenario = LoadScenarioFile(a.scenario);
  if (a.steps < 1 || a.k % a.steps != 0) {
    Fail(ErrorCode::kConfig, "--steps must divide --k");
  }
  LatticeConfig lattice;
  lattice.decision_steps = a.steps;
  lattice.ticks_per_step = a.k / a.steps;
  lattice.maneuvers = ParseManeuverList(a.maneuvers);
  ValidateLatticeConfig(lattice);
  const ExactRisk risk = ComputeExactRisk(ExactInputFor(scenario, a.t, a.k), lattice);
  std::cout << "universe," << risk.universe << "\n"
            << "feasible," << risk.feasible << "\n"
            << "total_rho," << FormatNumber(risk.total) << "\n"
            << "actor_id,rho,feasible_without\n";
  for (const auto& [id, rho] : risk.per_actor) {
    std::cout << id.str() << ',' << FormatNumber(rho) << ',' << risk.feasible_without.at(id)
              << "\n";
  }
  return 0;
}

int CmdCaseStudy(const CaseStudyArgs& a) {
  CaseStudyParams p = BaseParams(a.reference_timing);
  if (a.no_brake) p.include_brake_phase = false;
  if (a.brake_decel >= 0.0) p.brake_deceleration = a.brake_decel;
  if (a.brake_duration >= 0.0) p.brake_phase_duration = a.brake_duration;
  if (a.steady_duration >= 0.0) p.steady_duration = a.steady_duration;
  if (a.steady2_duration >= 0.0) p.steady2_duration = a.steady2_duration;
  if (a.lane_change_duration >= 0.0) p.lane_change_duration = a.lane_change_duration;
  if (a.init_accel >= 0.0) p.init_accel = a.init_accel;
  const CaseStudy cs = GenerateCaseStudy(p);
  SaveScenarioFile(cs.scenario, a.out);
  std::cerr << "wrote " << cs.scenario.npc_trajectories.size() << " actors, "
            << cs.scenario.phases.size() << " phases, " << cs.scenario.horizon_ticks
            << " ticks to " << a.out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Actor-level risk analysis for highway driving scenarios"};
  app.require_subcommand(1);

  RunArgs run;
  CLI::App* run_cmd = app.add_subcommand("run", "closed-loop run with per-actor risk");
  auto* scen_opt = run_cmd->add_option("--scenario", run.scenario, "scenario JSON file");
  auto* cs_opt = run_cmd->add_flag("--casestudy-defaults", run.casestudy_defaults,
                                   "use the generated default case study");
  scen_opt->excludes(cs_opt);
  run_cmd->add_flag("--reference-timing", run.reference_timing,
                    "stretch the case-study phases to the long reference timing");
  run_cmd->add_option("--seed", run.seed);
  run_cmd->add_option("--horizon", run.horizon, "prediction and planning horizon (ticks)");
  run_cmd->add_option("--replan-every", run.replan_every, "ticks between replans");
  run_cmd->add_option("--samples", run.samples, "sampled futures per actor; >= 2 adds moments");
  run_cmd->add_option("--noise-accel", run.noise_accel, "acceleration noise sigma (m/s^2)");
  run_cmd->add_option("--noise-yawrate", run.noise_yawrate, "yaw-rate noise sigma (rad/s)");
  run_cmd->add_option("--operator", run.op)->check(CLI::IsMember({"euclid", "kl", "both"}));
  run_cmd->add_flag("--exact-lattice", run.exact, "add the exact lattice risk column");
  run_cmd->add_option("--ticks-per-step", run.ticks_per_step, "lattice step length (ticks)");
  run_cmd->add_option("--maneuvers", run.maneuvers, "lattice maneuvers, comma separated");
  run_cmd->add_option("--iterations", run.iterations, "sampling planner iteration budget (default 2000, 4000 for the case study)");
  run_cmd->add_option("--target-speed", run.target_speed, "ego cruise speed (m/s)");
  run_cmd->add_option("--threads", run.threads);
  run_cmd->add_option("--out", run.out, "output directory");

  OracleArgs oracle;
  CLI::App* oracle_cmd = app.add_subcommand("oracle", "exact lattice risk table");
  oracle_cmd->add_option("--scenario", oracle.scenario)->required();
  oracle_cmd->add_option("--t", oracle.t, "start tick");
  oracle_cmd->add_option("--k", oracle.k, "horizon (ticks)");
  oracle_cmd->add_option("--steps", oracle.steps, "decision steps");
  oracle_cmd->add_option("--maneuvers", oracle.maneuvers);

  CaseStudyArgs cs;
  CLI::App* cs_cmd = app.add_subcommand("casestudy", "write the case-study scenario");
  cs_cmd->add_option("--out", cs.out)->required();
  cs_cmd->add_flag("--reference-timing", cs.reference_timing);
  cs_cmd->add_flag("--no-brake", cs.no_brake, "omit the emergency-braking phase");
  cs_cmd->add_option("--brake-decel", cs.brake_decel);
  cs_cmd->add_option("--brake-duration", cs.brake_duration, "seconds");
  cs_cmd->add_option("--steady-duration", cs.steady_duration, "seconds");
  cs_cmd->add_option("--steady2-duration", cs.steady2_duration, "seconds");
  cs_cmd->add_option("--lane-change-duration", cs.lane_change_duration, "seconds");
  cs_cmd->add_option("--init-accel", cs.init_accel, "m/s^2");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (run_cmd->parsed()) return CmdRun(run);
    if (oracle_cmd->parsed()) return CmdOracle(oracle);
    return CmdCaseStudy(cs);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
