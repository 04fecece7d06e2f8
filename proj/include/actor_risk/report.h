#ifndef ACTOR_RISK_REPORT_H_
#define ACTOR_RISK_REPORT_H_

#include <ostream>
#include <string>
#include <vector>

#include "actor_risk/simulation.h"

namespace actor_risk {

inline constexpr const char* kRunCsvHeader =
    "tick,phase,actor_id,gamma_euclid,gamma_kl,rho_exact,mean_gamma,var_gamma,"
    "prediction_error,ego_lane,plan_partial";

// Shortest decimal form that reads back to the same double.
std::string FormatNumber(double value);

void WriteRunCsv(std::ostream& os, const std::vector<StepRecord>& records);
void WritePhaseSummaryCsv(std::ostream& os, const std::vector<SummaryRow>& summary);

// gamma_euclid against prediction error, one point per actor-step that has
// both values.
void WriteScatterSvg(std::ostream& os, const std::vector<StepRecord>& records);

// gamma_euclid over replan ticks, one line per actor, with phase bands.
void WriteRiskTimelineSvg(std::ostream& os, const std::vector<StepRecord>& records,
                          const std::vector<PhaseSpan>& phases);

// Writes run.csv, phase_summary.csv, scatter.svg and risk_timeline.svg into
// `dir`, creating it if needed. Throws kConfig when a file cannot be written.
void WriteRunArtifacts(const std::string& dir, const RunResult& result,
                       const std::vector<PhaseSpan>& phases);

}  // namespace actor_risk

#endif  // ACTOR_RISK_REPORT_H_
