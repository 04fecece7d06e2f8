#include "actor_risk/report.h"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace actor_risk {
namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 60.0;
constexpr double kRight = 150.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 50.0;

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                                 "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

void Cell(std::ostream& os, const std::optional<double>& v) {
  os << ',';
  if (v) os << FormatNumber(*v);
}

struct Axes {
  double x_min, x_max, y_min, y_max;

  double X(double v) const {
    const double span = x_max > x_min ? x_max - x_min : 1.0;
    return kLeft + (v - x_min) / span * (kWidth - kLeft - kRight);
  }
  double Y(double v) const {
    const double span = y_max > y_min ? y_max - y_min : 1.0;
    return kHeight - kBottom - (v - y_min) / span * (kHeight - kTop - kBottom);
  }
};

std::string Fixed(double v) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << v;
  return os.str();
}

void SvgOpen(std::ostream& os, const std::string& title) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << kLeft << "\" y=\"18\" font-size=\"13\">" << title << "</text>\n";
}

void SvgFrame(std::ostream& os, const Axes& a, const std::string& x_label,
              const std::string& y_label) {
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  os << "<rect x=\"" << x0 << "\" y=\"" << y1 << "\" width=\"" << x1 - x0 << "\" height=\""
     << y0 - y1 << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = a.x_min + (a.x_max - a.x_min) * i / 4.0;
    const double fy = a.y_min + (a.y_max - a.y_min) * i / 4.0;
    os << "<text x=\"" << Fixed(a.X(fx)) << "\" y=\"" << y0 + 15
       << "\" text-anchor=\"middle\">" << Fixed(fx) << "</text>\n";
    os << "<text x=\"" << x0 - 5 << "\" y=\"" << Fixed(a.Y(fy) + 4)
       << "\" text-anchor=\"end\">" << Fixed(fy) << "</text>\n";
  }
  os << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << kHeight - 12
     << "\" text-anchor=\"middle\">" << x_label << "</text>\n";
  os << "<text x=\"14\" y=\"" << (y0 + y1) / 2 << "\" transform=\"rotate(-90 14 " << (y0 + y1) / 2
     << ")\" text-anchor=\"middle\">" << y_label << "</text>\n";
}

void SvgLegend(std::ostream& os, const std::vector<ActorId>& ids) {
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const double y = kTop + 14.0 * static_cast<double>(i) + 8.0;
    os << "<rect x=\"" << kWidth - kRight + 12 << "\" y=\"" << y - 8
       << "\" width=\"10\" height=\"10\" fill=\"" << kPalette[i % kPalette.size()] << "\"/>\n"
       << "<text x=\"" << kWidth - kRight + 28 << "\" y=\"" << y + 1 << "\">" << ids[i].str()
       << "</text>\n";
  }
}

std::vector<ActorId> ActorsOf(const std::vector<StepRecord>& records) {
  std::vector<ActorId> ids;
  for (const StepRecord& r : records) {
    if (std::find(ids.begin(), ids.end(), r.actor_id) == ids.end()) ids.push_back(r.actor_id);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::size_t ColorIndex(const std::vector<ActorId>& ids, const ActorId& id) {
  return static_cast<std::size_t>(std::find(ids.begin(), ids.end(), id) - ids.begin()) %
         kPalette.size();
}

}  // namespace

std::string FormatNumber(double value) {
  std::array<char, 32> buf;
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), end);
}

void WriteRunCsv(std::ostream& os, const std::vector<StepRecord>& records) {
  os << kRunCsvHeader << '\n';
  for (const StepRecord& r : records) {
    os << r.tick << ',' << r.phase << ',' << r.actor_id.str();
    Cell(os, r.gamma_euclid);
    Cell(os, r.gamma_kl);
    Cell(os, r.rho_exact);
    Cell(os, r.mean_gamma);
    Cell(os, r.var_gamma);
    Cell(os, r.prediction_error);
    os << ',' << r.ego_lane << ',' << (r.plan_partial ? 1 : 0) << '\n';
  }
}

void WritePhaseSummaryCsv(std::ostream& os, const std::vector<SummaryRow>& summary) {
  os << "phase,actor_id,metric,count,q1,median,q3\n";
  for (const SummaryRow& s : summary) {
    os << s.phase << ',' << s.actor_id.str() << ',' << s.metric << ',' << s.count << ','
       << FormatNumber(s.q1) << ',' << FormatNumber(s.median) << ',' << FormatNumber(s.q3) << '\n';
  }
}

void WriteScatterSvg(std::ostream& os, const std::vector<StepRecord>& records) {
  const std::vector<ActorId> ids = ActorsOf(records);
  Axes a{0.0, 0.0, 0.0, 0.0};
  for (const StepRecord& r : records) {
    if (!r.gamma_euclid || !r.prediction_error) continue;
    a.x_max = std::max(a.x_max, *r.prediction_error);
    a.y_max = std::max(a.y_max, *r.gamma_euclid);
  }
  a.x_max = a.x_max > 0.0 ? a.x_max * 1.05 : 1.0;
  a.y_max = a.y_max > 0.0 ? a.y_max * 1.05 : 1.0;
  SvgOpen(os, "Actor importance vs. prediction error");
  SvgFrame(os, a, "prediction error (m/waypoint)", "importance (m/waypoint)");
  for (const StepRecord& r : records) {
    if (!r.gamma_euclid || !r.prediction_error) continue;
    os << "<circle cx=\"" << Fixed(a.X(*r.prediction_error)) << "\" cy=\""
       << Fixed(a.Y(*r.gamma_euclid)) << "\" r=\"3\" fill-opacity=\"0.7\" fill=\""
       << kPalette[ColorIndex(ids, r.actor_id)] << "\"/>\n";
  }
  SvgLegend(os, ids);
  os << "</svg>\n";
}

void WriteRiskTimelineSvg(std::ostream& os, const std::vector<StepRecord>& records,
                          const std::vector<PhaseSpan>& phases) {
  const std::vector<ActorId> ids = ActorsOf(records);
  Axes a{0.0, 1.0, 0.0, 0.0};
  for (const StepRecord& r : records) {
    a.x_max = std::max(a.x_max, static_cast<double>(r.tick));
    if (r.gamma_euclid) a.y_max = std::max(a.y_max, *r.gamma_euclid);
  }
  for (const PhaseSpan& p : phases) a.x_max = std::max(a.x_max, static_cast<double>(p.end_tick));
  a.y_max = a.y_max > 0.0 ? a.y_max * 1.05 : 1.0;
  SvgOpen(os, "Actor importance over time");
  for (std::size_t i = 0; i < phases.size(); ++i) {
    const double x0 = a.X(phases[i].start_tick);
    const double x1 = a.X(phases[i].end_tick);
    os << "<rect x=\"" << Fixed(x0) << "\" y=\"" << kTop << "\" width=\"" << Fixed(x1 - x0)
       << "\" height=\"" << kHeight - kTop - kBottom << "\" fill=\""
       << (i % 2 == 0 ? "#f2f2f2" : "#e0e0e0") << "\"/>\n"
       << "<text x=\"" << Fixed((x0 + x1) / 2) << "\" y=\"" << kTop + 12
       << "\" text-anchor=\"middle\" fill=\"#555\">" << phases[i].name << "</text>\n";
  }
  SvgFrame(os, a, "tick", "importance (m/waypoint)");
  for (const ActorId& id : ids) {
    os << "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"" << kPalette[ColorIndex(ids, id)]
       << "\" points=\"";
    bool first = true;
    for (const StepRecord& r : records) {
      if (r.actor_id != id || !r.gamma_euclid) continue;
      os << (first ? "" : " ") << Fixed(a.X(r.tick)) << ',' << Fixed(a.Y(*r.gamma_euclid));
      first = false;
    }
    os << "\"/>\n";
  }
  SvgLegend(os, ids);
  os << "</svg>\n";
}

void WriteRunArtifacts(const std::string& dir, const RunResult& result,
                       const std::vector<PhaseSpan>& phases) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) Fail(ErrorCode::kConfig, "cannot create output directory " + dir + ": " + ec.message());
  auto write = [&](const std::string& name, auto&& fn) {
    const std::filesystem::path path = std::filesystem::path(dir) / name;
    std::ofstream os(path, std::ios::binary);
    if (!os) Fail(ErrorCode::kConfig, "cannot write " + path.string());
    fn(os);
    if (!os) Fail(ErrorCode::kConfig, "write failed for " + path.string());
  };
  write("run.csv", [&](std::ostream& os) { WriteRunCsv(os, result.records); });
  write("phase_summary.csv", [&](std::ostream& os) { WritePhaseSummaryCsv(os, result.summary); });
  write("scatter.svg", [&](std::ostream& os) { WriteScatterSvg(os, result.records); });
  write("risk_timeline.svg",
        [&](std::ostream& os) { WriteRiskTimelineSvg(os, result.records, phases); });
}

}  // namespace actor_risk
