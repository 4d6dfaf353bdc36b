#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gaussflow/config.hpp"
#include "gaussflow/monitor_record.hpp"

namespace gaussflow {

void write_monitors_csv(std::ostream& os, const std::vector<MonitorRecord>& records);
std::vector<MonitorRecord> read_monitors_csv(std::istream& is);

/// Pure series statement about one monitored column; the run decides
/// separately which verdicts its signature enforces.
struct MonotonicityVerdict {
    bool applicable = false;
    bool ok = true;
    double worst_excess = 0.0;
    double slack = 0.0;
};

struct RunVerdicts {
    std::map<std::string, MonotonicityVerdict> monotone;
    // c/t fit: c = max over t >= 0.1 * t_last of t * sup_B2, compared against
    // the initial decay monitor.
    bool c_fit_applicable = false;
    double c_fit = 0.0;
    double c_bound = 0.0;
    bool c_ok = true;
};

RunVerdicts compute_verdicts(const std::vector<MonitorRecord>& records, const SlackConfig& slacks);
nlohmann::json verdicts_to_json(const RunVerdicts& verdicts);

/// Verdict names whose monotonicity is guaranteed for the given signature;
/// exit code 1 is raised only for these. Rescaled records keep only the
/// scale-invariant guarantees (Gauss radius, height): the rescaled
/// curvature (2t+1)||B||^2 is bounded but not monotone.
std::vector<std::string> enforced_verdicts(const Signature& sig, bool rescaled);

}  // namespace gaussflow
