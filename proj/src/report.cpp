#include "gaussflow/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

namespace gaussflow {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::optional<double> MonitorRecord::*opt_field(int col) {
    switch (col) {
        case 3: return &MonitorRecord::gauss_radius_sup;
        case 4: return &MonitorRecord::height_sup;
        case 5: return &MonitorRecord::weighted_sup;
        case 6: return &MonitorRecord::decay_monitor;
        case 7: return &MonitorRecord::normal_position_sup;
        case 8: return &MonitorRecord::huisken_density;
        case 9: return &MonitorRecord::self_similar_residual;
        case 10: return &MonitorRecord::res_g;
        case 11: return &MonitorRecord::res_gamma;
        case 12: return &MonitorRecord::res_B2;
    }
    return nullptr;
}

}  // namespace

void write_monitors_csv(std::ostream& os, const std::vector<MonitorRecord>& records) {
    for (size_t c = 0; c < kMonitorColumns.size(); ++c)
        os << kMonitorColumns[c] << (c + 1 < kMonitorColumns.size() ? "," : "\n");
    for (const MonitorRecord& r : records) {
        os << fmt17(r.t) << "," << fmt17(r.sup_B2) << "," << fmt17(r.sup_H2);
        for (int col = 3; col < static_cast<int>(kMonitorColumns.size()); ++col) {
            const auto field = opt_field(col);
            os << ",";
            if (const auto& v = r.*field) os << fmt17(*v);
        }
        os << "\n";
    }
}

std::vector<MonitorRecord> read_monitors_csv(std::istream& is) {
    std::vector<MonitorRecord> records;
    std::string line;
    if (!std::getline(is, line)) throw ConfigError("monitors.csv is empty");
    {
        std::stringstream head(line);
        std::string cell;
        for (size_t c = 0; c < kMonitorColumns.size(); ++c) {
            if (!std::getline(head, cell, ',') || cell != kMonitorColumns[c])
                throw ConfigError("monitors.csv header mismatch");
        }
    }
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string cell;
        MonitorRecord r;
        for (int col = 0; col < static_cast<int>(kMonitorColumns.size()); ++col) {
            if (!std::getline(row, cell, ',')) cell.clear();
            if (col == 0)
                r.t = std::stod(cell);
            else if (col == 1)
                r.sup_B2 = std::stod(cell);
            else if (col == 2)
                r.sup_H2 = std::stod(cell);
            else if (!cell.empty())
                r.*opt_field(col) = std::stod(cell);
        }
        records.push_back(r);
    }
    return records;
}

namespace {

template <class Getter>
MonotonicityVerdict stepwise_verdict(const std::vector<MonitorRecord>& records, Getter get,
                                     double rel_slack, double abs_slack, double t_min = -1.0) {
    MonotonicityVerdict v;
    v.slack = rel_slack > 0.0 ? rel_slack : abs_slack;
    std::optional<double> prev;
    for (const MonitorRecord& r : records) {
        if (r.t < t_min) continue;
        const std::optional<double> cur = get(r);
        if (!cur) continue;
        if (prev) {
            v.applicable = true;
            const double allowed = *prev * (1.0 + rel_slack) + abs_slack;
            const double excess = *cur - allowed;
            if (excess > 0.0) {
                v.ok = false;
                v.worst_excess = std::max(v.worst_excess, excess);
            }
        }
        prev = cur;
    }
    return v;
}

}  // namespace

RunVerdicts compute_verdicts(const std::vector<MonitorRecord>& records,
                             const SlackConfig& slacks) {
    RunVerdicts out;

    // Gauss radius: compared against the initial record, absolute slack.
    {
        MonotonicityVerdict v;
        v.slack = slacks.gauss_radius;
        std::optional<double> first;
        for (const MonitorRecord& r : records) {
            if (!r.gauss_radius_sup) continue;
            if (!first) {
                first = *r.gauss_radius_sup;
                continue;
            }
            v.applicable = true;
            const double excess = *r.gauss_radius_sup - (*first + slacks.gauss_radius);
            if (excess > 0.0) {
                v.ok = false;
                v.worst_excess = std::max(v.worst_excess, excess);
            }
        }
        out.monotone["gauss_radius_sup"] = v;
    }

    out.monotone["weighted_sup"] = stepwise_verdict(
        records, [](const MonitorRecord& r) { return r.weighted_sup; }, slacks.weighted, 0.0);
    out.monotone["decay_monitor"] = stepwise_verdict(
        records, [](const MonitorRecord& r) { return r.decay_monitor; }, slacks.decay, 0.0);
    out.monotone["height_sup"] = stepwise_verdict(
        records, [](const MonitorRecord& r) { return r.height_sup; }, 0.0, slacks.height);
    out.monotone["sup_B2"] = stepwise_verdict(
        records, [](const MonitorRecord& r) { return std::optional<double>(r.sup_B2); },
        slacks.sup_B2_rel, slacks.sup_B2_abs);
    out.monotone["huisken_density"] = stepwise_verdict(
        records, [](const MonitorRecord& r) { return r.huisken_density; }, 0.0, slacks.huisken);
    out.monotone["self_similar_residual"] = stepwise_verdict(
        records, [](const MonitorRecord& r) { return r.self_similar_residual; }, 0.0,
        slacks.self_similar, 1.0);

    // c/t fit against the initial decay monitor.
    if (!records.empty() && records.front().decay_monitor) {
        const double t_last = records.back().t;
        out.c_bound = *records.front().decay_monitor;
        for (const MonitorRecord& r : records) {
            if (r.t < 0.1 * t_last) continue;
            out.c_fit_applicable = true;
            out.c_fit = std::max(out.c_fit, r.t * r.sup_B2);
        }
        if (out.c_fit_applicable) out.c_ok = out.c_fit <= out.c_bound * (1.0 + slacks.c_over_t);
    }
    return out;
}

nlohmann::json verdicts_to_json(const RunVerdicts& verdicts) {
    nlohmann::json j;
    nlohmann::json mono = nlohmann::json::object();
    for (const auto& [name, v] : verdicts.monotone) {
        mono[name] = {{"applicable", v.applicable},
                      {"ok", v.ok},
                      {"worst_excess", v.worst_excess},
                      {"slack", v.slack}};
    }
    j["monotone"] = mono;
    j["c_over_t"] = {{"applicable", verdicts.c_fit_applicable},
                     {"c_fit", verdicts.c_fit},
                     {"bound", verdicts.c_bound},
                     {"ok", verdicts.c_ok}};
    return j;
}

std::vector<std::string> enforced_verdicts(const Signature& sig, bool rescaled) {
    if (rescaled) return {"gauss_radius_sup", "height_sup"};
    if (sig.pseudo()) return {"sup_B2", "gauss_radius_sup", "height_sup"};
    return {"gauss_radius_sup", "weighted_sup", "decay_monitor", "height_sup", "huisken_density"};
}

}  // namespace gaussflow
