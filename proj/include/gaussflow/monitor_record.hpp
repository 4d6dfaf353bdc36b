#pragma once

#include <array>
#include <optional>
#include <string>

namespace gaussflow {

/// One time sample of every monitored scalar. Optional entries stay empty
/// when the corresponding monitor is disabled or not applicable.
struct MonitorRecord {
    double t = 0.0;
    double sup_B2 = 0.0;
    double sup_H2 = 0.0;
    std::optional<double> gauss_radius_sup;
    std::optional<double> height_sup;
    std::optional<double> weighted_sup;
    std::optional<double> decay_monitor;
    std::optional<double> normal_position_sup;
    std::optional<double> huisken_density;
    std::optional<double> self_similar_residual;
    std::optional<double> res_g;
    std::optional<double> res_gamma;
    std::optional<double> res_B2;
};

/// Fixed CSV column order for monitor records.
inline constexpr std::array<const char*, 13> kMonitorColumns = {
    "t",
    "sup_B2",
    "sup_H2",
    "gauss_radius_sup",
    "height_sup",
    "weighted_sup",
    "decay_monitor",
    "normal_position_sup",
    "huisken_density",
    "self_similar_residual",
    "res_g",
    "res_gamma",
    "res_B2",
};

}  // namespace gaussflow
