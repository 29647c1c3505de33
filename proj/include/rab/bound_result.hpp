#pragma once

#include <optional>
#include <string>

#include "rab/specfun.hpp"

namespace rab {

enum class BoundKind {
    csir_ach,
    csir_conv,
    nocsi_ach,
    nocsi_conv,
    nocsi_ach_known_activity,
    tdma,
};

inline const char* to_string(BoundKind k) {
    switch (k) {
        case BoundKind::csir_ach: return "csir-ach";
        case BoundKind::csir_conv: return "csir-conv";
        case BoundKind::nocsi_ach: return "nocsi-ach";
        case BoundKind::nocsi_conv: return "nocsi-conv";
        case BoundKind::nocsi_ach_known_activity: return "nocsi-ach-known-activity";
        case BoundKind::tdma: return "tdma";
    }
    return "?";
}

inline std::optional<BoundKind> parse_bound_kind(const std::string& s) {
    for (BoundKind k : {BoundKind::csir_ach, BoundKind::csir_conv, BoundKind::nocsi_ach,
                        BoundKind::nocsi_conv, BoundKind::nocsi_ach_known_activity,
                        BoundKind::tdma})
        if (s == to_string(k)) return k;
    return std::nullopt;
}

/// Optimizer arguments at which a bound is attained. Absent fields mean the
/// bound has no such parameter (they stay empty in reports, never zero).
struct Witnesses {
    std::optional<double> theta;
    std::optional<double> psi;
    std::optional<double> nu;
    std::optional<double> p_tot;
};

struct Diagnostics {
    int grid_points = 0;
    int refinements = 0;
    double residual = 0.0;
    std::string active_constraint;
    std::string notes;
};

/// One bound evaluation. eb.linear = p_tot / S whenever finite.
struct BoundResult {
    BoundKind kind{};
    EnergyPerBit eb;
    Witnesses witnesses;
    Diagnostics diagnostics;
};

}  // namespace rab
