// No-CSI bounds: projection-decoder achievability through the
// V/c/q/delta chain, the known-activity variant, and the converse built on
// the log-determinant capacity functional.
#pragma once

#include <cmath>

#include "rab/bound_result.hpp"
#include "rab/numerics.hpp"
#include "rab/specfun.hpp"

namespace rab {

/// Intermediate chain of the no-CSI achievability at one error fraction.
struct NoCsiThetaTerms {
    double theta;
    double delta1_star;
    double v_theta;      ///< in (0,1); may underflow to 0 for huge payloads
    double c_theta;      ///< 2 V/(1-V)
    double q_theta;
    double delta2_star;
    double w_theta;      ///< (1-V)/V (1 + delta2*)
    double delta3_star;
    double p_tot;        ///< W / ((1-delta3) xi(1-theta, 1))
};

/**
 * Full no-CSI achievability chain at error fraction theta in (eps, 1].
 *
 * The exponent of V is assembled in nats; (1-V)/V is computed as
 * expm1(exponent), which stays exact when V itself underflows. The literal
 * infimum delta3* is 0 because -ln(1-x) - x > 0 on all of (0,1); a positive
 * override is accepted for sensitivity studies.
 */
inline NoCsiThetaTerms nocsi_terms(const SystemParams& p, double theta, double delta3 = 0.0) {
    if (!(theta > p.eps && theta <= 1.0))
        detail::domain_fail("nocsi_terms", "theta outside (eps, 1]");
    const double c = p.pa * p.mu;
    if (!(c < 1.0)) detail::domain_fail("nocsi_terms", "pa*mu must be < 1");
    if (!(delta3 >= 0.0 && delta3 < 1.0))
        detail::domain_fail("nocsi_terms", "delta3 outside [0,1)");

    NoCsiThetaTerms t;
    t.theta = theta;
    t.delta1_star = c / (1.0 - c) * h_nats(theta);
    const double kap = 1.0 - c + theta * c;
    const double expo = t.delta1_star + kap / (1.0 - c) * h_nats(theta * c / kap) +
                        theta * c * p.ln_M / (1.0 - c) +
                        p.mu * (1.0 - p.pa + theta * p.pa) / (1.0 - c) *
                            h_nats(theta * p.pa / (1.0 - p.pa + theta * p.pa));
    t.v_theta = std::exp(-expo);
    const double ratio = std::expm1(expo);  // (1-V)/V
    t.c_theta = 2.0 / ratio;
    t.q_theta = c * h_nats(theta) / kap;
    const double q = t.q_theta, ct = t.c_theta;
    t.delta2_star = q * (1.0 + ct) + std::sqrt(q * q * ct * (2.0 + ct) + 2.0 * q * (1.0 + ct));
    t.w_theta = ratio * (1.0 + t.delta2_star);
    t.delta3_star = delta3;
    t.p_tot = t.w_theta / ((1.0 - delta3) * xi(1.0 - theta, 1.0));
    return t;
}

/// No-CSI achievability: sup over theta in (eps, 1] of the chain power.
inline BoundResult eb_nocsi_ach(const SystemParams& p, const SearchOptions& opts = {},
                                double delta3 = 0.0) {
    const double lo = p.eps + opts.open_interval_margin * (1.0 - p.eps);
    const OptResult best = maximize_1d(
        [&](double th) { return nocsi_terms(p, th, delta3).p_tot; }, lo, 1.0, opts);
    BoundResult r;
    r.kind = BoundKind::nocsi_ach;
    r.eb = EnergyPerBit::from_linear(best.value / p.S);
    r.witnesses.theta = best.arg;
    r.witnesses.p_tot = best.value;
    r.diagnostics.grid_points = opts.coarse_grid_points;
    r.diagnostics.refinements = opts.max_refinements;
    if (delta3 != 0.0) r.diagnostics.notes = "delta3 override " + std::to_string(delta3);
    return r;
}

/**
 * Achievability when the active set is known at the receiver: evaluated at
 * pa -> 1, mu -> pa*mu (same activity density, so S is unchanged), which
 * zeroes the activity-uncertainty entropy term of the V exponent. Never
 * above the random-access bound.
 */
inline BoundResult eb_nocsi_ach_known_activity(const SystemParams& p,
                                               const SearchOptions& opts = {},
                                               double delta3 = 0.0) {
    BoundResult r = eb_nocsi_ach(p.known_activity(), opts, delta3);
    r.kind = BoundKind::nocsi_ach_known_activity;
    return r;
}

/**
 * Slack of the no-CSI converse constraint at total power p_tot:
 *
 *   RHS - LHS,  LHS = ln M - eps ln(M-1) - h(eps),
 *               RHS = M V(1/(pa mu M), p_tot) - V(1/(pa mu), p_tot),
 *
 * with the M-scaled term evaluated through the stable small-aspect-ratio
 * expansion (M never materialized). Negative at p_tot = 0, increasing in
 * p_tot; its root is the converse power.
 */
inline double nocsi_conv_gap(const SystemParams& p, double p_tot) {
    if (!(p_tot >= 0.0)) detail::domain_fail("nocsi_conv_gap", "power must be nonnegative");
    const double c = p.pa * p.mu;
    const double lhs = p.ln_M - p.eps * ln_M_minus_1(p) - h_nats(p.eps);
    const double rhs = scaled_verdu_v(p.ln_M, c, p_tot) - verdu_v(1.0 / c, p_tot);
    return rhs - lhs;
}

/// No-CSI converse: root of the constraint slack in p_tot.
inline BoundResult eb_nocsi_conv(const SystemParams& p, const SearchOptions& opts = {}) {
    (void)opts;
    const BisectResult root = bisect_monotone(
        [&](double P) { return nocsi_conv_gap(p, P); }, 0.0, 1e-6, 1e6, 1e-12);
    BoundResult r;
    r.kind = BoundKind::nocsi_conv;
    r.eb = EnergyPerBit::from_linear(root.root / p.S);
    r.witnesses.p_tot = root.root;
    r.diagnostics.residual = root.residual;
    if (root.monotone_warning) r.diagnostics.notes = "constraint slack monotonicity warning";
    return r;
}

}  // namespace rab
