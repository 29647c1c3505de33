// CSIR bounds: random-coding achievability over decoded fraction nu, error
// fraction theta and fading tier psi, and the converse combining a
// mutual-information constraint (for every theta) with a single-UE
// quasi-static outage constraint.
#pragma once

#include <cmath>

#include "rab/bound_result.hpp"
#include "rab/numerics.hpp"
#include "rab/specfun.hpp"

namespace rab {

/**
 * Combinatorial exponent (nats) of the achievability error event with
 * decoded fraction nu and error fraction theta:
 *
 *   gamma = pa mu h(1-nu+theta)
 *         + mu (1 - nu pa + theta pa) h(theta pa / (1 + theta pa - nu pa))
 *         + theta pa mu ln M.
 */
inline double gamma_theta(const SystemParams& p, double nu, double theta) {
    if (!(nu > 1.0 - p.eps && nu <= 1.0))
        detail::domain_fail("gamma_theta", "nu outside (1-eps, 1]");
    if (!(theta > p.eps - 1.0 + nu && theta <= nu))
        detail::domain_fail("gamma_theta", "theta outside (eps-1+nu, nu]");
    const double kap = 1.0 - nu * p.pa + theta * p.pa;
    double arg = theta * p.pa / kap;
    if (arg > 1.0) arg = 1.0;  // guards rounding at theta == nu, pa == 1
    return p.pa * p.mu * h_nats(1.0 - nu + theta) + p.mu * kap * h_nats(arg) +
           theta * p.pa * p.mu * p.ln_M;
}

/**
 * Total active power required to defeat the (theta, psi) error event:
 *
 *   4(e^gamma - 1) / (xi(psi, psi+theta) - 4(e^gamma - 1) xi(psi+theta, psi+theta+1-nu)),
 *
 * +inf exactly when the denominator is nonpositive (no finite power
 * suppresses the event). For gamma beyond the exp range the feasibility
 * comparison and the result are formed in log domain, so +inf is always a
 * statement about the denominator, never float saturation of e^gamma.
 */
inline double p_tot_csir_ach(const SystemParams& p, double nu, double theta, double psi) {
    if (!(psi >= 0.0 && psi <= nu - theta + 1e-15))
        detail::domain_fail("p_tot_csir_ach", "psi outside [0, nu-theta]");
    const double g = gamma_theta(p, nu, theta);
    const double b1 = std::min(1.0, psi + theta);
    const double xi1 = xi(psi, b1);
    const double w = 1.0 - nu;
    const double xi2 = w <= 0.0 ? 0.0 : xi(b1, std::min(1.0, b1 + w));

    if (g <= 700.0) {
        const double E = std::expm1(g);
        const double den = xi1 - 4.0 * E * xi2;
        if (den <= 0.0) return kInf;
        return 4.0 * E / den;
    }
    // ln(e^g - 1) = g + log1p(-e^-g); compare and divide in logs.
    const double lnE = g + std::log1p(-std::exp(-g));
    const double ln4E = std::log(4.0) + lnE;
    if (xi2 > 0.0) {
        const double d = ln4E + std::log(xi2) - std::log(xi1);
        if (d >= 0.0) return kInf;
        const double ln_den = std::log(xi1) + std::log1p(-std::exp(d));
        return std::exp(ln4E - ln_den);
    }
    return std::exp(ln4E - std::log(xi1));
}

/**
 * CSIR achievability: sup over theta in (eps', nu] and psi in [0, nu-theta]
 * of the required power, minimized over the free decoded fraction
 * nu in (1-eps, 1] (each nu yields a valid bound; the minimum is the
 * tightest). The nu axis uses a 4x denser coarse grid than the inner axes.
 */
inline BoundResult eb_csir_ach(const SystemParams& p, const SearchOptions& opts = {}) {
    const double m = opts.open_interval_margin;

    auto sup_psi = [&](double nu, double th) {
        return maximize_1d([&](double ps) { return p_tot_csir_ach(p, nu, th, ps); },
                           0.0, nu - th, opts);
    };
    auto sup_theta = [&](double nu) {
        const double ep = p.eps - 1.0 + nu;
        const double lo_t = ep + m * (nu - ep);
        return maximize_1d([&](double th) { return sup_psi(nu, th).value; }, lo_t, nu, opts);
    };

    SearchOptions nu_opts = opts;
    nu_opts.coarse_grid_points = 4 * opts.coarse_grid_points;
    const double lo_nu = (1.0 - p.eps) + m * p.eps;
    const OptResult best =
        minimize_1d([&](double nu) { return sup_theta(nu).value; }, lo_nu, 1.0, nu_opts);

    BoundResult r;
    r.kind = BoundKind::csir_ach;
    r.diagnostics.grid_points = nu_opts.coarse_grid_points;
    r.diagnostics.refinements = opts.max_refinements;
    if (!(best.value < kInf)) {
        r.eb = EnergyPerBit::infeasible();
        r.diagnostics.notes = "no decoded fraction admits finite power";
        return r;
    }
    const OptResult th = sup_theta(best.arg);
    const OptResult ps = sup_psi(best.arg, th.arg);
    r.eb = EnergyPerBit::from_linear(best.value / p.S);
    r.witnesses.nu = best.arg;
    r.witnesses.theta = th.arg;
    r.witnesses.psi = ps.arg;
    r.witnesses.p_tot = best.value;
    r.diagnostics.notes = "nu minimized over (1-eps; 1]";
    return r;
}

/**
 * Converse power constraint from the mutual-information argument, one
 * constraint per theta in (0,1]:
 *
 *   P >= (2^{pa mu theta k - pa mu eps log2(M-1) - pa mu h2(eps)} - 1) / xi(1-theta, 1).
 *
 * The exponent is assembled in nats and passed through expm1.
 */
inline double p_tot_csir_conv_fano(const SystemParams& p, double theta) {
    if (!(theta > 0.0 && theta <= 1.0))
        detail::domain_fail("p_tot_csir_conv_fano", "theta outside (0,1]");
    const double e_nats =
        p.pa * p.mu * (theta * p.ln_M - p.eps * ln_M_minus_1(p) - h_nats(p.eps));
    return std::expm1(e_nats) / xi(1.0 - theta, 1.0);
}

/**
 * Error probability of a single UE sending k bits with total energy
 * p_tot/(pa mu) over a quasi-static Rayleigh fade g ~ Exp(1):
 *
 *   1 - E[Q(Qinv(1/M) - sqrt(2 p_tot/(pa mu) g))] = E[Q(sqrt(2 p_tot/(pa mu) g) - Qinv(1/M))],
 *
 * the mirrored form being free of 1-Q cancellation. Qinv(1/M) comes from the
 * log-domain inverse at ln p = -ln M. Strictly decreasing in p_tot.
 */
inline double pupe_single_ue(const SystemParams& p, double p_tot,
                             const QuadratureSpec& quad = {}) {
    if (!(p_tot >= 0.0)) detail::domain_fail("pupe_single_ue", "power must be nonnegative");
    const double a = q_inv_ln(-p.ln_M);
    const double beta = p_tot / (p.pa * p.mu);
    return expect_exponential(
        [&](double g) { return q_func(std::sqrt(2.0 * beta * g) - a); }, quad);
}

/**
 * CSIR converse: the required power is the max of the mutual-information
 * constraint (sup over theta) and the single-UE outage constraint (power at
 * which the single-UE error probability equals eps).
 */
inline BoundResult eb_csir_conv(const SystemParams& p, const SearchOptions& opts = {},
                                const QuadratureSpec& quad = {}) {
    const double lo_t = opts.open_interval_margin;
    const OptResult fano =
        maximize_1d([&](double th) { return p_tot_csir_conv_fano(p, th); }, lo_t, 1.0, opts);
    const BisectResult single = bisect_monotone(
        [&](double P) { return pupe_single_ue(p, P, quad); }, p.eps, 1e-6, 1e6, 1e-12);

    BoundResult r;
    r.kind = BoundKind::csir_conv;
    const double P = std::max(fano.value, single.root);
    r.eb = EnergyPerBit::from_linear(P / p.S);
    r.witnesses.theta = fano.arg;
    r.witnesses.p_tot = P;
    r.diagnostics.active_constraint = fano.value >= single.root ? "fano" : "single-ue";
    r.diagnostics.residual = single.residual;
    r.diagnostics.grid_points = opts.coarse_grid_points;
    r.diagnostics.refinements = opts.max_refinements;
    if (single.monotone_warning) r.diagnostics.notes = "single-ue monotonicity warning";
    return r;
}

}  // namespace rab
