// TDMA baseline: each UE gets a slot of 1/mu channel uses and must deliver
// k bits alone at outage probability eps over a unit-exponential fade.
#pragma once

#include <cmath>

#include "rab/bound_result.hpp"
#include "rab/specfun.hpp"

namespace rab {

struct TdmaPoint {
    double slot_len;   ///< 1/mu channel uses per UE (real-valued)
    double rate;       ///< mu*k bits per channel use within the slot
    double p_star;     ///< smallest slot power meeting the outage target
    EnergyPerBit eb;   ///< p_star / (mu k)
};

/**
 * Zero-dispersion quasi-static outage solution of
 * P[log2(1 + P g) < mu k] = eps with g ~ Exp(1):
 *
 *   P* = (2^{mu k} - 1) / (-ln(1-eps)),   eb = P* / (mu k).
 *
 * Quasi-static fading has zero channel dispersion, so the finite-blocklength
 * correction at slot length 1/mu is O(mu log(1/mu)); the approximation is
 * recorded in the result notes. For mu k beyond the exp range the result is
 * reported in log domain (finite dB, linear overflows).
 */
inline TdmaPoint tdma_point(const SystemParams& p) {
    const double muk = p.mu * p.k;
    const double ln_outage = std::log(-std::log1p(-p.eps));
    TdmaPoint t;
    t.slot_len = 1.0 / p.mu;
    t.rate = muk;
    if (muk * kLn2 <= 700.0) {
        t.p_star = std::expm1(muk * kLn2) / (-std::log1p(-p.eps));
        t.eb = EnergyPerBit::from_linear(t.p_star / muk);
    } else {
        const double ln_p_star = muk * kLn2 + std::log1p(-std::exp(-muk * kLn2)) - ln_outage;
        t.p_star = std::exp(ln_p_star);  // may overflow; dB below stays finite
        t.eb = EnergyPerBit::from_ln(ln_p_star - std::log(muk));
    }
    return t;
}

inline BoundResult tdma_eb(const SystemParams& p) {
    const TdmaPoint t = tdma_point(p);
    BoundResult r;
    r.kind = BoundKind::tdma;
    r.eb = t.eb;
    r.witnesses.p_tot = t.p_star;
    r.diagnostics.notes = "zero-dispersion outage approximation; p_tot is slot power";
    if (!std::isfinite(r.eb.db)) {
        r.eb = EnergyPerBit::infeasible();
        r.diagnostics.notes = "out of representable range";
    }
    return r;
}

}  // namespace rab
