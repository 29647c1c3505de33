// Shared special functions and numerically stable primitives used by
// every bound: binary entropy, Gaussian tail and its inverse, the
// sorted-fading partial-sum integral xi, and the log-determinant
// capacity functional of Gaussian random matrices.
#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rab {

inline constexpr double kLn2 = 0.69314718055994530942;
inline constexpr double kLn2Pi = 1.8378770664093454836;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

namespace detail {
[[noreturn]] inline void domain_fail(const char* fn, const std::string& what) {
    throw std::domain_error(std::string(fn) + ": " + what);
}
}  // namespace detail

/**
 * Problem instance in the linear-scaling regime.
 *
 * The codebook size M = 2^k is never materialized; only ln_M is stored so
 * payloads up to k = 1024 are handled without overflow. All entropy-like
 * quantities derived from these parameters are kept in nats internally;
 * bit-domain values appear only at reporting boundaries.
 */
struct SystemParams {
    int k;          ///< payload size in bits
    double ln_M;    ///< k * ln 2, nats
    double mu;      ///< UE density K/n, in (0,1)
    double pa;      ///< per-UE activity probability, in (0,1]
    double eps;     ///< target per-user error probability
    double S;       ///< spectral efficiency pa*mu*k, bits per channel use

    static SystemParams make(int k, double mu, double pa, double eps) {
        if (k < 1) detail::domain_fail("SystemParams", "k must be >= 1");
        if (!(mu > 0.0 && mu < 1.0)) detail::domain_fail("SystemParams", "mu must be in (0,1)");
        if (!(pa > 0.0 && pa <= 1.0)) detail::domain_fail("SystemParams", "pa must be in (0,1]");
        const double eps_max = -std::expm1(-k * kLn2);  // 1 - 2^-k
        if (!(eps > 0.0 && eps < eps_max))
            detail::domain_fail("SystemParams", "eps must be in (0, 1-2^-k)");
        SystemParams p;
        p.k = k;
        p.ln_M = k * kLn2;
        p.mu = mu;
        p.pa = pa;
        p.eps = eps;
        p.S = pa * mu * k;
        return p;
    }

    /// Same activity density pa*mu, but activity known: pa -> 1, mu -> pa*mu.
    /// Preserves S exactly.
    [[nodiscard]] SystemParams known_activity() const {
        return make(k, pa * mu, 1.0, eps);
    }

    [[nodiscard]] double pa_mu() const { return pa * mu; }
};

/// Energy-per-bit with a distinct infeasible state. `db` stays finite even
/// when `linear` overflows the double range (log-domain construction).
struct EnergyPerBit {
    double linear = std::numeric_limits<double>::quiet_NaN();
    double db = std::numeric_limits<double>::quiet_NaN();
    bool feasible = false;

    static EnergyPerBit infeasible() { return {}; }
    static EnergyPerBit from_linear(double x) {
        if (!(x > 0.0)) detail::domain_fail("EnergyPerBit", "energy must be positive");
        EnergyPerBit e;
        e.linear = x;
        e.db = 10.0 * std::log10(x);
        e.feasible = true;
        return e;
    }
    static EnergyPerBit from_ln(double ln_x) {
        EnergyPerBit e;
        e.linear = std::exp(ln_x);  // may round to +inf; db stays exact
        e.db = 10.0 / std::log(10.0) * ln_x;
        e.feasible = true;
        return e;
    }
};

/**
 * Binary entropy in nats, -p ln p - (1-p) ln(1-p), with 0 ln 0 = 0.
 *
 * Evaluated on the canonically ordered pair (min(p,1-p), max(p,1-p)) so the
 * symmetry h(p) = h(1-p) holds bit-exactly whenever both p and 1-p are
 * representable.
 */
[[nodiscard]] inline double h_nats(double p) {
    if (!(p >= 0.0 && p <= 1.0)) detail::domain_fail("h_nats", "p outside [0,1]");
    const double q = 1.0 - p;
    const double a = p < q ? p : q;
    const double b = p < q ? q : p;
    double s = 0.0;
    if (a > 0.0) s -= a * std::log(a);
    if (b > 0.0) s -= b * std::log(b);
    return s;
}

/// Binary entropy in bits.
[[nodiscard]] inline double h_bits(double p) { return h_nats(p) / kLn2; }

/// Gaussian tail probability Q(x) via the complementary error function.
[[nodiscard]] inline double q_func(double x) {
    return 0.5 * std::erfc(x / std::sqrt(2.0));
}

/**
 * ln Q(x), accurate over the whole real line.
 *
 * Three regimes: log1p of the mirrored tail for x <= -1 (Q near 1), a direct
 * log of the erfc route for moderate x, and the asymptotic expansion
 * Q(x) ~ phi(x)/x (1 - 1/x^2 + 3/x^4 - ...) beyond x = 30, where erfc itself
 * would approach the subnormal range.
 */
[[nodiscard]] inline double ln_q_func(double x) {
    if (x <= -1.0) return std::log1p(-q_func(-x));
    if (x < 30.0) return std::log(q_func(x));
    const double x2 = x * x;
    double sum = 1.0, term = 1.0;
    for (int j = 1; j <= 11; ++j) {
        term *= -(2.0 * j - 1.0) / x2;
        sum += term;
    }
    return -0.5 * x2 - 0.5 * kLn2Pi - std::log(x) + std::log(sum);
}

/**
 * Inverse Gaussian tail from a log-domain probability: x with ln Q(x) = ln_p.
 *
 * Safeguarded Newton on ln Q with a maintained bracket; the log-domain
 * formulation keeps full relative accuracy for tail probabilities down to
 * 2^-1024 and below, where the linear-domain p underflows.
 */
[[nodiscard]] inline double q_inv_ln(double ln_p) {
    if (!(ln_p < 0.0)) detail::domain_fail("q_inv_ln", "ln p must be negative");
    if (ln_p > -kLn2)  // p > 1/2: mirror into the right tail
        return -q_inv_ln(std::log1p(-std::exp(ln_p)));
    if (ln_p == -kLn2) return 0.0;

    // Asymptotic seed: x^2 + 2 ln x = -2 ln p - ln(2 pi).
    const double u = -2.0 * ln_p;
    double x = std::sqrt(u);
    for (int j = 0; j < 3; ++j) {
        const double arg = u - kLn2Pi - 2.0 * std::log(x);
        x = arg > 1e-12 ? std::sqrt(arg) : 1e-6;
    }
    double lo = 0.0, hi = std::sqrt(u) + 2.0;  // ln Q decreasing: g(lo)>=0>=g(hi)
    for (int it = 0; it < 100; ++it) {
        const double lq = ln_q_func(x);
        const double g = lq - ln_p;
        if (g > 0.0) lo = x; else hi = x;
        const double dg = -std::exp(-0.5 * x * x - 0.5 * kLn2Pi - lq);  // d/dx ln Q
        double xn = x - g / dg;
        if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
        const double step = std::fabs(xn - x);
        x = xn;
        if (step <= 1e-15 * (1.0 + std::fabs(x))) break;
    }
    return x;
}

/// Inverse Gaussian tail: x with Q(x) = p, p in (0,1).
[[nodiscard]] inline double q_inv(double p) {
    if (!(p > 0.0 && p < 1.0)) detail::domain_fail("q_inv", "p outside (0,1)");
    if (p == 0.5) return 0.0;
    if (p < 0.5) return q_inv_ln(std::log(p));
    return -q_inv_ln(std::log1p(-p));
}

/**
 * xi(a,b) = a ln a - b ln b + b - a = integral of -ln x over [a,b],
 * for 0 <= a <= b <= 1, with the 0 ln 0 = 0 convention.
 *
 * This is the limiting normalized partial sum of unit-exponential order
 * statistics between quantile fractions a and b; additive over adjacent
 * intervals.
 */
[[nodiscard]] inline double xi(double a, double b) {
    if (!(a >= 0.0 && b <= 1.0 && a <= b)) detail::domain_fail("xi", "need 0 <= a <= b <= 1");
    double s = b - a;
    if (a > 0.0) s += a * std::log(a);
    if (b > 0.0) s -= b * std::log(b);
    return s;
}

namespace detail {
/// Shared pieces of the capacity functional at aspect ratio r, SNR g.
struct VerduParts {
    double S2;   ///< (A+B)^2
    double AB;   ///< A*B
    double F;    ///< 4 g^2 r / S2
    double gmF;  ///< g - F, cancellation-free
    double rgmF; ///< r g - F, cancellation-free
};

inline VerduParts verdu_parts(double r, double g) {
    const double sr = std::sqrt(r);
    const double A = std::sqrt(g * (sr + 1.0) * (sr + 1.0) + 1.0);
    const double B = std::sqrt(g * (sr - 1.0) * (sr - 1.0) + 1.0);
    VerduParts p;
    p.S2 = (A + B) * (A + B);
    p.AB = A * B;
    p.F = 4.0 * g * g * r / p.S2;
    // g - F = 2g(u' + AB)/S2 with u' = g(1-r)+1; when u' < 0 use
    // u' + AB = 4gr/(AB - u') (difference of the squares is 4gr).
    const double up = g * (1.0 - r) + 1.0;
    const double upAB = up >= 0.0 ? up + p.AB : 4.0 * g * r / (p.AB - up);
    p.gmF = 2.0 * g * upAB / p.S2;
    // r g - F = 2gr(u + AB)/S2 with u = g(r-1)+1; squares differ by 4g.
    const double u = g * (r - 1.0) + 1.0;
    const double uAB = u >= 0.0 ? u + p.AB : 4.0 * g / (p.AB - u);
    p.rgmF = 2.0 * g * r * uAB / p.S2;
    return p;
}
}  // namespace detail

/**
 * F(r,g) = (1/4)(sqrt(g(sqrt r + 1)^2 + 1) - sqrt(g(sqrt r - 1)^2 + 1))^2.
 *
 * Always evaluated through the conjugate identity A - B = 4 g sqrt(r)/(A+B),
 * i.e. F = 4 g^2 r/(A+B)^2, which is exact for aspect ratios down to the
 * subnormal range where the direct difference is pure cancellation.
 */
[[nodiscard]] inline double verdu_f(double r, double g) {
    if (!(r > 0.0)) detail::domain_fail("verdu_f", "aspect ratio must be positive");
    if (!(g >= 0.0)) detail::domain_fail("verdu_f", "snr must be nonnegative");
    if (g == 0.0) return 0.0;
    return detail::verdu_parts(r, g).F;
}

/**
 * V(r,g) = r ln(1+g-F) + ln(1+rg-F) - F/g, the asymptotic normalized
 * log-determinant of I + g/r * (1/n) X X^H for an n x rn Gaussian X.
 * V(r,0) = 0 (analytic limit). Monotone nondecreasing in g.
 */
[[nodiscard]] inline double verdu_v(double r, double g) {
    if (!(r > 0.0)) detail::domain_fail("verdu_v", "aspect ratio must be positive");
    if (!(g >= 0.0)) detail::domain_fail("verdu_v", "snr must be nonnegative");
    if (g == 0.0) return 0.0;
    const auto p = detail::verdu_parts(r, g);
    return r * std::log1p(p.gmF) + std::log1p(p.rgmF) - 4.0 * g * r / p.S2;
}

/**
 * M * V(1/(c M), g) evaluated without materializing M = exp(ln_M) or losing
 * the O(1/M) structure: every term of V is O(r) at r = 1/(cM), so the product
 * is expanded analytically,
 *
 *   M V = (1/c) log1p(g-F) + D1 + M (log1p(x) - x),   x = rg - F,
 *
 * with D1 = (2g/(c S2))((u+AB) - 2) and (u+AB) - 2 = 4gr/(AB + 1 + g - gr)
 * cancellation-free. Tends to ln(1+g)/c as ln_M grows.
 */
[[nodiscard]] inline double scaled_verdu_v(double ln_M, double c, double g) {
    if (!(c > 0.0)) detail::domain_fail("scaled_verdu_v", "density must be positive");
    if (!(g >= 0.0)) detail::domain_fail("scaled_verdu_v", "snr must be nonnegative");
    if (g == 0.0) return 0.0;
    const double r = std::exp(-(ln_M + std::log(c)));
    const auto p = detail::verdu_parts(r, g);
    const double t1 = std::log1p(p.gmF) / c;
    const double w = 1.0 + g - g * r;
    const double upAB2 = w >= 0.0 ? 4.0 * g * r / (p.AB + w) : p.AB - w;  // (u+AB)-2
    const double d1 = (2.0 * g / p.S2) * upAB2 / c;
    // M(log1p(x)-x) = (r/c) (2g(u+AB)/S2)^2 psi(x), psi = (log1p(x)-x)/x^2.
    const double u = g * (r - 1.0) + 1.0;
    const double uAB = u >= 0.0 ? u + p.AB : 4.0 * g / (p.AB - u);
    const double mx = 2.0 * g * uAB / p.S2;  // x/r at full precision
    const double x = r * mx;
    double psi;
    if (std::fabs(x) < 1e-4) {
        psi = -0.5 + x / 3.0 - x * x / 4.0 + x * x * x / 5.0;
    } else {
        psi = (std::log1p(x) - x) / (x * x);
    }
    const double t2 = (r / c) * mx * mx * psi;
    return t1 + d1 + t2;
}

/// ln(M - 1) = ln_M + log1p(-exp(-ln_M)), valid for any payload size k >= 1.
[[nodiscard]] inline double ln_M_minus_1(const SystemParams& p) {
    if (p.k < 1) detail::domain_fail("ln_M_minus_1", "k must be >= 1");
    return p.ln_M + std::log1p(-std::exp(-p.ln_M));
}

}  // namespace rab
