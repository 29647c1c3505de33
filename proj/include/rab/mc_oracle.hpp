// Monte Carlo validation of the probabilistic ingredients the bounds rest
// on, at finite blocklength and user counts: sorted-fading partial sums
// against xi, the beta law of projections onto random subspaces, the
// complex-Gaussian quadratic-form MGF identity, and the chi-square
// concentration bounds.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "rab/specfun.hpp"

namespace rab::mc {

struct McConfig {
    std::uint64_t seed = 1;
    long trials = 1000;
    int n = 200;    ///< blocklength for finite-size law checks
    int k_a = 20;   ///< active users
    int t = 5;      ///< error-set size for projection-law checks

    void validate() const {
        if (trials < 1) detail::domain_fail("McConfig", "trials must be >= 1");
        if (t < 1) detail::domain_fail("McConfig", "t must be >= 1");
        if (k_a < t) detail::domain_fail("McConfig", "k_a must be >= t");
        if (n <= k_a) detail::domain_fail("McConfig", "n must exceed k_a");
    }
};

struct McReport {
    double estimate = 0.0;
    double std_error = 0.0;
    double reference = 0.0;
    double z_score = 0.0;
    bool pass = false;
    std::optional<double> ks_stat;
};

namespace detail_rng {
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}
}  // namespace detail_rng

/// Per-trial generator keyed by (seed, trial index): trials are
/// order-independent and parallel-safe, and every sampler below is written
/// out explicitly so results are bit-identical across platforms.
class TrialRng {
public:
    TrialRng(std::uint64_t seed, std::uint64_t trial)
        : eng_(detail_rng::splitmix64(seed ^ detail_rng::splitmix64(trial + 0x51ED270B))) {}

    /// Uniform on (0,1].
    double uniform() { return static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53; }

    double exponential() { return -std::log(uniform()); }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    /// Circularly symmetric complex Gaussian, unit variance (1/2 per part).
    std::complex<double> cnormal() {
        const double s = std::sqrt(0.5);
        const double re = normal();
        const double im = normal();
        return {s * re, s * im};
    }

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

namespace detail_beta {
/// Regularized incomplete beta I_x(a,b) by the standard continued fraction.
inline double betacf(double a, double b, double x) {
    const double eps = 3e-16, fpmin = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0, d = 1.0 - qab * x / qap;
    if (std::fabs(d) < fpmin) d = fpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 400; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) break;
    }
    return h;
}

inline double ibeta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double lnfront = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(lnfront);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}
}  // namespace detail_beta

namespace detail_ks {
/// Two-sided KS distance of a sorted sample against a CDF.
template <class Cdf>
double ks_statistic(const std::vector<double>& sorted, Cdf&& cdf) {
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double F = cdf(sorted[i]);
        d = std::max(d, std::max(F - static_cast<double>(i) / n,
                                 static_cast<double>(i + 1) / n - F));
    }
    return d;
}
}  // namespace detail_ks

/**
 * Averages the normalized sorted-fading partial sum
 * (1/k_a) sum_{j=ceil(a k_a)+1}^{ceil(b k_a)} |h|^2_(j) (descending order)
 * over trials and compares with xi(a,b). Pass iff |z| <= 3.
 */
inline McReport sorted_fading_partial_sum(const McConfig& cfg, double a, double b) {
    cfg.validate();
    if (!(a >= 0.0 && a < b && b <= 1.0))
        detail::domain_fail("sorted_fading_partial_sum", "need 0 <= a < b <= 1");
    const int ka = cfg.k_a;
    const long lo = static_cast<long>(std::ceil(a * ka)) + 1;  // 1-based
    const long hi = static_cast<long>(std::ceil(b * ka));
    std::vector<double> fades(ka);
    double sum = 0.0, sumsq = 0.0;
    for (long trial = 0; trial < cfg.trials; ++trial) {
        TrialRng rng(cfg.seed, static_cast<std::uint64_t>(trial));
        for (auto& f : fades) f = rng.exponential();
        std::sort(fades.begin(), fades.end(), std::greater<>());
        double s = 0.0;
        for (long j = lo; j <= hi && j <= ka; ++j) s += fades[j - 1];
        s /= ka;
        sum += s;
        sumsq += s * s;
    }
    McReport r;
    const double N = static_cast<double>(cfg.trials);
    r.estimate = sum / N;
    const double var = N > 1 ? std::max(0.0, (sumsq - N * r.estimate * r.estimate) / (N - 1)) : 0.0;
    r.std_error = std::sqrt(var / N);
    r.reference = xi(a, b);
    r.z_score = r.std_error > 0 ? (r.estimate - r.reference) / r.std_error : 0.0;
    r.pass = std::fabs(r.z_score) <= 3.0;
    return r;
}

namespace detail_proj {
/// Squared-projection fraction of a Gaussian vector onto a uniformly random
/// t-dimensional subspace of an m-dimensional complex space.
inline double projection_fraction(TrialRng& rng, int m, int t) {
    using cd = std::complex<double>;
    std::vector<cd> v(m);
    for (auto& x : v) x = rng.cnormal();
    double v2 = 0.0;
    for (const auto& x : v) v2 += std::norm(x);

    std::vector<std::vector<cd>> q(t, std::vector<cd>(m));
    for (int j = 0; j < t; ++j) {
        auto& col = q[j];
        for (auto& x : col) x = rng.cnormal();
        for (int rep = 0; rep < 2; ++rep) {  // MGS with one re-orthogonalization
            for (int i = 0; i < j; ++i) {
                cd dot = 0.0;
                for (int l = 0; l < m; ++l) dot += std::conj(q[i][l]) * col[l];
                for (int l = 0; l < m; ++l) col[l] -= dot * q[i][l];
            }
        }
        double nrm = 0.0;
        for (const auto& x : col) nrm += std::norm(x);
        nrm = std::sqrt(nrm);
        for (auto& x : col) x /= nrm;
    }
    double proj = 0.0;
    for (int j = 0; j < t; ++j) {
        cd dot = 0.0;
        for (int l = 0; l < m; ++l) dot += std::conj(q[j][l]) * v[l];
        proj += std::norm(dot);
    }
    return proj / v2;
}
}  // namespace detail_proj

/**
 * Projection-law check: the squared-projection fraction in an
 * (n-k_a+t)-dimensional complex space follows Beta(t, n-k_a). Pass iff the
 * KS distance stays below the asymptotic 1% critical value 1.63/sqrt(trials).
 */
inline McReport beta_projection_law(const McConfig& cfg) {
    cfg.validate();
    const int m = cfg.n - cfg.k_a + cfg.t;
    std::vector<double> fr(cfg.trials);
    for (long trial = 0; trial < cfg.trials; ++trial) {
        TrialRng rng(cfg.seed, static_cast<std::uint64_t>(trial));
        fr[trial] = detail_proj::projection_fraction(rng, m, cfg.t);
    }
    double mean = 0.0;
    for (double f : fr) mean += f;
    mean /= static_cast<double>(cfg.trials);
    double var = 0.0;
    for (double f : fr) var += (f - mean) * (f - mean);
    var = cfg.trials > 1 ? var / (cfg.trials - 1) : 0.0;

    std::sort(fr.begin(), fr.end());
    const double aa = cfg.t, bb = cfg.n - cfg.k_a;
    const double ks = detail_ks::ks_statistic(
        fr, [&](double x) { return detail_beta::ibeta(aa, bb, x); });

    McReport r;
    r.estimate = mean;
    r.std_error = std::sqrt(var / static_cast<double>(cfg.trials));
    r.reference = aa / (aa + bb);  // Beta mean
    r.z_score = r.std_error > 0 ? (r.estimate - r.reference) / r.std_error : 0.0;
    r.ks_stat = ks;
    r.pass = ks <= 1.63 / std::sqrt(static_cast<double>(cfg.trials));
    return r;
}

/**
 * Checks E[exp(-gamma ||b a + u||^2)] = phi^-n exp(-gamma ||u||^2 / phi),
 * phi = 1 + gamma |b|^2, for a standard complex Gaussian n-vector a and a
 * fixed u. Pass iff |z| <= 3.
 */
inline McReport mgf_identity_check(const McConfig& cfg, double gamma, double b_mod,
                                   double u_norm_sq) {
    cfg.validate();
    if (cfg.n > 16) detail::domain_fail("mgf_identity_check", "n must be <= 16");
    if (b_mod != 0.0 && !(gamma > -1.0 / (b_mod * b_mod)))
        detail::domain_fail("mgf_identity_check", "gamma at or below -1/|b|^2 (divergent)");
    if (!(u_norm_sq >= 0.0)) detail::domain_fail("mgf_identity_check", "negative norm");

    const double u1 = std::sqrt(u_norm_sq);  // u = |u| e_1 by rotation invariance
    double sum = 0.0, sumsq = 0.0;
    for (long trial = 0; trial < cfg.trials; ++trial) {
        TrialRng rng(cfg.seed, static_cast<std::uint64_t>(trial));
        double nrm2 = 0.0;
        for (int i = 0; i < cfg.n; ++i) {
            std::complex<double> z = rng.cnormal() * b_mod;
            if (i == 0) z += u1;
            nrm2 += std::norm(z);
        }
        const double v = std::exp(-gamma * nrm2);
        sum += v;
        sumsq += v * v;
    }
    McReport r;
    const double N = static_cast<double>(cfg.trials);
    r.estimate = sum / N;
    const double var = N > 1 ? std::max(0.0, (sumsq - N * r.estimate * r.estimate) / (N - 1)) : 0.0;
    r.std_error = std::sqrt(var / N);
    const double phi = 1.0 + gamma * b_mod * b_mod;
    r.reference = std::pow(phi, -cfg.n) * std::exp(-gamma * u_norm_sq / phi);
    if (r.std_error > 0) {
        r.z_score = (r.estimate - r.reference) / r.std_error;
        r.pass = std::fabs(r.z_score) <= 3.0;
    } else {
        r.z_score = 0.0;
        r.pass = std::fabs(r.estimate - r.reference) <= 1e-12 * (1.0 + std::fabs(r.reference));
    }
    return r;
}

enum class Chi2TailKind { central_lower, noncentral_upper };

/**
 * One-sided concentration checks, with 3-sigma slack:
 *   central-lower:     P[chi2(d) <= d/x]   <= exp(-(d/2)(ln x + 1/x - 1)),  x > 1;
 *   noncentral-upper:  P[chi2'(a,d) >= x+a+d]
 *                      <= exp(-(x+d+2a - sqrt(d+2a) sqrt(2x+d+2a))/2),      x > 0.
 */
inline McReport chi2_tail_check(const McConfig& cfg, Chi2TailKind kind, int dof,
                                double noncentrality, double x) {
    cfg.validate();
    if (dof < 1) detail::domain_fail("chi2_tail_check", "dof must be >= 1");
    if (!(noncentrality >= 0.0)) detail::domain_fail("chi2_tail_check", "negative noncentrality");
    double bound, threshold;
    bool lower;
    if (kind == Chi2TailKind::central_lower) {
        if (!(x > 1.0)) detail::domain_fail("chi2_tail_check", "central-lower needs x > 1");
        bound = std::exp(-0.5 * dof * (std::log(x) + 1.0 / x - 1.0));
        threshold = dof / x;
        lower = true;
    } else {
        if (!(x > 0.0)) detail::domain_fail("chi2_tail_check", "noncentral-upper needs x > 0");
        const double a = noncentrality;
        bound = std::exp(-0.5 * (x + dof + 2.0 * a -
                                 std::sqrt(dof + 2.0 * a) * std::sqrt(2.0 * x + dof + 2.0 * a)));
        threshold = x + a + dof;
        lower = false;
    }

    long hits = 0;
    const double shift = std::sqrt(noncentrality);
    for (long trial = 0; trial < cfg.trials; ++trial) {
        TrialRng rng(cfg.seed, static_cast<std::uint64_t>(trial));
        double chi = 0.0;
        for (int i = 0; i < dof; ++i) {
            double z = rng.normal();
            if (i == 0 && kind == Chi2TailKind::noncentral_upper) z += shift;
            chi += z * z;
        }
        if (lower ? chi <= threshold : chi >= threshold) ++hits;
    }
    McReport r;
    const double N = static_cast<double>(cfg.trials);
    r.estimate = hits / N;
    r.std_error = std::sqrt(std::max(r.estimate * (1.0 - r.estimate), 1e-300) / N);
    r.reference = bound;
    r.z_score = (r.estimate - bound) / r.std_error;
    r.pass = r.estimate <= bound + 3.0 * r.std_error;
    return r;
}

}  // namespace rab::mc
