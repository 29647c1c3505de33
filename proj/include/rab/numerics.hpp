// Deterministic 1-D optimization, monotone root finding, and adaptive
// quadrature against the unit-exponential weight. These engines realize the
// sup/inf over continuous parameter intervals and the fading expectation
// that the bound modules delegate to.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <vector>

#include "rab/specfun.hpp"

namespace rab {

struct SearchOptions {
    int coarse_grid_points = 16;        ///< grid points per axis, >= 16
    double refine_tolerance = 1e-9;     ///< relative tolerance on the objective
    int max_refinements = 60;           ///< golden-section iterations
    double open_interval_margin = 1e-9; ///< fractional inset at open endpoints
};

struct QuadratureSpec {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    double tail_cut = 45.0;   ///< discarded weight mass e^-tail_cut < 3e-20
    int max_subdivisions = 2000;
};

struct OptResult {
    double arg;
    double value;  ///< +inf / -inf propagate honestly
};

class bracket_error : public std::runtime_error {
public:
    bracket_error(const std::string& what, double lo, double hi)
        : std::runtime_error(what), lo(lo), hi(hi) {}
    double lo, hi;
};

class quadrature_error : public std::runtime_error {
public:
    quadrature_error(const std::string& what, double estimate, double achieved)
        : std::runtime_error(what), estimate(estimate), achieved_tolerance(achieved) {}
    double estimate;
    double achieved_tolerance;
};

namespace detail {
inline double grid_point(double lo, double hi, int i, int n) {
    if (i == n - 1) return hi;
    return lo + i * ((hi - lo) / (n - 1));
}
}  // namespace detail

/**
 * Coarse grid scan followed by golden-section refinement around the best
 * cell. The best point ever evaluated is returned, so densifying the grid
 * can only improve the result. A +inf objective value is an honest
 * "supremum is infinite" and short-circuits the scan.
 */
template <class F>
OptResult maximize_1d(F&& f, double lo, double hi, const SearchOptions& opts = {}) {
    if (!(lo <= hi)) detail::domain_fail("maximize_1d", "empty interval");
    if (lo == hi) return {lo, f(lo)};
    const int n = opts.coarse_grid_points < 2 ? 2 : opts.coarse_grid_points;

    double best_x = lo, best_f = -kInf;
    std::vector<double> fs(n);
    int ibest = 0;
    for (int i = 0; i < n; ++i) {
        const double x = detail::grid_point(lo, hi, i, n);
        const double v = f(x);
        fs[i] = v;
        if (v > best_f) { best_f = v; best_x = x; ibest = i; }
        if (v == kInf) return {x, v};
    }

    double a = detail::grid_point(lo, hi, ibest > 0 ? ibest - 1 : 0, n);
    double b = detail::grid_point(lo, hi, ibest < n - 1 ? ibest + 1 : n - 1, n);
    static const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    if (fc > best_f) { best_f = fc; best_x = c; }
    if (fd > best_f) { best_f = fd; best_x = d; }
    for (int it = 0; it < opts.max_refinements; ++it) {
        if (fc < fd) {
            a = c; c = d; fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
            if (fd > best_f) { best_f = fd; best_x = d; }
        } else {
            b = d; d = c; fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
            if (fc > best_f) { best_f = fc; best_x = c; }
        }
    }
    return {best_x, best_f};
}

/// Mirror of maximize_1d; +inf objective values mean "infeasible" and are
/// avoided whenever any finite value exists. All-infeasible yields +inf.
template <class F>
OptResult minimize_1d(F&& f, double lo, double hi, const SearchOptions& opts = {}) {
    auto r = maximize_1d([&f](double x) { return -f(x); }, lo, hi, opts);
    return {r.arg, -r.value};
}

struct BisectResult {
    double root;
    double residual;            ///< f(root) - target
    bool monotone_warning = false;
};

/**
 * Solve f(x) = target for monotone f. Direction is auto-detected from the
 * endpoints; a bracket that misses the target is geometrically expanded
 * (up to 2^60 growth) before failing. Non-monotone behavior sampled along
 * the bracket raises a warning on the result rather than an error.
 */
template <class F>
BisectResult bisect_monotone(F&& f, double target, double lo, double hi, double tol = 1e-12) {
    if (!(lo < hi)) detail::domain_fail("bisect_monotone", "empty interval");
    double flo = f(lo), fhi = f(hi);
    auto bracketed = [&] {
        return (flo - target) * (fhi - target) <= 0.0;
    };
    for (int it = 0; it < 60 && !bracketed(); ++it) {
        const double w = hi - lo;
        const bool inc = fhi >= flo;
        const bool need_hi = inc ? (target > fhi) : (target < fhi);
        if (need_hi) {
            hi += w;
            fhi = f(hi);
        } else {
            lo = lo > 0.0 && lo - w < 0.0 ? lo * 0.25 : lo - w;
            flo = f(lo);
        }
    }
    if (!bracketed())
        throw bracket_error("bisect_monotone: no sign change after expansion", lo, hi);

    BisectResult res{};
    // Sampled monotonicity check across the bracket.
    const bool inc = fhi >= flo;
    double prev = flo;
    for (int i = 1; i <= 8; ++i) {
        const double x = lo + i * (hi - lo) / 9.0;
        const double v = f(x);
        const double slack = 1e-12 * (std::fabs(prev) + std::fabs(v)) + 1e-300;
        if ((inc && v < prev - slack) || (!inc && v > prev + slack)) res.monotone_warning = true;
        prev = v;
    }
    const double slack_end = 1e-12 * (std::fabs(prev) + std::fabs(fhi)) + 1e-300;
    if ((inc && fhi < prev - slack_end) || (!inc && fhi > prev + slack_end))
        res.monotone_warning = true;

    double mid = 0.5 * (lo + hi), fm = 0.0;
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        fm = f(mid);
        if (std::fabs(fm - target) <= tol * (1.0 + std::fabs(target)) ||
            (hi - lo) <= 1e-14 * (std::fabs(lo) + std::fabs(hi)))
            break;
        if ((fm < target) == inc) lo = mid; else hi = mid;
    }
    res.root = mid;
    res.residual = fm - target;
    return res;
}

namespace detail {
// Gauss-Kronrod 7-15 nodes/weights on [-1,1] (Kronrod abscissae, Kronrod
// weights, embedded 7-point Gauss weights at the odd-index abscissae).
inline constexpr double kGK_x[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kGK_wk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kGK_wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
void gk15(F&& w, double a, double b, double& integral, double& err) {
    const double h = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double resk = 0.0, resg = 0.0;
    for (int j = 0; j < 8; ++j) {
        const double dx = h * kGK_x[j];
        double fv;
        if (j == 7) {
            fv = w(mid);
            resk += kGK_wk[7] * fv;
            resg += kGK_wg[3] * fv;
        } else {
            const double f1 = w(mid - dx);
            const double f2 = w(mid + dx);
            resk += kGK_wk[j] * (f1 + f2);
            if (j % 2 == 1) resg += kGK_wg[j / 2] * (f1 + f2);
        }
    }
    integral = resk * h;
    err = std::fabs((resk - resg) * h);
}
}  // namespace detail

/**
 * E[f(G)] for G ~ Exp(1), truncated at tail_cut: adaptive Gauss-Kronrod
 * subdivision of the integral of e^-g f(g) over [0, tail_cut]. The seed
 * partition is log-spaced toward 0 so boundary layers at small g (outage
 * knees) are resolved before the error estimate is trusted. The discarded
 * tail carries weight mass e^-tail_cut (< 3e-20 at the default cut); for
 * bounded f this is far below abs_tol.
 */
template <class F>
double expect_exponential(F&& f, const QuadratureSpec& spec = {}) {
    auto w = [&f](double g) { return std::exp(-g) * f(g); };

    struct Interval {
        double err, a, b, val;
        bool operator<(const Interval& o) const {
            if (err != o.err) return err > o.err;  // largest error first
            return a < o.a;
        }
    };

    std::vector<double> cuts{0.0};
    for (int e = -8; e <= 1; ++e) {
        const double c = std::pow(10.0, e);
        if (c < spec.tail_cut) cuts.push_back(c);
    }
    cuts.push_back(spec.tail_cut);

    std::set<Interval> work;
    double total = 0.0, total_err = 0.0;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        double v, e;
        detail::gk15(w, cuts[i], cuts[i + 1], v, e);
        work.insert({e, cuts[i], cuts[i + 1], v});
        total += v;
        total_err += e;
    }

    int splits = 0;
    while (total_err > std::max(spec.abs_tol, spec.rel_tol * std::fabs(total))) {
        if (splits >= spec.max_subdivisions)
            throw quadrature_error("expect_exponential: subdivision budget exhausted",
                                   total, total_err);
        const Interval top = *work.begin();
        work.erase(work.begin());
        total -= top.val;
        total_err -= top.err;
        const double m = 0.5 * (top.a + top.b);
        double v1, e1, v2, e2;
        detail::gk15(w, top.a, m, v1, e1);
        detail::gk15(w, m, top.b, v2, e2);
        work.insert({e1, top.a, m, v1});
        work.insert({e2, m, top.b, v2});
        total += v1 + v2;
        total_err += e1 + e2;
        ++splits;
    }
    // Re-sum in interval order for a deterministic, well-conditioned total.
    double sum = 0.0;
    std::vector<Interval> sorted(work.begin(), work.end());
    std::sort(sorted.begin(), sorted.end(),
              [](const Interval& x, const Interval& y) { return x.a < y.a; });
    for (const auto& iv : sorted) sum += iv.val;
    return sum;
}

}  // namespace rab
