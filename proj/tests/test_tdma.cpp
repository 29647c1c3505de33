#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "pinned_values.hpp"
#include "rab/tdma.hpp"

using namespace rab;
using Catch::Approx;

TEST_CASE("tdma closed forms") {
    const auto r = tdma_eb(SystemParams::make(100, 0.05, 0.6, 1e-3));
    REQUIRE(r.eb.feasible);
    CHECK(r.eb.linear == Approx(pins::tdma_eb_mu005).epsilon(1e-12));
    CHECK(r.eb.db == Approx(37.92).margin(0.01));
    // vanishing-rate limit of (2^{mu k} - 1)/(mu k)
    const auto lo = tdma_eb(SystemParams::make(100, 1e-8, 0.6, 1e-3));
    CHECK(lo.eb.linear == Approx(pins::tdma_eb_mu_to_0).epsilon(1e-5));
}

TEST_CASE("tdma point satisfies the outage identity") {
    for (double mu : {1e-3, 0.05, 0.2}) {
        const auto p = SystemParams::make(100, mu, 0.6, 1e-3);
        const auto t = tdma_point(p);
        CHECK(t.slot_len * t.rate == Approx(static_cast<double>(p.k)).epsilon(1e-12));
        CHECK(t.eb.linear == Approx(t.p_star / (mu * p.k)).epsilon(1e-14));
        // plugging the power back reproduces the outage target
        const double thr = std::expm1(mu * p.k * kLn2);
        const double outage = -std::expm1(-thr / t.p_star);
        CHECK(std::fabs(outage - p.eps) <= 1e-12);
    }
}

TEST_CASE("tdma power collapses as the error budget opens up") {
    double prev = kInf;
    for (double eps : {1e-3, 1e-2, 0.1, 0.9, 1.0 - 1e-9}) {
        const auto t = tdma_point(SystemParams::make(100, 0.05, 0.6, eps));
        CHECK(t.p_star < prev);
        prev = t.p_star;
    }
    CHECK(prev < 1.5);  // 31 / -ln(1e-9) and falling toward 0
}

TEST_CASE("tdma energy grows with density once mu k >= 1") {
    double prev = 0.0;
    for (double mu : {0.01, 0.02, 0.05, 0.1, 0.2, 0.5}) {
        const auto t = tdma_point(SystemParams::make(100, mu, 0.6, 1e-3));
        CHECK(t.eb.linear > prev);
        prev = t.eb.linear;
    }
}

TEST_CASE("tdma log-domain reporting at extreme slot rate") {
    // mu k ln 2 beyond the exp range: dB stays finite and exact
    const auto p = SystemParams::make(1024, 0.999, 0.6, 1e-12);
    const auto r = tdma_eb(p);
    REQUIRE(r.eb.feasible);
    CHECK(std::isinf(r.eb.linear));
    const double muk = 0.999 * 1024;
    const double ln_eb = muk * kLn2 + std::log1p(-std::exp(-muk * kLn2)) -
                         std::log(-std::log1p(-1e-12)) - std::log(muk);
    CHECK(r.eb.db == Approx(10.0 / std::log(10.0) * ln_eb).epsilon(1e-12));
}
