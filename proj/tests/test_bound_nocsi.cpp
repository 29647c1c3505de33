#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "pinned_values.hpp"
#include "rab/bound_nocsi.hpp"

using namespace rab;
using Catch::Approx;

namespace {
const SystemParams p001 = SystemParams::make(100, 0.01, 0.6, 1e-3);
const SystemParams p01 = SystemParams::make(100, 0.1, 0.6, 1e-3);  // pa*mu = 0.06
}  // namespace

TEST_CASE("no-CSI chain pinned at theta = 0.5") {
    const auto t = nocsi_terms(p001, 0.5);
    CHECK(t.delta1_star == Approx(pins::nocsi_d1).epsilon(1e-12));
    CHECK(t.v_theta == Approx(pins::nocsi_v).epsilon(1e-12));
    CHECK(t.c_theta == Approx(pins::nocsi_c).epsilon(1e-12));
    CHECK(t.q_theta == Approx(pins::nocsi_q).epsilon(1e-12));
    CHECK(t.delta2_star == Approx(pins::nocsi_d2).epsilon(1e-12));
    CHECK(t.w_theta == Approx(pins::nocsi_w).epsilon(1e-12));
    CHECK(t.p_tot == Approx(pins::nocsi_p).epsilon(1e-12));
    CHECK(t.delta3_star == 0.0);
    CHECK_THROWS_AS(nocsi_terms(p001, 1e-4), std::domain_error);  // theta <= eps
    CHECK_THROWS_AS(nocsi_terms(p001, 1.5), std::domain_error);
}

TEST_CASE("activity-uncertainty term vanishes at theta = 1 with pa = 1") {
    const auto known = SystemParams::make(100, 0.06, 1.0, 1e-3);
    const auto t = nocsi_terms(known, 1.0);
    // with pa = 1 and theta = 1 the exponent reduces to the three known terms
    const double c = 0.06;
    const double expo = c / (1 - c) * h_nats(1.0) + 1.0 / (1 - c) * h_nats(c) +
                        c * known.ln_M / (1 - c);
    CHECK(t.v_theta == Approx(std::exp(-expo)).epsilon(1e-13));
    // theta = 1 also kills q and delta2
    CHECK(t.q_theta == 0.0);
    CHECK(t.delta2_star == 0.0);
}

TEST_CASE("chain positivity across theta") {
    for (const auto& p : {p001, p01}) {
        for (int i = 0; i <= 60; ++i) {
            const double th = p.eps + 1e-9 + (1.0 - p.eps - 1e-9) * i / 60.0;
            const auto t = nocsi_terms(p, th);
            CHECK(t.v_theta > 0.0);
            CHECK(t.v_theta < 1.0);
            CHECK(t.c_theta > 0.0);
            CHECK(t.q_theta >= 0.0);
            CHECK(t.delta2_star >= 0.0);
            CHECK(t.w_theta > 0.0);
            CHECK(t.p_tot > 0.0);
        }
    }
}

TEST_CASE("delta2 is the root of the concentration margin") {
    // margin(x) = f(x) - q with f the noncentral concentration exponent
    // profile; f is increasing and f(delta2*) = q exactly.
    for (double th : {0.002, 0.1, 0.5, 0.9}) {
        const auto t = nocsi_terms(p01, th);
        const double c = t.c_theta, q = t.q_theta;
        auto margin = [&](double x) {
            return (1.0 + c) * (1.0 + x) -
                   std::sqrt(1.0 + c * (1.0 + x)) * std::sqrt(1.0 + 2.0 * x + c * (1.0 + x)) -
                   q;
        };
        CHECK(margin(t.delta2_star * (1.0 + 1e-9)) > 0.0);
        CHECK(margin(t.delta2_star * (1.0 - 1e-9)) <= 0.0);
    }
}

TEST_CASE("third margin: literal infimum is zero, override scales the power") {
    // -ln(1-x) - x > 0 on all of (0,1), so the qualifying set is everything
    for (int i = 1; i < 100; ++i) {
        const double x = i / 100.0;
        CHECK(-std::log1p(-x) - x > 0.0);
    }
    const auto base = nocsi_terms(p001, 0.5);
    const auto bumped = nocsi_terms(p001, 0.5, 0.25);
    CHECK(bumped.p_tot * (1.0 - 0.25) == Approx(base.p_tot).epsilon(1e-14));
}

TEST_CASE("no-CSI achievability: pin and witness") {
    const auto r = eb_nocsi_ach(p001);
    REQUIRE(r.eb.feasible);
    CHECK(r.eb.linear == Approx(pins::eb_nocsi_ach_mu001).epsilon(1e-8));
    CHECK(r.witnesses.theta.value() > p001.eps);
    CHECK(r.eb.linear == Approx(r.witnesses.p_tot.value() / p001.S).epsilon(1e-14));
}

TEST_CASE("known-activity variant") {
    // idempotent when pa is already 1
    const auto known = SystemParams::make(100, 0.06, 1.0, 1e-3);
    CHECK(eb_nocsi_ach_known_activity(known).eb.linear == eb_nocsi_ach(known).eb.linear);
    // pinned value and dominance
    const auto r = eb_nocsi_ach_known_activity(p01);
    CHECK(r.eb.linear == Approx(pins::eb_nocsi_known_c006).epsilon(1e-8));
    for (double mu : {1e-3, 0.01, 0.1}) {
        const auto p = SystemParams::make(100, mu, 0.6, 1e-3);
        CHECK(eb_nocsi_ach_known_activity(p).eb.linear <= eb_nocsi_ach(p).eb.linear);
    }
}

TEST_CASE("achievability drops as activity certainty grows") {
    for (double c : {1e-3, 0.06}) {
        double prev = kInf;
        for (double pa : {0.3, 0.6, 1.0}) {
            const auto p = SystemParams::make(100, c / pa, pa, 1e-3);
            const double v = eb_nocsi_ach(p).eb.linear;
            CHECK(v <= prev);
            prev = v;
        }
    }
}

TEST_CASE("converse constraint slack") {
    // zero power: slack is exactly minus the rate side
    const double lhs = p01.ln_M - p01.eps * ln_M_minus_1(p01) - h_nats(p01.eps);
    CHECK(nocsi_conv_gap(p01, 0.0) == Approx(-lhs).epsilon(1e-14));
    CHECK(nocsi_conv_gap(p01, 0.0) < 0.0);
    // strictly increasing over a sampled power grid
    double prev = -kInf;
    for (int i = 0; i <= 16; ++i) {
        const double P = std::exp(std::log(1e-4) + i * (std::log(1e4) - std::log(1e-4)) / 16.0);
        const double g = nocsi_conv_gap(p01, P);
        CHECK(g > prev);
        prev = g;
    }
    CHECK_THROWS_AS(nocsi_conv_gap(p01, -1.0), std::domain_error);
}

TEST_CASE("no-CSI converse: pin, invariance, ordering") {
    const auto r = eb_nocsi_conv(p01);
    REQUIRE(r.eb.feasible);
    CHECK(r.eb.linear == Approx(pins::eb_nocsi_conv_c006).epsilon(1e-8));
    CHECK(std::fabs(r.diagnostics.residual) < 1e-9);

    // product-only dependence, exact under the halving transform
    const auto b = eb_nocsi_conv(SystemParams::make(100, 0.2, 0.3, 1e-3));
    CHECK(r.eb.linear == b.eb.linear);

    for (double c : {1e-4, 1e-2, 0.06, 0.1}) {
        const auto p = SystemParams::make(100, c / 0.6, 0.6, 1e-3);
        CHECK(eb_nocsi_conv(p).eb.linear <= eb_nocsi_ach(p).eb.linear);
    }
}
