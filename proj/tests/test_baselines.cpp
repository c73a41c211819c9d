#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include <witsolve/baselines.hpp>
#include <witsolve/quadrature.hpp>

using namespace witsolve;

TEST_CASE("optimal affine law at k=1, sigma_x=1 has a unique slope", "[baselines]") {
    const AffineLaw law = affine_optimal(ProblemParams(1.0, 1.0, 1.0));
    CHECK(law.t_root == Catch::Approx(0.68232780382801933).epsilon(1e-9));
    CHECK(law.nu == Catch::Approx(0.68232780382801933).epsilon(1e-9));
    CHECK(law.mu == Catch::Approx(0.31767219617198067).epsilon(1e-9));
    REQUIRE(law.all_real_roots.size() == 1);
    CHECK(detail::affine_closed_cost(law.nu, 1.0, 1.0) ==
          Catch::Approx(0.41858782039271004).epsilon(1e-12));
}

TEST_CASE("tied stationary slopes resolve to the larger root", "[baselines]") {
    SECTION("k=0.2, sigma_x=5") {
        const AffineLaw law = affine_optimal(ProblemParams(0.2, 1.0, 5.0));
        REQUIRE(law.all_real_roots.size() == 3);
        CHECK(law.all_real_roots[0] == Catch::Approx(0.20871215252208).epsilon(1e-9));
        CHECK(law.all_real_roots[1] == Catch::Approx(1.5159802276928206).epsilon(1e-9));
        CHECK(law.all_real_roots[2] == Catch::Approx(4.79128784747792).epsilon(1e-9));
        CHECK(law.t_root == Catch::Approx(4.79128784747792).epsilon(1e-9));
        CHECK(detail::affine_closed_cost(law.nu, 0.2, 5.0) == Catch::Approx(0.96).epsilon(1e-12));
        // Both extreme roots cost exactly 0.96; the middle one is a local max.
        CHECK(detail::affine_closed_cost(law.all_real_roots[0] / 5.0, 0.2, 5.0) ==
              Catch::Approx(0.96).epsilon(1e-12));
        CHECK(detail::affine_closed_cost(law.all_real_roots[1] / 5.0, 0.2, 5.0) >
              1.1);
    }

    SECTION("k=0.001, sigma_x=1000") {
        const AffineLaw law = affine_optimal(ProblemParams(0.001, 1.0, 1000.0));
        REQUIRE(law.all_real_roots.size() == 3);
        CHECK(law.all_real_roots[0] == Catch::Approx(0.001000001000002).epsilon(1e-9));
        CHECK(law.all_real_roots[1] == Catch::Approx(9.9666667905349733).epsilon(1e-9));
        CHECK(law.all_real_roots[2] == Catch::Approx(999.998999999).epsilon(1e-9));
        CHECK(law.t_root == Catch::Approx(999.998999999).epsilon(1e-9));
        CHECK(detail::affine_closed_cost(law.nu, 0.001, 1000.0) ==
              Catch::Approx(0.999999).epsilon(1e-12));
    }

    SECTION("k=0.01, sigma_x=sqrt(80)") {
        const double sx = std::sqrt(80.0);
        const AffineLaw law = affine_optimal(ProblemParams(0.01, 1.0, sx));
        REQUIRE(law.all_real_roots.size() == 1);
        CHECK(law.t_root == Catch::Approx(0.00089433918774055688).epsilon(1e-9));
        CHECK(detail::affine_closed_cost(law.nu, 0.01, sx) ==
              Catch::Approx(0.0079992000793522552).epsilon(1e-12));
    }
}

TEST_CASE("affine law requires unit observation noise", "[baselines]") {
    CHECK_THROWS_AS(affine_optimal(ProblemParams(1.0, 2.0, 1.0)), std::invalid_argument);
    CHECK_THROWS_AS(affine_optimal(ProblemParams(1.0, 0.5, 1.0)), std::invalid_argument);
}

TEST_CASE("affine profile is the linear pair (nu x, mu y)", "[baselines]") {
    const ProblemParams params(1.0, 1.0, 1.0);
    const AffineLaw law = affine_optimal(params);
    const StrategyProfile p = affine_profile(law, params);

    CHECK(p.provenance == "affine");
    REQUIRE(p.curve_x.size() >= 2);
    for (double x : {-3.9, -1.0, 0.0, 0.25, 2.5})
        CHECK(p.g1bar(x) == Catch::Approx(law.nu * x).margin(1e-12));
    for (double y : {-10.0, -0.5, 0.0, 1.0, 7.0})
        CHECK(p.gamma2(y) == law.mu * y);
}

TEST_CASE("two-point quantizer baseline steps at the origin", "[baselines]") {
    const ProblemParams params(0.2, 1.0, 5.0);
    const StrategyProfile p = witsenhausen_sign(params);

    CHECK(p.provenance == "sign");
    CHECK(p.g1bar(3.0) == 5.0);
    CHECK(p.g1bar(-3.0) == -5.0);
    CHECK(p.g1bar(1e-6) == 5.0);
    CHECK(p.g1bar(-1e-6) == -5.0);
    CHECK(p.g1bar(25.0) == 5.0);
    for (double y : {-4.0, -0.3, 0.0, 0.8, 9.0})
        CHECK(p.gamma2(y) == Catch::Approx(5.0 * std::tanh(5.0 * y)).margin(1e-15));
}

TEST_CASE("signaling baseline with slope keeps its curve piecewise exact", "[baselines]") {
    const ProblemParams params(0.01, 1.0, std::sqrt(80.0));
    const QuadratureRule rule = hermite_rule(7);
    const BansalBasarLaw law{5.0, 0.01006};

    SECTION("conditioning on the injected control term") {
        const StrategyProfile p = bansal_basar_profile(law, params, rule);
        CHECK(p.provenance == "bansal-basar");
        CHECK(p.g1bar(1.0) == Catch::Approx(1.0 + 5.0 + 0.01006).margin(1e-10));
        CHECK(p.g1bar(-2.0) == Catch::Approx(-2.0 - 5.0 - 2.0 * 0.01006).margin(1e-10));
        const double cap = 5.0 + 0.01006 * 40.0;
        for (double y : {-40.0, -6.0, 0.0, 6.0, 40.0}) {
            const double v = p.gamma2(y);
            CHECK(std::isfinite(v));
            CHECK(std::fabs(v) <= cap);
        }
    }

    SECTION("conditioning on the post-control state") {
        const StrategyProfile p = bansal_basar_profile(law, params, rule, true);
        double lo = 0.0, hi = 0.0;
        for (double x : collocation_points(params, rule)) {
            const double g = x + 5.0 * (x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0)) + 0.01006 * x;
            lo = std::min(lo, g);
            hi = std::max(hi, g);
        }
        for (double y : {-40.0, -6.0, 0.0, 6.0, 40.0}) {
            const double v = p.gamma2(y);
            CHECK(std::isfinite(v));
            CHECK(v >= lo - 1e-9);
            CHECK(v <= hi + 1e-9);
        }
    }
}

TEST_CASE("baseline curves are odd", "[baselines]") {
    const ProblemParams params(0.2, 1.0, 5.0);
    const QuadratureRule rule = hermite_rule(7);
    const StrategyProfile profiles[] = {
        affine_profile(affine_optimal(params), params),
        witsenhausen_sign(params),
        bansal_basar_profile(BansalBasarLaw{5.0, 0.01006}, params, rule)};
    for (const StrategyProfile& p : profiles) {
        for (double x : {0.5, 2.2, 7.9, 18.0})
            CHECK(p.g1bar(x) == Catch::Approx(-p.g1bar(-x)).margin(1e-9));
        for (double y : {0.4, 3.0, 15.0})
            CHECK(p.gamma2(y) == Catch::Approx(-p.gamma2(-y)).margin(1e-9));
    }
}
