#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "laad/penalty.hpp"
#include "laad/rng.hpp"

using namespace laad;

TEST_CASE("laad_prox closed form against the grid oracle") {
    // Frozen from the grid oracle over [-3,3] step 1e-6; analytic value is
    // (1+sqrt(7))/2 at the interior stationary point.
    const double oracle = oracle_prox(2.0, PenaltySpec::laad(0.5), -3.0, 3.0, 1e-6);
    const double analytic = 0.5 * (1.0 + std::sqrt(7.0));
    CHECK(std::abs(oracle - analytic) < 2e-6);
    const ProxResult r = laad_prox(2.0, 0.5);
    CHECK(r.theta_hat == doctest::Approx(analytic).epsilon(1e-12));
    CHECK(r.interior_stationary);

    // Large-z consistency: theta converges to z.
    const double far = laad_prox(100.0, 1.0).theta_hat;
    CHECK(far == doctest::Approx(99.990098).epsilon(1e-7));
    const double grid = oracle_prox(100.0, PenaltySpec::laad(1.0), 99.0, 100.0, 1e-6);
    CHECK(std::abs(far - grid) < 2e-6);
    // Stationarity identity |theta - z| = r/(1+theta).
    CHECK(std::abs(100.0 - far) == doctest::Approx(1.0 / (1.0 + far)).epsilon(1e-9));
}

TEST_CASE("laad_prox trivial and boundary cases") {
    CHECK(laad_prox(0.0, 0.5).theta_hat == 0.0);
    // z = r = 1: the stationary point itself is 0.
    CHECK(laad_prox(1.0, 1.0).theta_hat == 0.0);
    // Below threshold.
    CHECK(laad_prox(0.3, 0.5).theta_hat == 0.0);
    // No real stationary point: (|z|+1)^2 < 4r.
    CHECK(laad_prox(0.5, 4.0).theta_hat == 0.0);
    CHECK_FALSE(laad_prox(0.5, 4.0).interior_stationary);

    CHECK_THROWS_AS(laad_prox(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(laad_prox(1.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(laad_prox(std::nan(""), 1.0), std::invalid_argument);
}

TEST_CASE("laad_delta signs at the Appendix bracket endpoints") {
    for (double r : {1.5, 2.0, 4.0, 9.0}) {
        CHECK(laad_delta(r, r) < 0.0);
        CHECK(laad_delta(2.0 * std::sqrt(r) - 1.0, r) > 0.0);
    }
    // Value agrees with the direct objective difference l(theta*) - l(0).
    const double z = 3.5, r = 4.0;
    const double theta = 0.5 * (z - 1.0 + std::sqrt((z + 1.0) * (z + 1.0) - 4.0 * r));
    const auto obj = [&](double t) { return 0.5 * (z - t) * (z - t) + r * std::log1p(t); };
    CHECK(laad_delta(z, r) == doctest::Approx(obj(theta) - obj(0.0)).epsilon(1e-12));

    CHECK_THROWS_AS(laad_delta(0.5, 4.0), std::domain_error);
}

TEST_CASE("laad_threshold root and prox consistency") {
    CHECK(laad_threshold(1.0) == 1.0);
    CHECK(laad_threshold(0.25) == 0.25);

    const double v = laad_threshold(4.0);
    CHECK(v > 3.0);
    CHECK(v < 4.0);
    CHECK(std::abs(laad_delta(v, 4.0)) <= 1e-12);
    CHECK(laad_prox(v - 1e-6, 4.0).theta_hat == 0.0);
    CHECK(laad_prox(v + 1e-6, 4.0).theta_hat > 0.0);

    CHECK_THROWS_AS(laad_threshold(0.0), std::invalid_argument);
}

TEST_CASE("prox dispatcher closed forms") {
    CHECK(prox(2.0, PenaltySpec::lasso(0.5)) == doctest::Approx(1.5));
    CHECK(prox(-2.0, PenaltySpec::lasso(0.5)) == doctest::Approx(-1.5));
    CHECK(prox(0.4, PenaltySpec::lasso(0.5)) == 0.0);
    CHECK(prox(3.0, PenaltySpec::ridge(2.0)) == doctest::Approx(1.0));
    CHECK(prox(5.0, PenaltySpec::none()) == 5.0);

    // SCAD middle zone, frozen from the grid oracle on 0.5*(z-t)^2 + p_SCAD(t).
    const double scad = prox(3.0, PenaltySpec::scad(1.0, 3.7));
    CHECK(scad == doctest::Approx(4.4 / 1.7).epsilon(1e-12));
    const double scad_oracle = oracle_prox(3.0, PenaltySpec::scad(1.0, 3.7), 0.0, 3.5, 1e-6);
    CHECK(std::abs(scad - scad_oracle) < 2e-6);

    // MCP beyond gamma*lambda is unbiased.
    CHECK(prox(4.0, PenaltySpec::mcp(1.0, 3.0)) == 4.0);
    const double mcp = prox(1.5, PenaltySpec::mcp(1.0, 3.0));
    const double mcp_oracle = oracle_prox(1.5, PenaltySpec::mcp(1.0, 3.0), -2.0, 2.0, 1e-6);
    CHECK(std::abs(mcp - mcp_oracle) < 2e-6);

    // Strength zero is the identity for every family.
    for (auto kind : {PenaltyKind::Ridge, PenaltyKind::Lasso, PenaltyKind::Scad,
                      PenaltyKind::Mcp, PenaltyKind::Laad}) {
        PenaltySpec spec{kind, 0.0};
        CHECK(prox(1.7, spec) == 1.7);
    }

    PenaltySpec bad_scad = PenaltySpec::scad(1.0, 2.0);
    CHECK_THROWS_AS(prox(1.0, bad_scad), std::invalid_argument);
    PenaltySpec bad_mcp = PenaltySpec::mcp(1.0, 1.0);
    CHECK_THROWS_AS(prox(1.0, bad_mcp), std::invalid_argument);
}

TEST_CASE("penalty_value weighting and exemptions") {
    const double beta0[] = {0.0, 0.0, 0.0};
    const double w1[] = {1.0, 1.0, 1.0};
    CHECK(penalty_value(beta0, PenaltySpec::laad(2.0), w1) == 0.0);

    const double beta1[] = {1.0};
    const double w2[] = {1.0};
    CHECK(penalty_value(beta1, PenaltySpec::laad(1.0), w2) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-15));

    const double beta2[] = {1.0, 2.0};
    const double w3[] = {0.0, 1.0};
    CHECK(penalty_value(beta2, PenaltySpec::lasso(0.5), w3) == doctest::Approx(1.0));

    const double w_bad[] = {1.0};
    CHECK_THROWS_AS(penalty_value(beta2, PenaltySpec::lasso(0.5), w_bad),
                    std::invalid_argument);
}

TEST_CASE("oracle agreement across kinds on a sampled grid") {
    // Lighter version of the acceptance sweep: every closed form matches the
    // brute-force oracle within the grid resolution.
    const double step = 1e-4;
    for (int zi = -5; zi <= 5; ++zi) {
        const double z = zi;
        for (double r : {0.1, 0.5, 1.0}) {
            const double got = laad_prox(z, r).theta_hat;
            const double oracle = oracle_prox(z, PenaltySpec::laad(r), -6.0, 6.0, step);
            CHECK(prox_objective(z, got, PenaltySpec::laad(r)) <=
                  prox_objective(z, oracle, PenaltySpec::laad(r)) + 1e-12);
            if (got != 0.0 && oracle != 0.0) CHECK(std::abs(got - oracle) < 2.0 * step);
        }
        for (const auto& spec : {PenaltySpec::lasso(0.7), PenaltySpec::scad(0.8),
                                 PenaltySpec::mcp(0.6), PenaltySpec::ridge(1.3)}) {
            const double got = prox(z, spec);
            const double oracle = oracle_prox(z, spec, -6.0, 6.0, step);
            CHECK(std::abs(got - oracle) <= 2.0 * step);
        }
    }
    // Soft threshold is exact at grid points.
    CHECK(oracle_prox(2.0, PenaltySpec::lasso(0.5), -3.0, 3.0, 0.5) == 1.5);
}

TEST_CASE("prox properties: odd symmetry, shrinkage, monotonicity") {
    Rng rng(20260808);
    const PenaltySpec specs[] = {PenaltySpec::none(),      PenaltySpec::ridge(0.9),
                                 PenaltySpec::lasso(0.6),  PenaltySpec::scad(0.5),
                                 PenaltySpec::mcp(0.8),    PenaltySpec::laad(0.7),
                                 PenaltySpec::laad(3.0)};
    for (int trial = 0; trial < 500; ++trial) {
        const double z = 12.0 * (rng.next_uniform() - 0.5);
        for (const auto& spec : specs) {
            const double plus = prox(z, spec);
            const double minus = prox(-z, spec);
            CHECK(plus == doctest::Approx(-minus).epsilon(1e-12));
            const double signed_value = (z < 0 ? -1.0 : 1.0) * plus;
            CHECK(signed_value >= -1e-15);
            CHECK(signed_value <= std::abs(z) + 1e-15);
        }
    }
    // LAAD prox is monotone nondecreasing in z for fixed r.
    for (double r : {0.5, 2.0, 5.0}) {
        double prev = laad_prox(-8.0, r).theta_hat;
        for (double z = -8.0 + 0.01; z <= 8.0; z += 0.01) {
            const double cur = laad_prox(z, r).theta_hat;
            CHECK(cur >= prev - 1e-12);
            prev = cur;
        }
    }
    // Sparsity region is exactly |z| below the selection threshold.
    for (double r : {0.3, 1.0, 2.5, 6.0}) {
        const double thr = laad_threshold(r);
        for (double z = 0.0; z <= 9.0; z += 0.0103) {
            const double t = laad_prox(z, r).theta_hat;
            if (z < thr) CHECK(t == 0.0);
            if (t != 0.0) CHECK(z >= thr);
        }
    }
}

TEST_CASE("laad stationarity identity above the threshold") {
    // Interior solutions satisfy |theta - z| = r/(1+|theta|) <= r, so the
    // estimate approaches z as |z| grows.
    Rng rng(606);
    for (int trial = 0; trial < 300; ++trial) {
        const double r = 0.1 + 8.0 * rng.next_uniform();
        const double thr = laad_threshold(r);
        const double z = (thr + 0.01 + 30.0 * rng.next_uniform()) *
                         (rng.next_uniform() < 0.5 ? -1.0 : 1.0);
        const ProxResult res = laad_prox(z, r);
        REQUIRE(res.interior_stationary);
        const double gap = std::abs(res.theta_hat - z);
        CHECK(gap == doctest::Approx(r / (1.0 + std::abs(res.theta_hat))).epsilon(1e-8));
        CHECK(gap <= r + 1e-12);
    }
    // The gap vanishes in the large-z limit.
    CHECK(std::abs(laad_prox(1e8, 5.0).theta_hat - 1e8) < 1e-7);
}

TEST_CASE("penalty derivative limits") {
    const double lambda = 0.8;
    const auto deriv = [&](const PenaltySpec& spec, double theta, double h) {
        return (penalty_value_single(theta + h, spec) - penalty_value_single(theta - h, spec)) /
               (2.0 * h);
    };
    const PenaltySpec laad = PenaltySpec::laad(lambda);
    const PenaltySpec lasso = PenaltySpec::lasso(lambda);
    const PenaltySpec scad = PenaltySpec::scad(lambda);
    const PenaltySpec mcp = PenaltySpec::mcp(lambda);

    // Marginal penalty vanishes for the unbiased families, stays at lambda for lasso.
    CHECK(std::abs(deriv(laad, 1e6, 1.0)) < 1e-5);
    CHECK(std::abs(deriv(scad, 1e6, 1.0)) < 1e-12);
    CHECK(std::abs(deriv(mcp, 1e6, 1.0)) < 1e-12);
    CHECK(deriv(lasso, 1e6, 1.0) == doctest::Approx(lambda).epsilon(1e-9));

    // All four approach lambda at the origin.
    for (const auto& spec : {laad, lasso, scad, mcp})
        CHECK(deriv(spec, 1e-3, 1e-6) == doctest::Approx(lambda).epsilon(1e-2));
}

TEST_CASE("delta is strictly decreasing on the selection bracket") {
    for (double r : {1.5, 2.0, 4.0, 9.0}) {
        const double lo = 2.0 * std::sqrt(r) - 1.0;
        const double hi = r;
        double prev = laad_delta(lo, r);
        const int steps = 200;
        for (int s = 1; s <= steps; ++s) {
            const double z = lo + (hi - lo) * static_cast<double>(s) / steps;
            const double cur = laad_delta(z, r);
            CHECK(cur < prev);
            prev = cur;
        }
    }
}

TEST_CASE("oracle_prox argument validation") {
    CHECK_THROWS_AS(oracle_prox(1.0, PenaltySpec::lasso(0.5), 2.0, 1.0, 0.1),
                    std::invalid_argument);
    CHECK_THROWS_AS(oracle_prox(1.0, PenaltySpec::lasso(0.5), 0.0, 1.0, 0.0),
                    std::invalid_argument);
}
