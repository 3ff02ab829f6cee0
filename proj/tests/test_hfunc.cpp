#include <doctest.h>

#include "socnet/hfunc.hpp"
#include "socnet/special.hpp"
#include "socnet/stats.hpp"

#include <cmath>
#include <vector>

using namespace socnet;

namespace {

HFunction exp_gamma_pair(Association a = Association::Positive) {
    return convolution_pair(exponential_dist(1.0), exponential_dist(1.0), gamma_dist(2.0, 1.0), a);
}

}  // namespace

TEST_CASE("eval worked values") {
    CHECK(normal_rho(1.0).eval(0.5, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
    const double u = 1.0 - std::exp(-1.0);
    CHECK(exp_gamma_pair().eval(u, u) == doctest::Approx(0.593994).epsilon(1e-6));
    CHECK(projection(1).eval(0.3, 0.9) == 0.3);
    CHECK(projection(2).eval(0.3, 0.9) == 0.9);
    CHECK_THROWS(projection(1).eval(0.0, 0.5));
    CHECK_THROWS(projection(1).eval(0.5, 1.0));
}

TEST_CASE("association tags are input flips") {
    const HFunction pos = exp_gamma_pair(Association::Positive);
    const HFunction neg = exp_gamma_pair(Association::Negative);
    const HFunction sx = exp_gamma_pair(Association::SimpsonX);
    const HFunction sy = exp_gamma_pair(Association::SimpsonY);
    for (double x : {0.1, 0.42, 0.9}) {
        for (double y : {0.2, 0.5, 0.77}) {
            CHECK(neg.eval(x, y) == pos.eval(1.0 - x, 1.0 - y));
            CHECK(sx.eval(x, y) == pos.eval(1.0 - x, y));
            CHECK(sy.eval(x, y) == pos.eval(x, 1.0 - y));
        }
    }
}

TEST_CASE("normal-rho closed form") {
    for (double rho : {0.125, 0.5, 1.0, 2.0, 8.0}) {
        const HFunction h = normal_rho(rho);
        for (double x = 0.05; x < 1.0; x += 0.09) {
            for (double y = 0.05; y < 1.0; y += 0.09) {
                const double direct = normal_cdf((normal_quantile(x) + rho * normal_quantile(y)) /
                                                 std::sqrt(1.0 + rho * rho));
                CHECK(h.eval(x, y) == doctest::Approx(direct).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("noisy eval") {
    const HFunction h = normal_rho(1.0);
    // zero noise weight collapses to plain eval, bit for bit
    for (double x : {0.2, 0.5, 0.8})
        for (double y : {0.3, 0.6})
            CHECK(eval_noisy(h, x, y, 0.77, 0.0) == h.eval(x, y));
    CHECK(eval_noisy(h, 0.5, 0.5, 0.5, 1.0) == doctest::Approx(0.5).epsilon(1e-12));

    CounterRng rng(8);
    std::vector<double> sample(100000);
    const HFunction g = exp_gamma_pair();
    for (double& s : sample) s = eval_noisy(g, rng.uniform01(), rng.uniform01(), rng.uniform01(), 0.7);
    CHECK(ks_uniform(std::move(sample)) < 0.01);
}

TEST_CASE("failure error model") {
    FailureSpec spec;
    spec.base = projection(1);

    spec.alpha = 1.0;
    CHECK(eval_failure(spec, 0.81, 0.4, 0.9) == spec.base.eval(0.81, 0.4));

    spec.alpha = 0.0;  // no degree correction: output is the error input
    CHECK(eval_failure(spec, 0.81, 0.4, 0.3) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(eval_failure(spec, 0.2, 0.9, 0.3) == eval_failure(spec, 0.7, 0.1, 0.3));

    spec.alpha = 0.95;
    CHECK(eval_failure(spec, 0.81, 0.4, 0.9) == doctest::Approx(std::pow(0.81, 0.95)).epsilon(1e-12));
    CHECK(std::pow(0.81, 0.95) == doctest::Approx(0.8185793).epsilon(1e-6));
    // below the failure threshold the multiplicative error engages:
    // delta^(1-alpha) = ((0.04/0.05)^20)^0.05 = 0.8
    const double expected = std::pow(0.81, 0.95) * 0.8;
    CHECK(eval_failure(spec, 0.81, 0.4, 0.04) == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("chained h-functions") {
    const ChainedH viaInner = chain(exp_gamma_pair(), projection(1));
    CHECK(viaInner.eval(0.3, 0.9, 0.6) == exp_gamma_pair().eval(0.3, 0.6));
    const ChainedH viaOuter = chain(projection(1), exp_gamma_pair());
    CHECK(viaOuter.eval(0.3, 0.9, 0.6) == exp_gamma_pair().eval(0.3, 0.9));

    CounterRng rng(4);
    const ChainedH mixed = chain(convolution_pair(uniform_dist(0.0, 1.0), uniform_dist(0.0, 1.0),
                                                  triangular_dist(0.0, 2.0)),
                                 exp_gamma_pair());
    std::vector<double> sample(100000);
    for (double& s : sample) s = mixed.eval(rng.uniform01(), rng.uniform01(), rng.uniform01());
    CHECK(ks_uniform(std::move(sample)) < 0.01);
}

TEST_CASE("catalog composition") {
    const auto& cat = h_catalog();
    REQUIRE(cat.size() == 22);
    int rhoCount = 0, convCount = 0, projCount = 0;
    for (const auto& entry : cat) {
        CHECK(entry.h.association == Association::Positive);
        switch (entry.h.construction) {
            case HConstruction::NormalRho: ++rhoCount; break;
            case HConstruction::ConvolutionPair: ++convCount; break;
            case HConstruction::Projection: ++projCount; break;
        }
    }
    CHECK(rhoCount == 17);
    CHECK(convCount == 3);
    CHECK(projCount == 2);

    const std::vector<double> grid = normal_rho_grid();
    REQUIRE(grid.size() == 17);
    CHECK(grid.front() == doctest::Approx(0.125));
    CHECK(grid.back() == doctest::Approx(8.0));
    for (std::size_t k = 1; k < grid.size(); ++k)
        CHECK(grid[k] / grid[k - 1] == doctest::Approx(std::pow(2.0, 0.375)).epsilon(1e-12));
}

TEST_CASE("numeric convolution tracks the analytic sum cdf") {
    const HFunction numeric =
        convolution_pair_numeric(exponential_dist(1.0), exponential_dist(1.0));
    const HFunction analytic = exp_gamma_pair();
    for (double x = 0.1; x < 1.0; x += 0.1)
        for (double y = 0.1; y < 1.0; y += 0.1)
            CHECK(numeric.eval(x, y) == doctest::Approx(analytic.eval(x, y)).epsilon(1e-3));

    CounterRng rng(6);
    std::vector<double> sample(20000);
    for (double& s : sample) s = numeric.eval(rng.uniform01(), rng.uniform01());
    CHECK(ks_uniform(std::move(sample)) < 0.02);
}

TEST_CASE("monotone grid spot check") {
    const HFunction h = convolution_pair(neg_gamma_dist(0.5, 1.0), neg_gamma_dist(0.5, 1.0),
                                         neg_gamma_dist(1.0, 1.0), Association::Negative);
    const int m = 25;
    for (int i = 1; i < m; ++i) {
        for (int j = 1; j <= m; ++j) {
            // negative association: non-increasing in both raw inputs
            CHECK(h.eval((i + 1) / (m + 1.0), j / (m + 1.0)) <= h.eval(i / (m + 1.0), j / (m + 1.0)));
            CHECK(h.eval(j / (m + 1.0), (i + 1) / (m + 1.0)) <= h.eval(j / (m + 1.0), i / (m + 1.0)));
        }
    }
}
