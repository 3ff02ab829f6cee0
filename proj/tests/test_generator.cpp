#include <doctest.h>

#include "socnet/generator.hpp"
#include "socnet/model.hpp"
#include "socnet/special.hpp"
#include "socnet/stats.hpp"

#include <cmath>
#include <vector>

using namespace socnet;

namespace {

GeneratorSpec single_community_spec(int n, HFunction h, double sigma, Distribution marginal) {
    GeneratorSpec spec;
    spec.assignment.K = 1;
    spec.assignment.labels.assign(n, 1);
    PairGen pg;
    pg.h = std::move(h);
    pg.sigma = sigma;
    pg.marginal = std::move(marginal);
    spec.pairs = {pg};
    return spec;
}

}  // namespace

TEST_CASE("projection h with uniform marginal copies sociabilities") {
    GeneratorSpec spec = single_community_spec(12, projection(1), 0.0, uniform_dist(0.0, 1.0));
    const GeneratedNetwork g = generate(spec, 4);
    REQUIRE(g.psis.size() == 12);
    for (int u = 0; u < 12; ++u)
        for (int v = u + 1; v < 12; ++v) CHECK(g.net.weights(u, v) == g.psis[u]);
    CHECK(validate(g.net).empty());
}

TEST_CASE("marginal bounds and law") {
    const int n = 1200;
    GeneratorSpec spec = single_community_spec(n, normal_rho(1.0), 0.3, gamma_dist(2.0, 1.0));
    const GeneratedNetwork g = generate(spec, 2);
    const Distribution marginal = gamma_dist(2.0, 1.0);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; v += 37) CHECK(g.net.weights(u, v) > 0.0);
    // edges that share a node share a sociability, so restrict the law check
    // to node-disjoint pairs, which are genuinely i.i.d.
    std::vector<double> probs;
    for (int u = 0; u + 1 < n; u += 2) probs.push_back(marginal.cdf(g.net.weights(u, u + 1)));
    CHECK(probs.size() == n / 2);
    CHECK(ks_uniform(std::move(probs)) < 0.05);
}

TEST_CASE("generation is deterministic per seed") {
    GeneratorSpec spec = single_community_spec(20, normal_rho(2.0), 0.2, uniform_dist(0.0, 150.0));
    const GeneratedNetwork a = generate(spec, 9);
    const GeneratedNetwork b = generate(spec, 9);
    const GeneratedNetwork c = generate(spec, 10);
    CHECK(a.net.weights == b.net.weights);
    CHECK(a.psis == b.psis);
    CHECK(a.net.weights != c.net.weights);
}

TEST_CASE("grid sociabilities are taken verbatim") {
    GeneratorSpec spec = single_community_spec(4, normal_rho(1.0), 0.0, uniform_dist(0.0, 1.0));
    spec.psi_iid = false;
    spec.psi_grid = {{0.2, 0.4, 0.6, 0.8}};
    const GeneratedNetwork g = generate(spec, 1);
    CHECK(g.psis == std::vector<double>{0.2, 0.4, 0.6, 0.8});
}

TEST_CASE("huge noise drowns the signal") {
    GeneratorSpec spec = single_community_spec(50, normal_rho(1.0), 1e6, uniform_dist(0.0, 1.0));
    const GeneratedNetwork g = generate(spec, 7);
    const HFunction h = normal_rho(1.0);
    std::vector<double> w, signal;
    for (int u = 0; u < 50; ++u) {
        for (int v = u + 1; v < 50; ++v) {
            w.push_back(g.net.weights(u, v));
            signal.push_back(h.eval(g.psis[u], g.psis[v]));
        }
    }
    CHECK(std::fabs(pearson(w, signal)) < 0.1);
}

TEST_CASE("sparsify retention") {
    GeneratorSpec spec = single_community_spec(148, normal_rho(1.0), 0.1, uniform_dist(0.0, 1.0));
    const WeightedNetwork net = generate(spec, 2).net;

    const WeightedNetwork keepAll = sparsify(net, 1.0, 3);
    CHECK(!keepAll.missing.has_value());
    CHECK(keepAll.weights == net.weights);

    const WeightedNetwork dropAll = sparsify(net, 0.0, 3);
    REQUIRE(dropAll.missing.has_value());
    for (int u = 0; u < net.n(); ++u)
        for (int v = 0; v < net.n(); ++v) CHECK((*dropAll.missing)(u, v) == (u != v));

    double missingFrac = 0.0;
    const double pairs = net.n() * (net.n() - 1) / 2.0;
    for (int seed = 0; seed < 20; ++seed) {
        const WeightedNetwork some = sparsify(net, 0.8, seed);
        REQUIRE(some.missing.has_value());
        int dropped = 0;
        for (int u = 0; u < net.n(); ++u) {
            for (int v = u + 1; v < net.n(); ++v) {
                CHECK((*some.missing)(u, v) == (*some.missing)(v, u));
                if ((*some.missing)(u, v)) ++dropped;
            }
        }
        missingFrac += dropped / pairs;
    }
    CHECK(std::fabs(missingFrac / 20.0 - 0.2) <= 0.02);
}

TEST_CASE("external noise layer") {
    GeneratorSpec spec = single_community_spec(148, normal_rho(1.0), 0.0, uniform_dist(0.0, 150.0));
    const WeightedNetwork net = generate(spec, 2).net;

    const WeightedNetwork same = add_external_noise(net, 0.0, 5);
    CHECK(same.weights == net.weights);

    const WeightedNetwork noisy = add_external_noise(net, 6.0, 5);
    CHECK(validate(noisy).empty());
    std::vector<double> delta;
    for (int u = 0; u < net.n(); ++u)
        for (int v = u + 1; v < net.n(); ++v)
            delta.push_back(noisy.weights(u, v) - net.weights(u, v));
    CHECK(delta.size() >= 10000);
    const double sd = sample_sd(delta);
    CHECK(sd * sd == doctest::Approx(36.0).epsilon(0.1));
    CHECK(std::fabs(mean(delta)) < 0.2);
}

TEST_CASE("linear model generation") {
    CommunityAssignment one;
    one.K = 1;
    one.labels.assign(40, 1);

    LsmPairGen flat;
    flat.gamma = 0.0;
    flat.alpha = 0.0;
    flat.beta = 0.0;
    flat.sigma = 1.0;
    const GeneratedNetwork iid = generate_lsm(one, {flat}, 3);
    std::vector<double> w;
    for (int u = 0; u < 40; ++u)
        for (int v = u + 1; v < 40; ++v) w.push_back(iid.net.weights(u, v));
    CHECK(std::fabs(mean(w)) < 0.1);
    CHECK(sample_sd(w) == doctest::Approx(1.0).epsilon(0.08));

    LsmPairGen structured;
    structured.gamma = 5.0;
    structured.alpha = 3.0;
    structured.beta = 3.0;
    structured.sigma = 0.0;
    const GeneratedNetwork g = generate_lsm(one, {structured}, 4);
    for (int u = 0; u < 40; ++u) {
        for (int v = u + 1; v < 40; ++v) {
            const double expected =
                5.0 + 3.0 * normal_quantile(g.psis[u]) + 3.0 * normal_quantile(g.psis[v]);
            CHECK(g.net.weights(u, v) == doctest::Approx(expected).epsilon(1e-12));
        }
    }

    LsmPairGen lopsided = structured;
    lopsided.beta = 1.0;  // within-community pair must stay symmetric
    CHECK_THROWS(generate_lsm(one, {lopsided}, 4));

    CommunityAssignment two;
    two.K = 2;
    two.labels.assign(20, 1);
    two.labels.insert(two.labels.end(), 20, 2);
    LsmPairGen rowOnly;
    rowOnly.alpha = 1.0;
    rowOnly.beta = 0.0;
    const std::vector<LsmPairGen> pairs = {structured, rowOnly, structured};
    const GeneratedNetwork rows = generate_lsm(two, pairs, 6);
    for (int u = 0; u < 20; ++u)
        for (int v = 21; v < 40; ++v)
            CHECK(rows.net.weights(u, v) == doctest::Approx(rows.net.weights(u, 20)).epsilon(1e-12));
    CHECK(validate(rows.net).empty());
}
