#include <doctest.h>

#include "socnet/bootstrap.hpp"
#include "socnet/estimator.hpp"
#include "socnet/generator.hpp"
#include "socnet/stats.hpp"

#include <algorithm>
#include <map>
#include <vector>

using namespace socnet;

namespace {

GeneratorSpec two_community_spec(int npc, double sigma) {
    GeneratorSpec spec;
    spec.assignment.K = 2;
    for (int c = 0; c < 2; ++c)
        for (int k = 0; k < npc; ++k) spec.assignment.labels.push_back(c + 1);
    const HFunction within = convolution_pair(neg_gamma_dist(0.5, 1.0), neg_gamma_dist(0.5, 1.0),
                                              neg_gamma_dist(1.0, 1.0), Association::Positive);
    const HFunction between = convolution_pair(neg_gamma_dist(0.5, 1.0), neg_gamma_dist(0.5, 1.0),
                                               neg_gamma_dist(1.0, 1.0), Association::Negative);
    spec.pairs.push_back({within, sigma, uniform_dist(0.0, 150.0)});
    spec.pairs.push_back({between, sigma, uniform_dist(0.0, 100.0)});
    spec.pairs.push_back({within, sigma, uniform_dist(0.0, 150.0)});
    spec.psi_iid = false;
    for (int c = 0; c < 2; ++c) {
        std::vector<double> grid(npc);
        for (int k = 0; k < npc; ++k) grid[k] = (k + 1) / (npc + 1.0);
        spec.psi_grid.push_back(grid);
    }
    return spec;
}

std::vector<double> block_weights(const WeightedNetwork& net, const CommunityAssignment& a,
                                  int i, int j) {
    std::vector<double> out;
    const int n = static_cast<int>(a.labels.size());
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            const int lo = std::min(a.labels[u], a.labels[v]);
            const int hi = std::max(a.labels[u], a.labels[v]);
            if (lo == i && hi == j) out.push_back(net.weights(u, v));
        }
    }
    return out;
}

}  // namespace

TEST_CASE("bootstrap replicates are deterministic and seed-sensitive") {
    const GeneratorSpec spec = two_community_spec(20, 0.15);
    const GeneratedNetwork g = generate(spec, 5);
    const FittedModel model = fit_network(g.net, spec.assignment, {});

    const WeightedNetwork r1 = bootstrap_replicate(model, 7);
    const WeightedNetwork r2 = bootstrap_replicate(model, 7);
    const WeightedNetwork r3 = bootstrap_replicate(model, 8);
    CHECK(r1.weights == r2.weights);
    CHECK(r1.weights != r3.weights);
    CHECK(validate(r1).empty());

    // every synthetic weight is an observed weight of its own block
    for (int i = 1; i <= 2; ++i) {
        for (int j = i; j <= 2; ++j) {
            std::vector<double> observed = block_weights(g.net, spec.assignment, i, j);
            std::sort(observed.begin(), observed.end());
            for (double w : block_weights(r1, spec.assignment, i, j))
                CHECK(std::binary_search(observed.begin(), observed.end(), w));
        }
    }
}

TEST_CASE("spurious pairs resample with replacement") {
    const GeneratorSpec spec = two_community_spec(16, 0.1);
    const GeneratedNetwork g = generate(spec, 11);
    FittedModel model = fit_network(g.net, spec.assignment, {});
    model.pairs[pair_index(1, 2, 2)].spurious = true;

    const WeightedNetwork rep = bootstrap_replicate(model, 3);
    const std::vector<double> original = block_weights(g.net, spec.assignment, 1, 2);
    const std::vector<double> sampled = block_weights(rep, spec.assignment, 1, 2);
    REQUIRE(sampled.size() == original.size());

    std::map<double, int> counts;
    for (double w : sampled) ++counts[w];
    int duplicated = 0;
    for (const auto& [w, c] : counts) {
        CHECK(std::count(original.begin(), original.end(), w) >= 1);
        if (c > 1) ++duplicated;
    }
    CHECK(duplicated > 0);  // 256 draws over 256 values collide with certainty
}

TEST_CASE("replicates reproduce the marginal weight law") {
    GeneratorSpec spec = two_community_spec(46, 0.15);
    // single community of 46 nodes: 1035 within edges
    spec.assignment.K = 1;
    spec.assignment.labels.assign(46, 1);
    spec.pairs.resize(1);
    spec.psi_grid.resize(1);
    const GeneratedNetwork g = generate(spec, 17);
    const FittedModel model = fit_network(g.net, spec.assignment, {});

    const WeightedNetwork rep = bootstrap_replicate(model, 29);
    std::vector<double> observed = block_weights(g.net, spec.assignment, 1, 1);
    std::vector<double> sampled = block_weights(rep, spec.assignment, 1, 1);
    REQUIRE(observed.size() >= 1000);
    CHECK(ks_two_sample(observed, sampled) <= 0.1);
}

TEST_CASE("bootstrap requires a fitted model") {
    const GeneratorSpec spec = two_community_spec(8, 0.0);
    const GeneratedNetwork g = generate(spec, 2);
    FittedModel model = fit_network(g.net, spec.assignment, {});
    model.pairs[0].g_hat = EmpiricalCdf{};
    CHECK_THROWS(bootstrap_replicate(model, 1));
}
