#include <doctest.h>

#include "socnet/community.hpp"
#include "socnet/estimator.hpp"
#include "socnet/generator.hpp"
#include "socnet/linalg.hpp"
#include "socnet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

using namespace socnet;

namespace {

GeneratorSpec benchmark_spec(int K, int npc, double sigma) {
    GeneratorSpec spec;
    spec.assignment.K = K;
    for (int c = 0; c < K; ++c)
        for (int k = 0; k < npc; ++k) spec.assignment.labels.push_back(c + 1);
    const HFunction within = convolution_pair(neg_gamma_dist(0.5, 1.0), neg_gamma_dist(0.5, 1.0),
                                              neg_gamma_dist(1.0, 1.0), Association::Positive);
    const HFunction between = convolution_pair(neg_gamma_dist(0.5, 1.0), neg_gamma_dist(0.5, 1.0),
                                               neg_gamma_dist(1.0, 1.0), Association::Negative);
    for (int i = 1; i <= K; ++i)
        for (int j = i; j <= K; ++j)
            spec.pairs.push_back(i == j ? PairGen{within, sigma, uniform_dist(0.0, 150.0)}
                                        : PairGen{between, sigma, uniform_dist(0.0, 100.0)});
    spec.psi_iid = false;
    for (int c = 0; c < K; ++c) {
        std::vector<double> grid(npc);
        for (int k = 0; k < npc; ++k) grid[k] = (k + 1) / (npc + 1.0);
        spec.psi_grid.push_back(grid);
    }
    return spec;
}

WeightedNetwork iid_network(int n, std::uint64_t seed) {
    CounterRng rng(seed);
    Matrix w = Matrix::Zero(n, n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) w(u, v) = w(v, u) = rng.normal();
    return {w, std::nullopt};
}

}  // namespace

TEST_CASE("node-community correlation worked values") {
    Matrix w = Matrix::Zero(5, 5);
    w(0, 1) = w(1, 0) = 1.0;
    for (int v = 2; v < 5; ++v) {
        w(0, v) = w(v, 0) = v;
        w(1, v) = w(v, 1) = 2.0 * v;
    }
    w(2, 3) = w(3, 2) = w(2, 4) = w(4, 2) = w(3, 4) = w(4, 3) = 0.5;
    WeightedNetwork net{w, std::nullopt};
    CommunityAssignment a;
    a.K = 2;
    a.labels = {1, 1, 2, 2, 2};
    CHECK(node_community_correlation(net, a, 0, 2) == doctest::Approx(1.0).epsilon(1e-12));

    // reversing the node's own weights flips the sign
    Matrix flip = w;
    for (int v = 2; v < 5; ++v) flip(0, v) = flip(v, 0) = 10.0 - v;
    CHECK(node_community_correlation({flip, std::nullopt}, a, 0, 2) ==
          doctest::Approx(-1.0).epsilon(1e-12));

    // a constant row carries no signal
    Matrix constant = w;
    for (int v = 2; v < 5; ++v) constant(0, v) = constant(v, 0) = 7.0;
    CHECK(node_community_correlation({constant, std::nullopt}, a, 0, 2) == 0.0);
}

TEST_CASE("cluster measure on a perfectly linear two-community network") {
    const int npc = 12;
    CommunityAssignment a;
    a.K = 2;
    std::vector<double> psi(2 * npc);
    for (int u = 0; u < 2 * npc; ++u) {
        a.labels.push_back(u < npc ? 1 : 2);
        psi[u] = ((u % npc) + 1) / (npc + 1.0);
    }
    Matrix w = Matrix::Zero(2 * npc, 2 * npc);
    for (int u = 0; u < 2 * npc; ++u) {
        for (int v = u + 1; v < 2 * npc; ++v) {
            const bool within = a.labels[u] == a.labels[v];
            w(u, v) = w(v, u) = psi[u] + psi[v] + (within ? 0.0 : 10.0);
        }
    }
    const WeightedNetwork net{w, std::nullopt};
    const ClusterScore score = measure_l(net, a);
    // two within terms of 1 * (10*10*2) and two between terms of 1 * (10*10)
    CHECK(score.L == doctest::Approx(600.0).epsilon(1e-4));
    REQUIRE(score.terms.size() == 4);
    double sum = 0.0;
    for (const PairTerm& t : score.terms) {
        CHECK(t.mean_c == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(t.term == doctest::Approx(t.mean_c * (1.0 - std::sqrt(t.sd_c)) * t.size_factor));
        sum += t.term;
    }
    CHECK(sum == doctest::Approx(score.L));
}

TEST_CASE("cluster measure invariances") {
    const GeneratorSpec spec = benchmark_spec(2, 12, 0.2);
    const WeightedNetwork net = generate(spec, 7).net;
    const double base = measure_l(net, spec.assignment).L;

    // label renumbering
    CommunityAssignment swapped = spec.assignment;
    for (int& l : swapped.labels) l = 3 - l;
    CHECK(measure_l(net, swapped).L == doctest::Approx(base).epsilon(1e-9));

    // node permutation
    const int n = net.n();
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    CounterRng rng(3);
    for (int u = n - 1; u > 0; --u)
        std::swap(perm[u], perm[static_cast<int>(rng.uniform01() * (u + 1))]);
    Matrix pw(n, n);
    CommunityAssignment pa;
    pa.K = 2;
    pa.labels.resize(n);
    for (int u = 0; u < n; ++u) {
        pa.labels[u] = spec.assignment.labels[perm[u]];
        for (int v = 0; v < n; ++v) pw(u, v) = net.weights(perm[u], perm[v]);
    }
    CHECK(measure_l({pw, std::nullopt}, pa).L == doctest::Approx(base).epsilon(1e-9));

    // communities of size <= 2 contribute nothing
    CommunityAssignment tiny;
    tiny.K = 2;
    tiny.labels = {1, 1, 2, 2};
    Matrix tw = Matrix::Zero(4, 4);
    for (int u = 0; u < 4; ++u)
        for (int v = u + 1; v < 4; ++v) tw(u, v) = tw(v, u) = u + v + 1;
    const ClusterScore tinyScore = measure_l({tw, std::nullopt}, tiny);
    CHECK(tinyScore.L == 0.0);
    for (const PairTerm& t : tinyScore.terms) CHECK(t.term == 0.0);

    // singleton communities only gate their own pairs
    CommunityAssignment lonely = spec.assignment;
    lonely.K = 3;
    lonely.labels.back() = 3;
    const ClusterScore ls = measure_l(net, lonely);
    for (const PairTerm& t : ls.terms)
        if (t.i == 3 || t.j == 3) CHECK(t.size_factor == 0.0);
}

TEST_CASE("greedy agglomeration recovers planted communities") {
    const GeneratorSpec spec = benchmark_spec(2, 16, 0.0);
    const WeightedNetwork net = generate(spec, 2).net;
    const CommunityAssignment found = greedy_communities(net);
    CHECK(adjusted_rand_index(found.labels, spec.assignment.labels) == doctest::Approx(1.0));
}

TEST_CASE("greedy agglomeration collapses a single linear community") {
    CommunityAssignment one;
    one.K = 1;
    one.labels.assign(30, 1);
    LsmPairGen pg;
    pg.gamma = 5.0;
    pg.alpha = 3.0;
    pg.beta = 3.0;
    pg.sigma = 0.5;
    const GeneratedNetwork g = generate_lsm(one, {pg}, 19);
    CHECK(greedy_communities(g.net).K == 1);
}

TEST_CASE("greedy agglomeration never scores below the singleton start") {
    // merges are accepted when the measure does not decrease, so even pure
    // noise coalesces; the guarantee is the score never drops below the
    // all-singleton start of 0
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const WeightedNetwork net = iid_network(30, seed);
        const CommunityAssignment found = greedy_communities(net);
        validate_assignment(found, 30);
        std::vector<int> sizes(found.K, 0);
        for (int l : found.labels) ++sizes[l - 1];
        CHECK(*std::max_element(sizes.begin(), sizes.end()) >= 3);
        CHECK(measure_l(net, found).L >= 0.0);
    }
}

TEST_CASE("spectral clustering recovers planted communities") {
    const GeneratorSpec spec = benchmark_spec(2, 16, 0.0);
    const WeightedNetwork net = generate(spec, 2).net;
    const CommunityAssignment found = spectral_communities(net, 3, 1);
    CHECK(adjusted_rand_index(found.labels, spec.assignment.labels) == doctest::Approx(1.0));
}

TEST_CASE("spectral clustering leaves unstructured networks whole") {
    const WeightedNetwork net = iid_network(30, 1);
    CHECK(spectral_communities(net, 5, 1).K == 1);
}

TEST_CASE("more spectral replicates never lower the achieved score") {
    const GeneratorSpec spec = benchmark_spec(2, 16, 0.4);
    const WeightedNetwork net = generate(spec, 9).net;
    const double one = measure_l(net, spectral_communities(net, 1, 5)).L;
    const double ten = measure_l(net, spectral_communities(net, 10, 5)).L;
    CHECK(ten >= one);
}

TEST_CASE("normalized embedding separates communities") {
    const GeneratorSpec spec = benchmark_spec(2, 16, 0.1);
    const WeightedNetwork net = generate(spec, 4).net;
    const NormalizedEmbedding emb = normalized_embedding(net);
    CHECK(emb.gap_index >= 1);
    CHECK(emb.gap_index <= 4);
    const std::vector<int> found = kmeans_cluster(emb.coordinates, 2, 5, CounterRng(9));
    CHECK(adjusted_rand_index(found, spec.assignment.labels) == doctest::Approx(1.0));
}

TEST_CASE("normalized embedding is permutation-equivariant") {
    const GeneratorSpec spec = benchmark_spec(2, 10, 0.3);
    const WeightedNetwork net = generate(spec, 8).net;
    const int n = net.n();
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    CounterRng rng(5);
    for (int u = n - 1; u > 0; --u)
        std::swap(perm[u], perm[static_cast<int>(rng.uniform01() * (u + 1))]);
    Matrix pw(n, n);
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) pw(u, v) = net.weights(perm[u], perm[v]);

    const NormalizedEmbedding a = normalized_embedding(net);
    const NormalizedEmbedding b = normalized_embedding({pw, std::nullopt});
    REQUIRE(a.gap_index == b.gap_index);
    for (int u = 0; u < n; ++u)
        for (int c = 0; c < a.gap_index; ++c)
            CHECK(b.coordinates(u, c) == doctest::Approx(a.coordinates(perm[u], c)).epsilon(1e-7));
}

TEST_CASE("normalized embedding rejects flat rows") {
    Matrix w = Matrix::Zero(4, 4);
    w(0, 1) = w(1, 0) = 1.0;
    w(0, 2) = w(2, 0) = 2.0;
    w(1, 2) = w(2, 1) = 3.0;
    // node 3's row is identically zero
    CHECK_THROWS_AS(normalized_embedding({w, std::nullopt}), std::invalid_argument);
}
