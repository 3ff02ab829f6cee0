#include "socnet/generator.hpp"

#include "socnet/special.hpp"

#include <cmath>
#include <stdexcept>

namespace socnet {

namespace {

constexpr double kTop = 0.9999999999999999;

double clamp_unit(double v) {
    if (v >= 1.0) return kTop;
    if (v <= 0.0) return 1e-300;
    return v;
}

std::vector<double> draw_psis(const GeneratorSpec& spec, const CounterRng& root) {
    const int n = static_cast<int>(spec.assignment.labels.size());
    std::vector<double> psi(static_cast<std::size_t>(n));
    if (spec.psi_iid) {
        for (int u = 0; u < n; ++u) {
            CounterRng r = root.fork("psi", static_cast<std::uint64_t>(u));
            psi[static_cast<std::size_t>(u)] = r.uniform01();
        }
    } else {
        auto members = spec.assignment.members();
        for (int c = 0; c < spec.assignment.K; ++c) {
            const auto& nodes = members[static_cast<std::size_t>(c)];
            const auto& grid = spec.psi_grid[static_cast<std::size_t>(c)];
            for (std::size_t k = 0; k < nodes.size(); ++k)
                psi[static_cast<std::size_t>(nodes[k])] = grid[k];
        }
    }
    return psi;
}

// canonical edge list of a community pair: within pairs u < v, between pairs
// every (u in lower community i, v in j)
std::vector<std::pair<int, int>> block_edges(const std::vector<int>& mi,
                                             const std::vector<int>& mj, bool within) {
    std::vector<std::pair<int, int>> edges;
    if (within) {
        for (std::size_t a = 0; a < mi.size(); ++a)
            for (std::size_t b = a + 1; b < mi.size(); ++b)
                edges.emplace_back(mi[a], mi[b]);
    } else {
        for (int u : mi)
            for (int v : mj) edges.emplace_back(u, v);
    }
    return edges;
}

}  // namespace

GeneratedNetwork generate(const GeneratorSpec& spec, std::uint64_t seed) {
    validate_spec(spec);
    const int n = static_cast<int>(spec.assignment.labels.size());
    const int K = spec.assignment.K;
    CounterRng root(seed);
    GeneratedNetwork out;
    out.psis = draw_psis(spec, root);
    out.net.weights = Matrix::Zero(n, n);
    BoolMatrix mask(n, n);
    mask.setConstant(false);
    bool anyMissing = false;
    auto members = spec.assignment.members();
    for (int i = 1; i <= K; ++i) {
        for (int j = i; j <= K; ++j) {
            const int pidx = pair_index(i, j, K);
            const PairGen& pg = spec.pairs[static_cast<std::size_t>(pidx)];
            const auto edges = block_edges(members[static_cast<std::size_t>(i - 1)],
                                           members[static_cast<std::size_t>(j - 1)], i == j);
            const double denom = std::sqrt(1.0 + pg.sigma * pg.sigma);
            const double s = 1.0 / denom;
            const double t = pg.sigma / denom;
            CounterRng eps = root.fork("eps", static_cast<std::uint64_t>(pidx));
            for (auto [u, v] : edges) {
                const double h = pg.h.eval(out.psis[static_cast<std::size_t>(u)],
                                           out.psis[static_cast<std::size_t>(v)]);
                const double draw = eps.normal();  // stream stays aligned at sigma 0
                // sigma 0 keeps h bit-exact, as the round trip through
                // normal-score space quantizes near-tied copula values
                double p = h;
                if (pg.sigma > 0.0) p = clamp_unit(normal_cdf(s * normal_quantile(h) + t * draw));
                const double w = pg.marginal.quantile(p);
                out.net.weights(u, v) = w;
                out.net.weights(v, u) = w;
            }
            if (pg.external_noise_sd > 0.0) {
                CounterRng zeta = root.fork("zeta", static_cast<std::uint64_t>(pidx));
                for (auto [u, v] : edges) {
                    const double noise = pg.external_noise_sd * zeta.normal();
                    out.net.weights(u, v) += noise;
                    out.net.weights(v, u) = out.net.weights(u, v);
                }
            }
            if (pg.retention < 1.0) {
                CounterRng keep = root.fork("mask", static_cast<std::uint64_t>(pidx));
                for (auto [u, v] : edges) {
                    if (keep.uniform01() > pg.retention) {
                        mask(u, v) = true;
                        mask(v, u) = true;
                        anyMissing = true;
                    }
                }
            }
        }
    }
    if (anyMissing) out.net.missing = std::move(mask);
    return out;
}

GeneratedNetwork generate_lsm(const CommunityAssignment& assignment,
                              const std::vector<LsmPairGen>& pairs, std::uint64_t seed) {
    const int n = static_cast<int>(assignment.labels.size());
    validate_assignment(assignment, n);
    const int K = assignment.K;
    if (pairs.size() != static_cast<std::size_t>(K * (K + 1) / 2))
        throw std::invalid_argument("generate_lsm: need one pair entry per community pair");
    CounterRng root(seed);
    GeneratedNetwork out;
    out.psis.resize(static_cast<std::size_t>(n));
    for (int u = 0; u < n; ++u) {
        CounterRng r = root.fork("psi", static_cast<std::uint64_t>(u));
        out.psis[static_cast<std::size_t>(u)] = r.uniform01();
    }
    out.net.weights = Matrix::Zero(n, n);
    auto members = assignment.members();
    for (int i = 1; i <= K; ++i) {
        for (int j = i; j <= K; ++j) {
            const int pidx = pair_index(i, j, K);
            const LsmPairGen& pg = pairs[static_cast<std::size_t>(pidx)];
            if (i == j && pg.alpha != pg.beta)
                throw std::invalid_argument(
                    "generate_lsm: within-community pairs need alpha == beta");
            auto h1 = pg.h1 ? pg.h1 : [](double u) { return normal_quantile(u); };
            auto h2 = pg.h2 ? pg.h2 : [](double u) { return normal_quantile(u); };
            auto finv = pg.f_inverse ? pg.f_inverse : [](double w) { return w; };
            const auto edges = block_edges(members[static_cast<std::size_t>(i - 1)],
                                           members[static_cast<std::size_t>(j - 1)], i == j);
            CounterRng eps = root.fork("eps", static_cast<std::uint64_t>(pidx));
            for (auto [u, v] : edges) {
                const double hu = h1(out.psis[static_cast<std::size_t>(u)]);
                const double hv = (i == j ? h1 : h2)(out.psis[static_cast<std::size_t>(v)]);
                const double f = pg.gamma + pg.alpha * hu + pg.beta * hv + pg.sigma * eps.normal();
                const double w = finv(f);
                out.net.weights(u, v) = w;
                out.net.weights(v, u) = w;
            }
        }
    }
    return out;
}

WeightedNetwork sparsify(const WeightedNetwork& net, double retention, std::uint64_t seed) {
    if (retention < 0.0 || retention > 1.0)
        throw std::invalid_argument("sparsify: retention must lie in [0,1]");
    WeightedNetwork out = net;
    const int n = net.n();
    BoolMatrix mask(n, n);
    mask.setConstant(false);
    if (net.missing) mask = *net.missing;
    CounterRng root(seed);
    bool any = net.missing.has_value();
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            CounterRng r = root.fork("mask", static_cast<std::uint64_t>(u) *
                                                     static_cast<std::uint64_t>(n) +
                                                 static_cast<std::uint64_t>(v));
            if (r.uniform01() > retention) {
                mask(u, v) = true;
                mask(v, u) = true;
                any = true;
            }
        }
    if (any) out.missing = std::move(mask);
    return out;
}

WeightedNetwork add_external_noise(const WeightedNetwork& net, double sd, std::uint64_t seed) {
    if (sd < 0.0) throw std::invalid_argument("add_external_noise: sd must be nonnegative");
    WeightedNetwork out = net;
    if (sd == 0.0) return out;
    const int n = net.n();
    CounterRng root(seed);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            if (out.is_missing(u, v)) continue;
            CounterRng r = root.fork("zeta", static_cast<std::uint64_t>(u) *
                                                     static_cast<std::uint64_t>(n) +
                                                 static_cast<std::uint64_t>(v));
            const double noise = sd * r.normal();
            out.weights(u, v) += noise;
            out.weights(v, u) = out.weights(u, v);
        }
    return out;
}

}  // namespace socnet
