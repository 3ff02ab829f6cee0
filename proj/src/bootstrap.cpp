#include "socnet/bootstrap.hpp"

#include "socnet/estimator.hpp"
#include "socnet/parallel.hpp"
#include "socnet/rng.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace socnet {

namespace {

// draw from the observed weight multiset (counts included), uniformly
double resample_weight(const EmpiricalCdf& g, CounterRng& rng) {
    std::uint64_t r = rng.uniform_below(static_cast<std::uint64_t>(g.n));
    for (std::size_t k = 0; k < g.values.size(); ++k) {
        const std::uint64_t c = static_cast<std::uint64_t>(g.counts[k]);
        if (r < c) return g.values[k];
        r -= c;
    }
    return g.values.back();
}

}  // namespace

WeightedNetwork bootstrap_replicate(const FittedModel& model, std::uint64_t seed) {
    const CommunityAssignment& a = model.assignment;
    const int n = static_cast<int>(a.labels.size());
    validate_assignment(a, n);
    const int K = a.K;
    const std::size_t pairCount = static_cast<std::size_t>(K * (K + 1) / 2);
    if (model.pairs.size() != pairCount)
        throw std::invalid_argument("bootstrap_replicate: model is missing pair fits");
    const auto members = a.members();
    for (int i = 1; i <= K; ++i)
        for (int j = i; j <= K; ++j) {
            const PairModel& pm = model.pairs[static_cast<std::size_t>(pair_index(i, j, K))];
            const std::size_t nI = members[static_cast<std::size_t>(i - 1)].size();
            const std::size_t nJ = members[static_cast<std::size_t>(j - 1)].size();
            if (pm.psi_i_wrt_j.size() != nI ||
                pm.psi_j_wrt_i.size() != (i == j ? nI : nJ) || pm.g_hat.n == 0)
                throw std::invalid_argument("bootstrap_replicate: pair " + std::to_string(i) +
                                            "," + std::to_string(j) + " is not fitted");
        }

    WeightedNetwork out;
    out.weights = Matrix::Zero(n, n);

    std::vector<std::pair<int, int>> ij;
    ij.reserve(pairCount);
    for (int i = 1; i <= K; ++i)
        for (int j = i; j <= K; ++j) ij.emplace_back(i, j);

    CounterRng root(seed);
    parallel_for(static_cast<int>(pairCount), [&](int p) {
        const auto [i, j] = ij[static_cast<std::size_t>(p)];
        const int pidx = pair_index(i, j, K);
        const PairModel& pm = model.pairs[static_cast<std::size_t>(pidx)];
        const auto& mi = members[static_cast<std::size_t>(i - 1)];
        const auto& mj = members[static_cast<std::size_t>(j - 1)];
        CounterRng rng = root.fork("boot", static_cast<std::uint64_t>(pidx));

        if (pm.spurious) {
            if (i == j) {
                for (std::size_t r = 0; r < mi.size(); ++r)
                    for (std::size_t c = r + 1; c < mi.size(); ++c) {
                        const double w = resample_weight(pm.g_hat, rng);
                        out.weights(mi[r], mi[c]) = w;
                        out.weights(mi[c], mi[r]) = w;
                    }
            } else {
                for (std::size_t r = 0; r < mi.size(); ++r)
                    for (std::size_t c = 0; c < mj.size(); ++c) {
                        const double w = resample_weight(pm.g_hat, rng);
                        out.weights(mi[r], mj[c]) = w;
                        out.weights(mj[c], mi[r]) = w;
                    }
            }
            return;
        }

        const double sigmaB =
            pm.sigma_hat >= kBootstrapSigmaCutoff ? pm.sigma_hat : pm.mse;
        const double s = 1.0 / std::sqrt(1.0 + sigmaB * sigmaB);
        const double t = sigmaB / std::sqrt(1.0 + sigmaB * sigmaB);
        const SurfaceScores ss = surface_scores(pm);
        for (std::size_t e = 0; e < ss.h.size(); ++e) {
            const double eps = rng.normal();
            const double w = nearest_observed_weight(pm.g_hat, s * ss.h[e] + t * eps);
            const int u = mi[static_cast<std::size_t>(ss.us[e])];
            const int v = (i == j ? mi : mj)[static_cast<std::size_t>(ss.vs[e])];
            out.weights(u, v) = w;
            out.weights(v, u) = w;
        }
    });
    return out;
}

}  // namespace socnet
