#include "socnet/community.hpp"

#include "socnet/parallel.hpp"
#include "socnet/rng.hpp"
#include "socnet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

namespace socnet {

namespace {

// d_i(v) over v in community j: total weight from community i into v,
// skipping v's own (zero) self loop when v sits in i
std::vector<double> community_pull(const WeightedNetwork& net, const std::vector<int>& mi,
                                   const std::vector<int>& mj) {
    std::vector<double> d(mj.size(), 0.0);
    for (std::size_t k = 0; k < mj.size(); ++k) {
        const int v = mj[k];
        double s = 0.0;
        for (int u : mi)
            if (u != v) s += net.weights(u, v);
        d[k] = s;
    }
    return d;
}

double correlation_with_pull(const WeightedNetwork& net, const std::vector<double>& d,
                             const std::vector<int>& mj, int u) {
    std::vector<double> x, y;
    x.reserve(mj.size());
    y.reserve(mj.size());
    for (std::size_t k = 0; k < mj.size(); ++k) {
        if (mj[k] == u) continue;
        x.push_back(d[k]);
        y.push_back(net.weights(u, mj[k]));
    }
    if (x.size() < 2)
        throw std::invalid_argument("node_community_correlation: fewer than two partners");
    return pearson(x, y);
}

}  // namespace

double node_community_correlation(const WeightedNetwork& net, const CommunityAssignment& a,
                                  int u, int j) {
    validate_assignment(a, net.n());
    if (u < 0 || u >= net.n())
        throw std::invalid_argument("node_community_correlation: node out of range");
    if (j < 1 || j > a.K)
        throw std::invalid_argument("node_community_correlation: community out of range");
    const auto members = a.members();
    const int i = a.labels[static_cast<std::size_t>(u)];
    const auto& mi = members[static_cast<std::size_t>(i - 1)];
    const auto& mj = members[static_cast<std::size_t>(j - 1)];
    const std::vector<double> d = community_pull(net, mi, mj);
    return correlation_with_pull(net, d, mj, u);
}

ClusterScore measure_l(const WeightedNetwork& net, const CommunityAssignment& a) {
    validate_assignment(a, net.n());
    const auto members = a.members();
    ClusterScore score;
    for (int i = 1; i <= a.K; ++i) {
        for (int j = i; j <= a.K; ++j) {
            const auto& mi = members[static_cast<std::size_t>(i - 1)];
            const auto& mj = members[static_cast<std::size_t>(j - 1)];
            const double fi = std::max(0, static_cast<int>(mi.size()) - 2);
            const double fj = std::max(0, static_cast<int>(mj.size()) - 2);
            const int copies = i == j ? 1 : 2;  // ordered pairs: (i,j) and (j,i)
            for (int c = 0; c < copies; ++c) {
                PairTerm t;
                t.i = c == 0 ? i : j;
                t.j = c == 0 ? j : i;
                t.size_factor = fi * fj * (i == j ? 2.0 : 1.0);
                if (t.size_factor > 0.0) {
                    const auto& mu = c == 0 ? mi : mj;  // C over u in the first label
                    const auto& mv = c == 0 ? mj : mi;
                    const std::vector<double> d = community_pull(net, mu, mv);
                    std::vector<double> cvals(mu.size());
                    for (std::size_t k = 0; k < mu.size(); ++k)
                        cvals[k] = correlation_with_pull(net, d, mv, mu[k]);
                    t.mean_c = mean(cvals);
                    t.sd_c = sample_sd(cvals);
                    t.term = t.mean_c * (1.0 - std::sqrt(t.sd_c)) * t.size_factor;
                }
                score.L += t.term;
                score.terms.push_back(t);
            }
        }
    }
    return score;
}

namespace {

CommunityAssignment labels_to_assignment(const std::vector<int>& raw) {
    CommunityAssignment a;
    a.labels.resize(raw.size());
    std::map<int, int> renumber;
    for (std::size_t u = 0; u < raw.size(); ++u) {
        auto [it, fresh] = renumber.try_emplace(raw[u], static_cast<int>(renumber.size()) + 1);
        a.labels[u] = it->second;
        (void)fresh;
    }
    a.K = static_cast<int>(renumber.size());
    return a;
}

double labels_measure(const WeightedNetwork& net, const std::vector<int>& raw) {
    return measure_l(net, labels_to_assignment(raw)).L;
}

double column_correlation(const Vector& x, const Vector& y) {
    std::vector<double> a(x.data(), x.data() + x.size());
    std::vector<double> b(y.data(), y.data() + y.size());
    return pearson(a, b);
}

}  // namespace

CommunityAssignment greedy_communities(const WeightedNetwork& net) {
    const int n = net.n();
    if (n < 2) throw std::invalid_argument("greedy_communities: need at least two nodes");
    std::vector<int> labels(static_cast<std::size_t>(n));
    std::map<int, Vector> aggregate;  // community id -> summed weight column
    for (int u = 0; u < n; ++u) {
        labels[static_cast<std::size_t>(u)] = u;
        aggregate.emplace(u, net.weights.col(u));
    }
    double currentL = labels_measure(net, labels);

    auto merge_into = [&](int A, int B) {
        for (int& l : labels)
            if (l == B) l = A;
        aggregate.at(A) += aggregate.at(B);
        aggregate.erase(B);
    };

    while (aggregate.size() > 1) {
        const std::vector<int> roundStart = labels;

        // visit order fixed at round start: decreasing aggregate degree
        std::deque<int> queue;
        {
            std::vector<std::pair<double, int>> order;
            for (const auto& [id, col] : aggregate) order.emplace_back(-col.sum(), id);
            std::stable_sort(order.begin(), order.end(),
                             [](const auto& a, const auto& b) { return a.first < b.first; });
            for (const auto& [negSum, id] : order) queue.push_back(id);
        }

        while (!queue.empty() && aggregate.size() > 1) {
            const int A = queue.front();
            int B = -1;
            double bestCorr = -std::numeric_limits<double>::infinity();
            for (const auto& [id, col] : aggregate) {
                if (id == A) continue;
                const double c = column_correlation(aggregate.at(A), col);
                if (c > bestCorr) {
                    bestCorr = c;
                    B = id;
                }
            }
            std::vector<int> merged = labels;
            for (int& l : merged)
                if (l == B) l = A;
            const double mergedL = labels_measure(net, merged);
            if (mergedL >= currentL) {
                merge_into(A, B);
                currentL = mergedL;
                for (int& q : queue)
                    if (q == B) q = A;  // the merge inherits B's visit slots
            }
            queue.pop_front();
        }

        if (aggregate.size() == 1) break;
        if (labels != roundStart) continue;

        // mergeless round: one sweep over every pair by decreasing correlation
        std::vector<std::tuple<double, int, int>> pairs;
        for (auto itA = aggregate.begin(); itA != aggregate.end(); ++itA)
            for (auto itB = std::next(itA); itB != aggregate.end(); ++itB)
                pairs.emplace_back(-column_correlation(itA->second, itB->second),
                                   itA->first, itB->first);
        std::stable_sort(pairs.begin(), pairs.end());
        bool sweepMerged = false;
        for (const auto& [negCorr, A, B] : pairs) {
            std::vector<int> merged = labels;
            for (int& l : merged)
                if (l == B) l = A;
            const double mergedL = labels_measure(net, merged);
            if (mergedL >= currentL) {
                merge_into(A, B);
                currentL = mergedL;
                sweepMerged = true;
                break;
            }
        }
        if (!sweepMerged) break;
    }
    return labels_to_assignment(labels);
}

namespace {

// squared row distances with both self coordinates dropped; the zero
// diagonal otherwise injects 2*W_uv^2 of artificial separation
Matrix excluded_sq_distances(const Matrix& w) {
    const Eigen::Index n = w.rows();
    Matrix d2 = Matrix::Zero(n, n);
    for (Eigen::Index u = 0; u < n; ++u)
        for (Eigen::Index v = u + 1; v < n; ++v) {
            const double full = (w.row(u) - w.row(v)).squaredNorm();
            const double d = std::max(0.0, full - 2.0 * w(u, v) * w(u, v));
            d2(u, v) = d;
            d2(v, u) = d;
        }
    return d2;
}

}  // namespace

CommunityAssignment spectral_communities(const WeightedNetwork& net, int replicates,
                                         std::uint64_t seed) {
    const int n = net.n();
    if (n < 3) throw std::invalid_argument("spectral_communities: need at least three nodes");
    if (replicates < 1)
        throw std::invalid_argument("spectral_communities: need at least one replicate");

    const Matrix d2 = excluded_sq_distances(net.weights);
    std::vector<double> dists;
    dists.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) dists.push_back(std::sqrt(d2(u, v)));
    std::sort(dists.begin(), dists.end());
    const std::size_t m = dists.size();
    const double median =
        m % 2 == 1 ? dists[m / 2] : 0.5 * (dists[m / 2 - 1] + dists[m / 2]);
    const double sigma = median / 4.0;

    std::vector<int> allOne(static_cast<std::size_t>(n), 1);
    if (!(sigma > 0.0)) {
        CommunityAssignment a;
        a.labels = allOne;
        a.K = 1;
        return a;  // indistinguishable rows: nothing to separate
    }

    Matrix affinity(n, n);
    for (int u = 0; u < n; ++u) {
        affinity(u, u) = 0.0;
        for (int v = u + 1; v < n; ++v) {
            const double a = std::exp(-d2(u, v) / (2.0 * sigma * sigma));
            affinity(u, v) = a;
            affinity(v, u) = a;
        }
    }
    Vector deg = affinity.rowwise().sum();
    Vector invSqrt(n);
    for (int u = 0; u < n; ++u) invSqrt[u] = 1.0 / std::sqrt(deg[u]);
    Matrix laplacian = invSqrt.asDiagonal() * affinity * invSqrt.asDiagonal();

    Eigen::SelfAdjointEigenSolver<Matrix> es(laplacian);
    const Matrix& vecs = es.eigenvectors();  // eigenvalues ascending

    CounterRng root(seed);
    std::vector<int> bestPrev = allOne;
    double goodnessPrev = measure_l(net, labels_to_assignment(allOne)).L;

    for (int k = 2; k <= n; ++k) {
        Matrix embed = vecs.rightCols(k);
        for (int u = 0; u < n; ++u) {
            const double norm = embed.row(u).norm();
            if (norm > 0.0) embed.row(u) /= norm;
        }
        CounterRng kRng = root.fork("spectral", static_cast<std::uint64_t>(k));
        std::vector<std::vector<int>> reps(static_cast<std::size_t>(replicates));
        std::vector<double> repL(static_cast<std::size_t>(replicates));
        parallel_for(replicates, [&](int r) {
            CounterRng rng = kRng.fork("rep", static_cast<std::uint64_t>(r));
            std::vector<int> labels = kmeans_cluster(embed, k, 10, rng);
            repL[static_cast<std::size_t>(r)] = labels_measure(net, labels);
            reps[static_cast<std::size_t>(r)] = std::move(labels);
        });
        int bestRep = 0;
        for (int r = 1; r < replicates; ++r)
            if (repL[static_cast<std::size_t>(r)] > repL[static_cast<std::size_t>(bestRep)])
                bestRep = r;
        const double goodness = repL[static_cast<std::size_t>(bestRep)];
        if (!(goodness > goodnessPrev)) break;
        goodnessPrev = goodness;
        bestPrev = reps[static_cast<std::size_t>(bestRep)];
    }
    return labels_to_assignment(bestPrev);
}

NormalizedEmbedding normalized_embedding(const WeightedNetwork& net) {
    const int n = net.n();
    if (n < 3) throw std::invalid_argument("normalized_embedding: need at least three nodes");
    Matrix normed(n, n);
    for (int u = 0; u < n; ++u) {
        std::vector<double> row(static_cast<std::size_t>(n));
        for (int v = 0; v < n; ++v) row[static_cast<std::size_t>(v)] = net.weights(u, v);
        const double m = mean(row);
        const double sd = sample_sd(row);
        if (!(sd > 0.0))
            throw std::invalid_argument("normalized_embedding: zero-variance row at node " +
                                        std::to_string(u));
        for (int v = 0; v < n; ++v) normed(u, v) = (net.weights(u, v) - m) / sd;
    }
    const EigenPairs ep = eigen_real_parts(normed);
    int gapIndex = 1;
    double bestGap = -std::numeric_limits<double>::infinity();
    for (int i = 0; i + 1 < n; ++i) {
        const double gap = std::fabs(ep.values[static_cast<std::size_t>(i)].real()) -
                           std::fabs(ep.values[static_cast<std::size_t>(i + 1)].real());
        if (gap > bestGap) {
            bestGap = gap;
            gapIndex = i + 1;
        }
    }
    NormalizedEmbedding out;
    out.gap_index = gapIndex;
    out.coordinates = ep.vectors_real.leftCols(gapIndex);
    return out;
}

}  // namespace socnet
