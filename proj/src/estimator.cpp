#include "socnet/estimator.hpp"

#include "socnet/parallel.hpp"
#include "socnet/special.hpp"
#include "socnet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace socnet {

std::vector<double> rank_levels(const std::vector<double>& x) {
    const EmpiricalCdf e = empirical_cdf(x);
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = e.level_of(x[i]);
    return out;
}

Matrix impute_diagonal(const Matrix& block) {
    const Eigen::Index n = block.rows();
    if (block.cols() != n) throw std::invalid_argument("impute_diagonal: block not square");
    if (n < 3) throw std::invalid_argument("impute_diagonal: need at least 3 nodes");
    Vector rowSums = Vector::Zero(n);
    for (Eigen::Index u = 0; u < n; ++u)
        for (Eigen::Index v = 0; v < n; ++v)
            if (v != u) rowSums[u] += block(u, v);
    const double total = rowSums.sum();
    Matrix out = block;
    for (Eigen::Index u = 0; u < n; ++u) {
        const double inner = total - 2.0 * rowSums[u];  // ordered pairs avoiding u
        out(u, u) = (2.0 * rowSums[u] - inner / static_cast<double>(n - 2)) /
                    static_cast<double>(n - 1);
    }
    return out;
}

namespace {

constexpr double kTop = 0.9999999999999999;

double clamp_unit(double v) {
    if (v >= 1.0) return kTop;
    if (v <= 0.0) return 1e-300;
    return v;
}

struct EdgeSet {
    std::vector<int> us, vs;  // row-side and column-side indices
    std::vector<double> w;
};

EdgeSet collect_edges(const Block& b) {
    EdgeSet e;
    const int rows = static_cast<int>(b.w.rows());
    const int cols = static_cast<int>(b.w.cols());
    auto masked = [&](int u, int v) { return b.mask && (*b.mask)(u, v); };
    if (b.within) {
        for (int u = 0; u < rows; ++u)
            for (int v = u + 1; v < rows; ++v) {
                if (masked(u, v)) continue;
                e.us.push_back(u);
                e.vs.push_back(v);
                e.w.push_back(b.w(u, v));
            }
    } else {
        for (int u = 0; u < rows; ++u)
            for (int v = 0; v < cols; ++v) {
                if (masked(u, v)) continue;
                e.us.push_back(u);
                e.vs.push_back(v);
                e.w.push_back(b.w(u, v));
            }
    }
    return e;
}

std::pair<bool, bool> assoc_flips(Association a) {
    switch (a) {
        case Association::Positive: return {false, false};
        case Association::Negative: return {true, true};
        case Association::SimpsonX: return {true, false};
        case Association::SimpsonY: return {false, true};
    }
    throw std::logic_error("assoc_flips: unknown association");
}

// surface values over an edge set, computed with per-side transform caches
std::vector<double> candidate_surface(const HFunction& h, const std::vector<double>& psiU,
                                      const std::vector<double>& psiV, const EdgeSet& edges) {
    auto [flipX, flipY] = assoc_flips(h.association);
    const std::size_t nU = psiU.size(), nV = psiV.size();
    std::vector<double> ax(nU), by(nV);
    std::vector<double> out(edges.w.size());
    switch (h.construction) {
        case HConstruction::NormalRho: {
            for (std::size_t u = 0; u < nU; ++u)
                ax[u] = normal_quantile(flipX ? 1.0 - psiU[u] : psiU[u]);
            for (std::size_t v = 0; v < nV; ++v)
                by[v] = h.rho * normal_quantile(flipY ? 1.0 - psiV[v] : psiV[v]);
            const double denom = std::sqrt(1.0 + h.rho * h.rho);
            for (std::size_t e = 0; e < out.size(); ++e)
                out[e] = clamp_unit(normal_cdf(
                    (ax[static_cast<std::size_t>(edges.us[e])] +
                     by[static_cast<std::size_t>(edges.vs[e])]) / denom));
            return out;
        }
        case HConstruction::ConvolutionPair: {
            for (std::size_t u = 0; u < nU; ++u)
                ax[u] = h.f1.quantile(flipX ? 1.0 - psiU[u] : psiU[u]);
            for (std::size_t v = 0; v < nV; ++v)
                by[v] = h.f2.quantile(flipY ? 1.0 - psiV[v] : psiV[v]);
            for (std::size_t e = 0; e < out.size(); ++e)
                out[e] = clamp_unit(h.f12.cdf(ax[static_cast<std::size_t>(edges.us[e])] +
                                              by[static_cast<std::size_t>(edges.vs[e])]));
            return out;
        }
        case HConstruction::Projection: {
            for (std::size_t u = 0; u < nU; ++u) ax[u] = flipX ? 1.0 - psiU[u] : psiU[u];
            for (std::size_t v = 0; v < nV; ++v) by[v] = flipY ? 1.0 - psiV[v] : psiV[v];
            for (std::size_t e = 0; e < out.size(); ++e)
                out[e] = h.axis == 1 ? ax[static_cast<std::size_t>(edges.us[e])]
                                     : by[static_cast<std::size_t>(edges.vs[e])];
            return out;
        }
    }
    throw std::logic_error("candidate_surface: unknown construction");
}

struct CandidateScore {
    double s = 1.0;
    double objective = std::numeric_limits<double>::infinity();
};

// closed-form scale fit in normal-score space against rank-calibrated
// candidate scores
CandidateScore score_candidate(const std::vector<double>& g, const std::vector<double>& surface) {
    const std::vector<double> levels = rank_levels(surface);
    double sgh = 0.0, shh = 0.0;
    std::vector<double> ht(levels.size());
    for (std::size_t e = 0; e < levels.size(); ++e) {
        ht[e] = normal_quantile(levels[e]);
        sgh += g[e] * ht[e];
        shh += ht[e] * ht[e];
    }
    CandidateScore out;
    out.s = shh > 0.0 ? std::clamp(sgh / shh, 1e-8, 1.0) : 1e-8;
    double obj = 0.0;
    for (std::size_t e = 0; e < g.size(); ++e) {
        const double d = g[e] - out.s * ht[e];
        obj += d * d;
    }
    out.objective = obj;
    return out;
}

SociabilityStats make_stats(const std::vector<double>& d, const std::vector<int>& counts) {
    SociabilityStats s;
    s.d = d;
    s.psi_hat.assign(d.size(), 0.5);
    s.degenerate.assign(d.size(), 0);
    std::vector<double> active;
    std::vector<std::size_t> idx;
    for (std::size_t u = 0; u < d.size(); ++u) {
        if (counts[u] > 0) {
            active.push_back(d[u]);
            idx.push_back(u);
        } else {
            s.degenerate[u] = 1;
        }
    }
    if (!active.empty()) {
        const std::vector<double> levels = rank_levels(active);
        for (std::size_t k = 0; k < idx.size(); ++k) s.psi_hat[idx[k]] = levels[k];
    }
    return s;
}

}  // namespace

std::pair<SociabilityStats, SociabilityStats> block_sociability(const Block& b) {
    const EdgeSet edges = collect_edges(b);
    if (edges.w.empty()) throw std::invalid_argument("block_sociability: no present edges");
    const EmpiricalCdf ghat = empirical_cdf(edges.w);
    const std::size_t nI = static_cast<std::size_t>(b.w.rows());
    const std::size_t nJ = b.within ? nI : static_cast<std::size_t>(b.w.cols());
    std::vector<double> dI(nI, 0.0), dJ(nJ, 0.0);
    std::vector<int> cI(nI, 0), cJ(nJ, 0);
    for (std::size_t e = 0; e < edges.w.size(); ++e) {
        const double score = normal_quantile(ghat.level_of(edges.w[e]));
        const std::size_t u = static_cast<std::size_t>(edges.us[e]);
        const std::size_t v = static_cast<std::size_t>(edges.vs[e]);
        if (b.within) {
            dI[u] += score;
            dI[v] += score;
            cI[u]++;
            cI[v]++;
        } else {
            dI[u] += score;
            dJ[v] += score;
            cI[u]++;
            cJ[v]++;
        }
    }
    SociabilityStats si = make_stats(dI, cI);
    SociabilityStats sj = b.within ? si : make_stats(dJ, cJ);
    return {std::move(si), std::move(sj)};
}

Block extract_block(const WeightedNetwork& net, const CommunityAssignment& a, int i, int j) {
    validate_assignment(a, net.n());
    if (i > j) std::swap(i, j);
    auto members = a.members();
    const auto& mi = members[static_cast<std::size_t>(i - 1)];
    const auto& mj = members[static_cast<std::size_t>(j - 1)];
    Block b;
    b.within = i == j;
    const int rows = static_cast<int>(mi.size());
    const int cols = b.within ? rows : static_cast<int>(mj.size());
    b.w = Matrix::Zero(rows, cols);
    BoolMatrix mask(rows, cols);
    mask.setConstant(false);
    bool any = false;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const int u = mi[static_cast<std::size_t>(r)];
            const int v = b.within ? mi[static_cast<std::size_t>(c)] : mj[static_cast<std::size_t>(c)];
            b.w(r, c) = net.weights(u, v);
            if (u != v && net.is_missing(u, v)) {
                mask(r, c) = true;
                any = true;
            }
        }
    }
    if (any) b.mask = std::move(mask);
    return b;
}

std::pair<SociabilityStats, SociabilityStats> local_sociability(const WeightedNetwork& net,
                                                                const CommunityAssignment& a,
                                                                int i, int j) {
    return block_sociability(extract_block(net, a, i, j));
}

namespace {

double candidate_objective(const HFunction& h, const std::vector<double>& g,
                           const std::vector<double>& psiU, const std::vector<double>& psiV,
                           const EdgeSet& edges, CandidateScore* fit) {
    const std::vector<double> surface = candidate_surface(h, psiU, psiV, edges);
    const CandidateScore sc = score_candidate(g, surface);
    if (fit) *fit = sc;
    return sc.objective;
}

}  // namespace

std::vector<HFunction> default_candidates() {
    std::vector<HFunction> out;
    static const Association assocs[] = {Association::Positive, Association::Negative,
                                         Association::SimpsonX, Association::SimpsonY};
    for (const CatalogEntry& entry : h_catalog())
        for (Association a : assocs) {
            HFunction h = entry.h;
            h.association = a;
            out.push_back(std::move(h));
        }
    return out;
}

PairModel fit_h_normal_nsm(const Block& block, const std::vector<HFunction>& candidates) {
    if (candidates.empty())
        throw std::invalid_argument("fit_h_normal_nsm: empty candidate list");
    const EdgeSet edges = collect_edges(block);
    if (edges.w.empty()) throw std::invalid_argument("fit_h_normal_nsm: no present edges");
    auto [si, sj] = block_sociability(block);
    const EmpiricalCdf ghat = empirical_cdf(edges.w);
    std::vector<double> g(edges.w.size());
    for (std::size_t e = 0; e < edges.w.size(); ++e)
        g[e] = normal_quantile(ghat.level_of(edges.w[e]));
    const std::vector<double>& psiU = si.psi_hat;
    const std::vector<double>& psiV = block.within ? si.psi_hat : sj.psi_hat;

    std::size_t bestIdx = 0;
    CandidateScore best;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        CandidateScore sc;
        candidate_objective(candidates[c], g, psiU, psiV, edges, &sc);
        if (sc.objective < best.objective) {
            best = sc;
            bestIdx = c;
        }
    }
    HFunction selected = candidates[bestIdx];

    if (selected.construction == HConstruction::NormalRho) {
        // one golden-section pass over the best grid bracket
        const std::vector<double> grid = normal_rho_grid();
        std::size_t gi = 0;
        double gd = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const double d = std::fabs(grid[k] - selected.rho);
            if (d < gd) {
                gd = d;
                gi = k;
            }
        }
        double lo = grid[gi > 0 ? gi - 1 : 0];
        double hi = grid[gi + 1 < grid.size() ? gi + 1 : grid.size() - 1];
        if (hi > lo) {
            const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
            auto probe = [&](double rho, CandidateScore* sc) {
                HFunction h = selected;
                h.rho = rho;
                return candidate_objective(h, g, psiU, psiV, edges, sc);
            };
            double x1 = hi - invphi * (hi - lo);
            double x2 = lo + invphi * (hi - lo);
            CandidateScore s1, s2;
            double f1 = probe(x1, &s1), f2 = probe(x2, &s2);
            double bestRho = f1 < f2 ? x1 : x2;
            CandidateScore bestSc = f1 < f2 ? s1 : s2;
            double bestVal = std::min(f1, f2);
            for (int it = 0; it < 40 && hi - lo > 1e-6 * (1.0 + hi); ++it) {
                if (f1 < f2) {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    s2 = s1;
                    x1 = hi - invphi * (hi - lo);
                    f1 = probe(x1, &s1);
                } else {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    s1 = s2;
                    x2 = lo + invphi * (hi - lo);
                    f2 = probe(x2, &s2);
                }
                if (f1 < bestVal) {
                    bestVal = f1;
                    bestRho = x1;
                    bestSc = s1;
                }
                if (f2 < bestVal) {
                    bestVal = f2;
                    bestRho = x2;
                    bestSc = s2;
                }
            }
            if (bestVal < best.objective) {
                selected.rho = bestRho;
                best = bestSc;
            }
        }
    }

    PairModel pm;
    pm.g_hat = ghat;
    pm.h_hat = selected;
    pm.sigma_hat = std::sqrt(std::max(0.0, 1.0 / (best.s * best.s) - 1.0));
    pm.psi_i_wrt_j = si.psi_hat;
    pm.psi_j_wrt_i = block.within ? si.psi_hat : sj.psi_hat;
    pm.mse = best.objective / static_cast<double>(edges.w.size());
    pm.spurious = false;
    pm.within = block.within;
    return pm;
}

namespace {

// observed weight whose normal score is nearest the target; ties toward the
// smaller weight
double nearest_weight(const EmpiricalCdf& ghat, const std::vector<double>& scores,
                      double target) {
    auto it = std::lower_bound(scores.begin(), scores.end(), target);
    if (it == scores.begin()) return ghat.values.front();
    if (it == scores.end()) return ghat.values.back();
    const std::size_t hiIdx = static_cast<std::size_t>(it - scores.begin());
    const std::size_t loIdx = hiIdx - 1;
    const double dLo = target - scores[loIdx];
    const double dHi = scores[hiIdx] - target;
    return dHi < dLo ? ghat.values[hiIdx] : ghat.values[loIdx];
}

std::vector<double> ghat_scores(const EmpiricalCdf& ghat) {
    std::vector<double> scores(ghat.levels.size());
    for (std::size_t k = 0; k < scores.size(); ++k) scores[k] = normal_quantile(ghat.levels[k]);
    return scores;
}

double median_weight(const EmpiricalCdf& ghat, const std::vector<double>& scores) {
    return nearest_weight(ghat, scores, 0.0);
}

EdgeSet full_edge_set(std::size_t nU, std::size_t nV, bool within) {
    Block b;
    b.within = within;
    b.w = Matrix::Zero(static_cast<Eigen::Index>(nU),
                       static_cast<Eigen::Index>(within ? nU : nV));
    return collect_edges(b);
}

}  // namespace

SurfaceScores surface_scores(const PairModel& pair) {
    const std::size_t nU = pair.psi_i_wrt_j.size();
    const std::size_t nV = pair.within ? nU : pair.psi_j_wrt_i.size();
    EdgeSet edges = full_edge_set(nU, nV, pair.within);
    const std::vector<double> surface =
        candidate_surface(pair.h_hat, pair.psi_i_wrt_j,
                          pair.within ? pair.psi_i_wrt_j : pair.psi_j_wrt_i, edges);
    const std::vector<double> levels = rank_levels(surface);
    SurfaceScores out;
    out.us = std::move(edges.us);
    out.vs = std::move(edges.vs);
    out.h.resize(levels.size());
    for (std::size_t e = 0; e < levels.size(); ++e) out.h[e] = normal_quantile(levels[e]);
    return out;
}

double nearest_observed_weight(const EmpiricalCdf& g_hat, double target) {
    return nearest_weight(g_hat, ghat_scores(g_hat), target);
}

Matrix smooth_block(const PairModel& pair) {
    const std::size_t nU = pair.psi_i_wrt_j.size();
    const std::size_t nV = pair.within ? nU : pair.psi_j_wrt_i.size();
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(nU), static_cast<Eigen::Index>(nV));
    const std::vector<double> scores = ghat_scores(pair.g_hat);
    if (pair.spurious) {
        const double med = median_weight(pair.g_hat, scores);
        for (Eigen::Index u = 0; u < out.rows(); ++u)
            for (Eigen::Index v = 0; v < out.cols(); ++v)
                out(u, v) = (pair.within && u == v) ? 0.0 : med;
        return out;
    }
    const SurfaceScores ss = surface_scores(pair);
    const double s = 1.0 / std::sqrt(1.0 + pair.sigma_hat * pair.sigma_hat);
    for (std::size_t e = 0; e < ss.h.size(); ++e) {
        const double w = nearest_weight(pair.g_hat, scores, s * ss.h[e]);
        out(ss.us[e], ss.vs[e]) = w;
        if (pair.within) out(ss.vs[e], ss.us[e]) = w;
    }
    return out;
}

double smooth_estimate(const PairModel& pair, int u, int v) {
    if (pair.within && u == v) return 0.0;
    const Matrix block = smooth_block(pair);
    return block(u, v);
}

double normal_space_mse(const PairModel& pair, const Block& block) {
    const EdgeSet edges = collect_edges(block);
    if (edges.w.empty()) throw std::invalid_argument("normal_space_mse: no present edges");
    const std::vector<double> surface =
        candidate_surface(pair.h_hat, pair.psi_i_wrt_j,
                          pair.within ? pair.psi_i_wrt_j : pair.psi_j_wrt_i, edges);
    const std::vector<double> levels = rank_levels(surface);
    const double s = 1.0 / std::sqrt(1.0 + pair.sigma_hat * pair.sigma_hat);
    double obj = 0.0;
    for (std::size_t e = 0; e < edges.w.size(); ++e) {
        const double g = normal_quantile(pair.g_hat.level_at(edges.w[e]));
        const double d = g - s * normal_quantile(levels[e]);
        obj += d * d;
    }
    return obj / static_cast<double>(edges.w.size());
}

namespace {

std::vector<HFunction> family_constrained_candidates(const HFunction& h) {
    static const Association assocs[] = {Association::Positive, Association::Negative,
                                         Association::SimpsonX, Association::SimpsonY};
    std::vector<HFunction> out;
    switch (h.construction) {
        case HConstruction::NormalRho:
            for (double rho : normal_rho_grid())
                for (Association a : assocs) out.push_back(normal_rho(rho, a));
            break;
        case HConstruction::ConvolutionPair:
            for (Association a : assocs)
                out.push_back(convolution_pair(h.f1, h.f2, h.f12, a));
            break;
        case HConstruction::Projection:
            for (int axis : {1, 2})
                for (Association a : assocs) out.push_back(projection(axis, a));
            break;
    }
    return out;
}

}  // namespace

bool spurious_screen(const PairModel& pair, const Block& block, int replicates, double quantile,
                     std::uint64_t seed) {
    if (replicates < 19)
        throw std::invalid_argument("spurious_screen: need at least 19 replicates");
    if (!(quantile > 0.0) || !(quantile < 1.0))
        throw std::invalid_argument("spurious_screen: quantile must lie in (0,1)");
    const std::vector<HFunction> candidates = family_constrained_candidates(pair.h_hat);
    CounterRng root(seed);
    std::vector<double> mses(static_cast<std::size_t>(replicates));
    parallel_for(replicates, [&](int r) {
        CounterRng rng = root.fork("screen", static_cast<std::uint64_t>(r));
        Block fict;
        fict.within = block.within;
        fict.mask = block.mask;
        fict.w = Matrix::Zero(block.w.rows(), block.w.cols());
        if (block.within) {
            for (Eigen::Index u = 0; u < fict.w.rows(); ++u)
                for (Eigen::Index v = u + 1; v < fict.w.cols(); ++v) {
                    const double z = rng.normal();
                    fict.w(u, v) = z;
                    fict.w(v, u) = z;
                }
        } else {
            for (Eigen::Index u = 0; u < fict.w.rows(); ++u)
                for (Eigen::Index v = 0; v < fict.w.cols(); ++v) fict.w(u, v) = rng.normal();
        }
        const PairModel fit = fit_h_normal_nsm(fict, candidates);
        mses[static_cast<std::size_t>(r)] = fit.mse;
    });
    std::sort(mses.begin(), mses.end());
    int k = static_cast<int>(std::floor(quantile * static_cast<double>(replicates + 1)));
    if (k < 1) k = 1;
    if (k > replicates) k = replicates;
    const double threshold = mses[static_cast<std::size_t>(k - 1)];
    return pair.mse > threshold;
}

namespace {

// Eq.-20-style imputation for masked cells with the model calibrated on the
// currently present edges; unseen surface values take midpoint levels
void impute_masked(const PairModel& pm, const Block& block, Matrix* filled) {
    const EdgeSet present = collect_edges(block);
    std::vector<double> surfacePresent =
        candidate_surface(pm.h_hat, pm.psi_i_wrt_j,
                          pm.within ? pm.psi_i_wrt_j : pm.psi_j_wrt_i, present);
    const EmpiricalCdf surfCdf = empirical_cdf(surfacePresent);
    const std::vector<double> scores = ghat_scores(pm.g_hat);
    const double s = 1.0 / std::sqrt(1.0 + pm.sigma_hat * pm.sigma_hat);
    EdgeSet maskedCells;
    const int rows = static_cast<int>(block.w.rows());
    const int cols = static_cast<int>(block.w.cols());
    for (int u = 0; u < rows; ++u)
        for (int v = block.within ? u + 1 : 0; v < cols; ++v)
            if (block.mask && (*block.mask)(u, v)) {
                maskedCells.us.push_back(u);
                maskedCells.vs.push_back(v);
                maskedCells.w.push_back(0.0);
            }
    if (maskedCells.us.empty()) return;
    const std::vector<double> surfaceMissing =
        candidate_surface(pm.h_hat, pm.psi_i_wrt_j,
                          pm.within ? pm.psi_i_wrt_j : pm.psi_j_wrt_i, maskedCells);
    for (std::size_t e = 0; e < maskedCells.us.size(); ++e) {
        const double level = surfCdf.level_at(surfaceMissing[e]);
        const double target = s * normal_quantile(level);
        const double w = nearest_weight(pm.g_hat, scores, target);
        (*filled)(maskedCells.us[e], maskedCells.vs[e]) = w;
        if (block.within) (*filled)(maskedCells.vs[e], maskedCells.us[e]) = w;
    }
}

}  // namespace

MissingFitResult fit_missing(const Block& block, const std::vector<HFunction>& candidates,
                             double epsilon, int max_iters) {
    std::size_t maskedCount = 0;
    if (block.mask) {
        for (Eigen::Index u = 0; u < block.mask->rows(); ++u)
            for (Eigen::Index v = 0; v < block.mask->cols(); ++v)
                if ((*block.mask)(u, v)) ++maskedCount;
    }
    if (epsilon < 0.0) epsilon = 1e-4 * static_cast<double>(maskedCount);

    MissingFitResult out;
    // pass 0: fit on present edges only
    PairModel pm = fit_h_normal_nsm(block, candidates);
    Matrix cur = block.w;
    impute_masked(pm, block, &cur);

    for (int k = 1; k <= max_iters; ++k) {
        Block dense;
        dense.w = cur;
        dense.within = block.within;
        pm = fit_h_normal_nsm(dense, candidates);
        Matrix next = cur;
        if (block.mask) {
            // re-impute from the dense refit: present set = all cells, so the
            // calibration uses the completed matrix
            const EdgeSet all = collect_edges(dense);
            std::vector<double> surfaceAll =
                candidate_surface(pm.h_hat, pm.psi_i_wrt_j,
                                  pm.within ? pm.psi_i_wrt_j : pm.psi_j_wrt_i, all);
            const std::vector<double> levels = rank_levels(surfaceAll);
            const std::vector<double> scores = ghat_scores(pm.g_hat);
            const double s = 1.0 / std::sqrt(1.0 + pm.sigma_hat * pm.sigma_hat);
            for (std::size_t e = 0; e < all.us.size(); ++e) {
                const int u = all.us[e], v = all.vs[e];
                if (!(*block.mask)(u, v)) continue;
                const double target = s * normal_quantile(levels[e]);
                const double w = nearest_weight(pm.g_hat, scores, target);
                next(u, v) = w;
                if (block.within) next(v, u) = w;
            }
        }
        double delta = 0.0;
        if (block.mask) {
            for (Eigen::Index u = 0; u < next.rows(); ++u)
                for (Eigen::Index v = 0; v < next.cols(); ++v)
                    if ((*block.mask)(u, v)) {
                        const double d = next(u, v) - cur(u, v);
                        delta += d * d;
                    }
        }
        cur = next;
        out.iterations = k;
        out.last_delta = delta;
        if (delta <= epsilon) {
            out.converged = true;
            break;
        }
        out.converged = false;
    }
    out.pair = pm;
    out.imputed = cur;
    return out;
}

namespace {

struct FamilyFit {
    double loglik = -std::numeric_limits<double>::infinity();
    std::vector<double> psi;
    bool ok = false;
};

double clamp_level(double u, std::size_t n) {
    const double eps = 0.5 / static_cast<double>(n + 1);
    return std::min(std::max(u, eps), 1.0 - eps);
}

FamilyFit fit_family_positive(const std::string& name, const std::vector<double>& x) {
    const std::size_t n = x.size();
    const double nn = static_cast<double>(n);
    FamilyFit out;
    if (name == "normal") {
        const double mu = mean(x);
        double ss = 0.0;
        for (double v : x) ss += (v - mu) * (v - mu);
        const double s2 = ss / nn;
        if (!(s2 > 0.0)) return out;
        out.loglik = -0.5 * nn * (std::log(2.0 * M_PI * s2) + 1.0);
        out.psi.resize(n);
        const double sd = std::sqrt(s2);
        for (std::size_t i = 0; i < n; ++i)
            out.psi[i] = clamp_level(normal_cdf((x[i] - mu) / sd), n);
        out.ok = true;
        return out;
    }
    if (name == "exponential") {
        const double lo = *std::min_element(x.begin(), x.end());
        const double m = mean(x) - lo;
        if (!(m > 0.0)) return out;
        const double rate = 1.0 / m;
        out.loglik = nn * std::log(rate) - nn;
        out.psi.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            out.psi[i] = clamp_level(-std::expm1(-rate * (x[i] - lo)), n);
        out.ok = true;
        return out;
    }
    if (name == "uniform") {
        const double lo = *std::min_element(x.begin(), x.end());
        const double hi = *std::max_element(x.begin(), x.end());
        if (!(hi > lo)) return out;
        out.loglik = -nn * std::log(hi - lo);
        out.psi.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            out.psi[i] = clamp_level((x[i] - lo) / (hi - lo), n);
        out.ok = true;
        return out;
    }
    if (name == "gamma") {
        const double lo = *std::min_element(x.begin(), x.end());
        const double hi = *std::max_element(x.begin(), x.end());
        if (!(hi > lo)) return out;
        const double shift = lo - 1e-3 * (hi - lo) - 1e-12;
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) y[i] = x[i] - shift;
        const double m = mean(y);
        double ss = 0.0;
        for (double v : y) ss += (v - m) * (v - m);
        const double var = ss / nn;
        if (!(var > 0.0)) return out;
        const double shape = m * m / var;
        const double rate = m / var;
        double ll = nn * (shape * std::log(rate) - std::lgamma(shape));
        for (double v : y) ll += (shape - 1.0) * std::log(v) - rate * v;
        out.loglik = ll;
        out.psi.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            out.psi[i] = clamp_level(gamma_p(shape, rate * y[i]), n);
        out.ok = true;
        return out;
    }
    return out;
}

FamilyFit fit_family(const std::string& name, const std::vector<double>& x) {
    if (name.rfind("neg_", 0) == 0) {
        std::vector<double> flipped(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) flipped[i] = -x[i];
        FamilyFit f = fit_family_positive(name.substr(4), flipped);
        for (double& p : f.psi) p = 1.0 - p;
        return f;
    }
    return fit_family_positive(name, x);
}

std::vector<double> standardize(const std::vector<double>& x, double* sdOut) {
    const double m = mean(x);
    const double sd = sample_sd(x);
    if (sdOut) *sdOut = sd;
    std::vector<double> z(x.size(), 0.0);
    if (sd > 0.0)
        for (std::size_t i = 0; i < x.size(); ++i) z[i] = (x[i] - m) / sd;
    return z;
}

struct LsmScores {
    LsmFitResult fit;
    std::vector<double> log_a, log_b;  // raw log factor scores
};

LsmScores lsm_core(const Matrix& block, bool within) {
    const double blockMean = block.mean();
    Matrix centered = block.array() - blockMean;
    Matrix expw = centered.array().exp();
    const RankOneResult nmf = rank_one_factorize(expw);
    LsmScores out;
    out.fit.converged = nmf.converged;
    out.log_a.resize(static_cast<std::size_t>(nmf.a.size()));
    out.log_b.resize(static_cast<std::size_t>(nmf.b.size()));
    for (Eigen::Index i = 0; i < nmf.a.size(); ++i)
        out.log_a[static_cast<std::size_t>(i)] = std::log(nmf.a[i]);
    for (Eigen::Index i = 0; i < nmf.b.size(); ++i)
        out.log_b[static_cast<std::size_t>(i)] = std::log(nmf.b[i]);
    out.fit.alpha = sample_sd(out.log_a);
    out.fit.beta = sample_sd(out.log_b);
    out.fit.z_u = standardize(out.log_a, nullptr);
    out.fit.z_v = standardize(out.log_b, nullptr);
    if (within) {
        // symmetric block: one factor, reported once
        out.fit.beta = out.fit.alpha;
        out.fit.z_v = out.fit.z_u;
        out.log_b = out.log_a;
    }
    out.fit.degenerate = !(out.fit.alpha > 1e-12) || !(out.fit.beta > 1e-12);
    return out;
}

void lsm_residual(const Matrix& block, bool within, LsmFitResult* fit) {
    std::vector<double> resid;
    for (Eigen::Index u = 0; u < block.rows(); ++u)
        for (Eigen::Index v = 0; v < block.cols(); ++v) {
            if (within && u == v) continue;
            const double zu = fit->z_u[static_cast<std::size_t>(u)];
            const double zv =
                (within ? fit->z_u : fit->z_v)[static_cast<std::size_t>(v)];
            double pu = fit->alpha * zu, pv = fit->beta * zv;
            resid.push_back(block(u, v) - pu - pv);
        }
    fit->gamma = mean(resid);
    fit->sigma = sample_sd(resid);
}

}  // namespace

LsmFitResult fit_normal_lsm(const Matrix& block, bool within) {
    LsmFitResult out = lsm_core(block, within).fit;
    out.psi_u.resize(out.z_u.size());
    for (std::size_t i = 0; i < out.z_u.size(); ++i) out.psi_u[i] = normal_cdf(out.z_u[i]);
    if (within) {
        out.psi_v = out.psi_u;
    } else {
        out.psi_v.resize(out.z_v.size());
        for (std::size_t i = 0; i < out.z_v.size(); ++i) out.psi_v[i] = normal_cdf(out.z_v[i]);
    }
    lsm_residual(block, within, &out);
    return out;
}

LsmFitResult fit_lsm_general(const Matrix& block, bool within,
                             const std::vector<std::string>& candidate_marginals) {
    if (candidate_marginals.empty())
        throw std::invalid_argument("fit_lsm_general: empty candidate list");
    LsmScores core = lsm_core(block, within);
    LsmFitResult out = core.fit;
    if (out.degenerate) {
        out.psi_u.assign(out.z_u.size(), 0.5);
        out.psi_v.assign(out.z_v.size(), 0.5);
        out.family_u = out.family_v = candidate_marginals.front();
        lsm_residual(block, within, &out);
        return out;
    }
    // raw log-factor scores carry the location/scale the families absorb
    auto select = [&](const std::vector<double>& scores, std::string* nameOut) {
        FamilyFit best;
        std::string bestName;
        for (const std::string& name : candidate_marginals) {
            const FamilyFit f = fit_family(name, scores);
            if (f.ok && f.loglik > best.loglik) {
                best = f;
                bestName = name;
            }
        }
        if (!best.ok)
            throw std::runtime_error("fit_lsm_general: every candidate family degenerate");
        *nameOut = bestName;
        return best.psi;
    };
    out.psi_u = select(core.log_a, &out.family_u);
    if (within) {
        out.psi_v = out.psi_u;
        out.family_v = out.family_u;
    } else {
        out.psi_v = select(core.log_b, &out.family_v);
    }
    lsm_residual(block, within, &out);
    return out;
}

namespace {

PairModel degenerate_pair(const Block& block) {
    PairModel pm;
    const EdgeSet edges = collect_edges(block);
    pm.g_hat = empirical_cdf(edges.w.empty() ? std::vector<double>{0.0} : edges.w);
    pm.h_hat = projection(1);
    pm.sigma_hat = 0.0;
    pm.psi_i_wrt_j.assign(static_cast<std::size_t>(block.w.rows()), 0.5);
    pm.psi_j_wrt_i.assign(
        static_cast<std::size_t>(block.within ? block.w.rows() : block.w.cols()), 0.5);
    pm.mse = 0.0;
    pm.spurious = true;  // downstream consumers medianize
    pm.within = block.within;
    return pm;
}

PairModel lsm_pair_model(const Block& block, const LsmFitResult& r) {
    PairModel pm;
    const EdgeSet edges = collect_edges(block);
    pm.g_hat = empirical_cdf(edges.w);
    const double rho =
        (r.alpha > 1e-12 && r.beta > 1e-12) ? std::clamp(r.beta / r.alpha, 1e-6, 1e6) : 1.0;
    pm.h_hat = normal_rho(rho);
    pm.sigma_hat = r.sigma;
    pm.psi_i_wrt_j = r.psi_u;
    pm.psi_j_wrt_i = r.psi_v;
    pm.mse = r.sigma * r.sigma;
    pm.spurious = false;
    pm.within = block.within;
    LsmFit fit;
    fit.alpha = r.alpha;
    fit.beta = r.beta;
    fit.gamma = r.gamma;
    fit.z_i = r.z_u;
    fit.z_j = r.z_v;
    pm.lsm_fit = std::move(fit);
    return pm;
}

}  // namespace

FittedModel fit_network(const WeightedNetwork& net, const CommunityAssignment& a,
                        const FitOptions& options) {
    {
        const auto violations = validate(net);
        if (!violations.empty())
            throw std::invalid_argument("fit_network: invalid network: " + violations.front());
    }
    validate_assignment(a, net.n());
    const std::vector<HFunction> candidates =
        options.candidates.empty() ? default_candidates() : options.candidates;
    const std::vector<std::string> marginals =
        options.marginals.empty() ? std::vector<std::string>{"normal", "exponential", "uniform"}
                                  : options.marginals;
    const int K = a.K;
    const int pairCount = K * (K + 1) / 2;
    FittedModel model;
    model.assignment = a;
    model.pairs.resize(static_cast<std::size_t>(pairCount));
    std::vector<std::pair<int, int>> ij;
    ij.reserve(static_cast<std::size_t>(pairCount));
    for (int i = 1; i <= K; ++i)
        for (int j = i; j <= K; ++j) ij.emplace_back(i, j);
    CounterRng root(options.seed);
    parallel_for(pairCount, [&](int p) {
        const auto [i, j] = ij[static_cast<std::size_t>(p)];
        const int pidx = pair_index(i, j, K);
        Block block = extract_block(net, a, i, j);
        PairModel pm;
        if (options.mode == FitMode::Nsm) {
            if (block.within && block.w.rows() < 2) {
                pm = degenerate_pair(block);
            } else if (block.mask) {
                pm = fit_missing(block, candidates).pair;
            } else {
                pm = fit_h_normal_nsm(block, candidates);
            }
            if (options.screen && !pm.spurious) {
                const std::uint64_t screenSeed =
                    root.fork("screen-pair", static_cast<std::uint64_t>(pidx)).key();
                pm.spurious = spurious_screen(pm, block, options.screen_replicates,
                                              options.screen_quantile, screenSeed);
            }
        } else {
            if (block.mask)
                throw std::invalid_argument(
                    "fit_network: LSM modes do not support missing edges");
            Matrix mat = block.within ? impute_diagonal(block.w) : block.w;
            const LsmFitResult r = options.mode == FitMode::NormalLsm
                                       ? fit_normal_lsm(mat, block.within)
                                       : fit_lsm_general(mat, block.within, marginals);
            pm = lsm_pair_model(block, r);
        }
        model.pairs[static_cast<std::size_t>(pidx)] = std::move(pm);
    });
    return model;
}

WeightedNetwork smooth_network(const CommunityAssignment& a, const FittedModel& model) {
    const int n = static_cast<int>(a.labels.size());
    validate_assignment(a, n);
    WeightedNetwork out;
    out.weights = Matrix::Zero(n, n);
    auto members = a.members();
    const int K = a.K;
    for (int i = 1; i <= K; ++i) {
        for (int j = i; j <= K; ++j) {
            const PairModel& pm = model.pairs[static_cast<std::size_t>(pair_index(i, j, K))];
            const Matrix sb = smooth_block(pm);
            const auto& mi = members[static_cast<std::size_t>(i - 1)];
            const auto& mj = members[static_cast<std::size_t>(j - 1)];
            if (i == j) {
                for (std::size_t r = 0; r < mi.size(); ++r)
                    for (std::size_t c = 0; c < mi.size(); ++c) {
                        if (r == c) continue;
                        out.weights(mi[r], mi[c]) = sb(static_cast<Eigen::Index>(r),
                                                       static_cast<Eigen::Index>(c));
                    }
            } else {
                for (std::size_t r = 0; r < mi.size(); ++r)
                    for (std::size_t c = 0; c < mj.size(); ++c) {
                        const double w =
                            sb(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
                        out.weights(mi[r], mj[c]) = w;
                        out.weights(mj[c], mi[r]) = w;
                    }
            }
        }
    }
    return out;
}

}  // namespace socnet
