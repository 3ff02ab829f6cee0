#pragma once

#include "socnet/model.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace socnet {

// CDF levels of values ranked among themselves, tie rule as empirical_cdf
std::vector<double> rank_levels(const std::vector<double>& x);

// self-loop fill for a within-community block:
// W_uu = [2*sum_{v!=u} W_uv - (1/(n-2)) * sum_{v!=u} sum_{q!=u,v} W_vq] / (n-1)
Matrix impute_diagonal(const Matrix& block);

struct SociabilityStats {
    std::vector<double> d;         // summed normal scores toward the other side
    std::vector<double> psi_hat;   // rank levels in (0,1)
    std::vector<char> degenerate;  // 1 where a node had no usable edges
};

// one community pair's slice of the network
struct Block {
    Matrix w;  // within: square zero-diagonal; between: n_i x n_j
    std::optional<BoolMatrix> mask;
    bool within = false;
};

Block extract_block(const WeightedNetwork& net, const CommunityAssignment& a, int i, int j);

std::pair<SociabilityStats, SociabilityStats> block_sociability(const Block& block);

std::pair<SociabilityStats, SociabilityStats> local_sociability(const WeightedNetwork& net,
                                                                const CommunityAssignment& a,
                                                                int i, int j);

struct LsmFitResult {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double sigma = 0.0;
    std::vector<double> z_u, z_v;      // standardized factor scores
    std::vector<double> psi_u, psi_v;  // inverted sociabilities
    std::string family_u = "normal";
    std::string family_v = "normal";
    bool degenerate = false;  // sociability-free block (zero score spread)
    bool converged = true;
};

// rank-one factorization of exp(block - blockmean); within blocks expect the
// diagonal already imputed and report alpha only
LsmFitResult fit_normal_lsm(const Matrix& block, bool within);

// family names: normal, exponential, uniform, gamma, and neg_-prefixed
// mirrored variants
LsmFitResult fit_lsm_general(const Matrix& block, bool within,
                             const std::vector<std::string>& candidate_marginals);

// full shipped candidate set: every catalog construction x every association
std::vector<HFunction> default_candidates();

PairModel fit_h_normal_nsm(const Block& block, const std::vector<HFunction>& candidates);

// rank-calibrated normal scores of the fitted surface over every cell of the
// pair's block: within pairs list u < v, between pairs run row-major
struct SurfaceScores {
    std::vector<int> us, vs;
    std::vector<double> h;
};
SurfaceScores surface_scores(const PairModel& pair);

// observed weight whose empirical normal score is nearest the target; ties go
// to the smaller weight
double nearest_observed_weight(const EmpiricalCdf& g_hat, double target);

// reconstruction rule: argmin over observed weights in normal-score space;
// ties go to the smaller weight. Spurious pairs return the median weight.
double smooth_estimate(const PairModel& pair, int u, int v);
Matrix smooth_block(const PairModel& pair);

double normal_space_mse(const PairModel& pair, const Block& block);

bool spurious_screen(const PairModel& pair, const Block& block, int replicates, double quantile,
                     std::uint64_t seed);

struct MissingFitResult {
    PairModel pair;
    Matrix imputed;  // block with masked cells filled
    int iterations = 0;
    double last_delta = 0.0;
    bool converged = true;
};

// iterative impute-and-refit; epsilon < 0 selects 1e-4 * (masked cell count)
MissingFitResult fit_missing(const Block& block, const std::vector<HFunction>& candidates,
                             double epsilon = -1.0, int max_iters = 100);

enum class FitMode { Nsm, NormalLsm, GeneralLsm };

struct FitOptions {
    FitMode mode = FitMode::Nsm;
    std::vector<HFunction> candidates;    // empty selects default_candidates()
    std::vector<std::string> marginals;   // general LSM families; empty selects
                                          // {normal, exponential, uniform}
    bool screen = false;
    int screen_replicates = 99;
    double screen_quantile = 0.05;
    std::uint64_t seed = 0;
};

FittedModel fit_network(const WeightedNetwork& net, const CommunityAssignment& a,
                        const FitOptions& options = {});

// smooth reconstruction of the whole network from a fitted model
WeightedNetwork smooth_network(const CommunityAssignment& a, const FittedModel& model);

}  // namespace socnet
