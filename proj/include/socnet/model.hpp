#pragma once

#include "socnet/distributions.hpp"
#include "socnet/hfunc.hpp"
#include "socnet/linalg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace socnet {

// symmetric weighted network, zero diagonal; a missing edge is masked, never
// encoded as weight 0 (dense mode keeps 0 as a legal weight)
struct WeightedNetwork {
    Matrix weights;
    std::optional<BoolMatrix> missing;

    int n() const { return static_cast<int>(weights.rows()); }

    bool is_missing(int u, int v) const {
        return missing && (*missing)(u, v);
    }
};

struct CommunityAssignment {
    std::vector<int> labels;  // community ids 1..K, one per node
    int K = 0;

    std::vector<std::vector<int>> members() const;
};

struct LsmFit {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    std::vector<double> z_i;
    std::vector<double> z_j;
};

// fitted description of one community pair
struct PairModel {
    EmpiricalCdf g_hat;
    HFunction h_hat;
    double sigma_hat = 0.0;
    std::vector<double> psi_i_wrt_j;  // sociabilities of community i's nodes
    std::vector<double> psi_j_wrt_i;  // sociabilities of community j's nodes
    double mse = 0.0;
    bool spurious = false;
    bool within = false;  // square zero-diagonal block vs rectangular
    std::optional<LsmFit> lsm_fit;
};

struct FittedModel {
    CommunityAssignment assignment;
    std::vector<PairModel> pairs;  // unordered pairs i <= j, see pair_index
};

// flat index of the unordered community pair (i, j), 1-based, i <= j
int pair_index(int i, int j, int K);

struct PairGen {
    HFunction h;
    double sigma = 0.0;
    Distribution marginal;
    double external_noise_sd = 0.0;  // 0 disables the independent layer
    double retention = 1.0;          // edge-retention probability
};

struct GeneratorSpec {
    CommunityAssignment assignment;
    std::vector<PairGen> pairs;  // K(K+1)/2 entries, pair_index order
    bool psi_iid = true;         // iid uniform sociabilities from the seed
    std::vector<std::vector<double>> psi_grid;  // per community, when !psi_iid
};

// empty list iff the network invariants hold; entries name the offending cell
std::vector<std::string> validate(const WeightedNetwork& net);

// throws on malformed assignments (label out of 1..K, empty community)
void validate_assignment(const CommunityAssignment& a, int n);

void validate_spec(const GeneratorSpec& spec);

}  // namespace socnet
