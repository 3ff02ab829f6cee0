#pragma once

#include "socnet/model.hpp"

#include <cstdint>
#include <vector>

namespace socnet {

// Pearson correlation of {(d_i(v), W_uv) : v in community j, v != u}, where i
// is u's community and d_i(v) = sum of W_{u'v} over u' in i, u' != v.
// Zero variance on either side maps to 0.
double node_community_correlation(const WeightedNetwork& net, const CommunityAssignment& a,
                                  int u, int j);

struct PairTerm {
    int i = 0, j = 0;  // community labels; ordered, so (i,j) and (j,i) both appear
    double mean_c = 0.0;
    double sd_c = 0.0;
    double size_factor = 0.0;  // (n_i-2)_+ (n_j-2)_+ (1 + [i==j])
    double term = 0.0;
};

// L = sum over ordered community pairs of mean(C) (1 - sqrt(SD(C))) times the
// size factor; communities of size <= 2 contribute nothing
struct ClusterScore {
    double L = 0.0;
    std::vector<PairTerm> terms;
};

ClusterScore measure_l(const WeightedNetwork& net, const CommunityAssignment& a);

// bottom-up agglomeration: rounds visit communities by decreasing aggregate
// degree, each merging with its most-correlated partner when L does not
// decrease; a mergeless round triggers one sweep over all pairs by
// decreasing correlation; stops after a mergeless round + sweep or at K = 1
CommunityAssignment greedy_communities(const WeightedNetwork& net);

// RBF affinities on self-coordinate-excluded row distances, symmetric
// normalized Laplacian, k-means on the leading K eigenvectors; the best of
// `replicates` runs per K is scored by L and K grows while L strictly
// improves; the last improving clustering is returned
CommunityAssignment spectral_communities(const WeightedNetwork& net, int replicates,
                                         std::uint64_t seed);

struct NormalizedEmbedding {
    Matrix coordinates;  // n x gap_index, rows are node positions
    int gap_index = 0;   // largest consecutive gap in |Re(lambda)|
};

// rows standardized to mean 0 / SD 1, then the real parts of the leading
// eigenvectors up to the largest spectral gap
NormalizedEmbedding normalized_embedding(const WeightedNetwork& net);

}  // namespace socnet
