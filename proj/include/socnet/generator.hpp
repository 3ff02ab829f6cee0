#pragma once

#include "socnet/model.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace socnet {

struct GeneratedNetwork {
    WeightedNetwork net;
    std::vector<double> psis;  // realized sociabilities, for test oracles
};

// W_uv = G^{-1}(Phi(z)) with z = s * Phi^{-1}(H(Psi_u, Psi_v)) + t * eps,
// s = 1/sqrt(1+sigma^2), t = sigma/sqrt(1+sigma^2). Between-community pairs
// feed the lower community's node as the first H argument. Per-pair layers
// apply in order: weights, external noise, sparsifier. Substreams are keyed
// per node (psi) and per community pair (eps/zeta/mask), so output is
// deterministic and blocks do not perturb each other.
GeneratedNetwork generate(const GeneratorSpec& spec, std::uint64_t seed);

struct LsmPairGen {
    double gamma = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double sigma = 0.0;
    // transforms of U(0,1); identity-variance normal scores by default
    std::function<double(double)> h1;
    std::function<double(double)> h2;
    std::function<double(double)> f_inverse;  // identity by default
};

// f(W) = gamma + alpha*h1(Psi_u) + beta*h2(Psi_v) + sigma*eps, W = f_inverse
// applied; within-community pairs require alpha == beta and use h1 for both
// sides. Sociabilities are iid uniform from the seed.
GeneratedNetwork generate_lsm(const CommunityAssignment& assignment,
                              const std::vector<LsmPairGen>& pairs, std::uint64_t seed);

// each off-diagonal unordered pair kept with probability `retention`,
// dropped edges become missing
WeightedNetwork sparsify(const WeightedNetwork& net, double retention, std::uint64_t seed);

// adds zeta_uv ~ N(0, sd^2) symmetrically to every present off-diagonal edge
WeightedNetwork add_external_noise(const WeightedNetwork& net, double sd, std::uint64_t seed);

}  // namespace socnet
