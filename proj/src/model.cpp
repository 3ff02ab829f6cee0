#include "socnet/model.hpp"

#include <stdexcept>
#include <string>

namespace socnet {

std::vector<std::vector<int>> CommunityAssignment::members() const {
    std::vector<std::vector<int>> out(static_cast<std::size_t>(K));
    for (std::size_t u = 0; u < labels.size(); ++u)
        out[static_cast<std::size_t>(labels[u] - 1)].push_back(static_cast<int>(u));
    return out;
}

int pair_index(int i, int j, int K) {
    if (i < 1 || j < i || j > K) throw std::invalid_argument("pair_index: bad pair");
    return (i - 1) * K - (i - 1) * (i - 2) / 2 + (j - i);
}

std::vector<std::string> validate(const WeightedNetwork& net) {
    std::vector<std::string> violations;
    const int n = net.n();
    if (net.weights.cols() != net.weights.rows()) {
        violations.push_back("weights matrix is not square");
        return violations;
    }
    for (int u = 0; u < n; ++u) {
        if (net.weights(u, u) != 0.0)
            violations.push_back("nonzero diagonal at (" + std::to_string(u) + "," +
                                 std::to_string(u) + ")");
        for (int v = u + 1; v < n; ++v)
            if (net.weights(u, v) != net.weights(v, u))
                violations.push_back("asymmetric weight at (" + std::to_string(u) + "," +
                                     std::to_string(v) + ")");
    }
    if (net.missing) {
        const BoolMatrix& mask = *net.missing;
        if (mask.rows() != n || mask.cols() != n) {
            violations.push_back("missing mask shape mismatch");
            return violations;
        }
        for (int u = 0; u < n; ++u) {
            if (mask(u, u))
                violations.push_back("diagonal marked missing at (" + std::to_string(u) + "," +
                                     std::to_string(u) + ")");
            for (int v = u + 1; v < n; ++v)
                if (mask(u, v) != mask(v, u))
                    violations.push_back("asymmetric missing mask at (" + std::to_string(u) +
                                         "," + std::to_string(v) + ")");
        }
    }
    return violations;
}

void validate_assignment(const CommunityAssignment& a, int n) {
    if (static_cast<int>(a.labels.size()) != n)
        throw std::invalid_argument("assignment length does not match node count");
    if (a.K < 1) throw std::invalid_argument("assignment needs K >= 1");
    std::vector<int> sizes(static_cast<std::size_t>(a.K), 0);
    for (int l : a.labels) {
        if (l < 1 || l > a.K) throw std::invalid_argument("community label outside 1..K");
        sizes[static_cast<std::size_t>(l - 1)]++;
    }
    for (int s : sizes)
        if (s == 0) throw std::invalid_argument("empty community in assignment");
}

void validate_spec(const GeneratorSpec& spec) {
    const int n = static_cast<int>(spec.assignment.labels.size());
    validate_assignment(spec.assignment, n);
    const int K = spec.assignment.K;
    const std::size_t needed = static_cast<std::size_t>(K * (K + 1) / 2);
    if (spec.pairs.size() != needed)
        throw std::invalid_argument("generator spec needs one pair entry per community pair");
    for (const PairGen& p : spec.pairs) {
        if (p.sigma < 0.0) throw std::invalid_argument("pair sigma must be nonnegative");
        if (p.external_noise_sd < 0.0)
            throw std::invalid_argument("external noise sd must be nonnegative");
        if (p.retention < 0.0 || p.retention > 1.0)
            throw std::invalid_argument("retention probability must lie in [0,1]");
    }
    if (!spec.psi_iid) {
        if (static_cast<int>(spec.psi_grid.size()) != K)
            throw std::invalid_argument("psi grid needs one list per community");
        auto sizes = spec.assignment.members();
        for (int c = 0; c < K; ++c) {
            if (spec.psi_grid[static_cast<std::size_t>(c)].size() !=
                sizes[static_cast<std::size_t>(c)].size())
                throw std::invalid_argument("psi grid size does not match community size");
            for (double v : spec.psi_grid[static_cast<std::size_t>(c)])
                if (!(v > 0.0) || !(v < 1.0))
                    throw std::invalid_argument("explicit psi values must lie in (0,1)");
        }
    }
}

}  // namespace socnet
