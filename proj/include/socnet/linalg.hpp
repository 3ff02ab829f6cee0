#pragma once

#include "socnet/rng.hpp"

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <vector>

namespace socnet {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

struct RankOneResult {
    Vector a;
    Vector b;
    bool converged = true;
    double residual = 0.0;  // Frobenius residual over the fitted entries
};

// Best rank-one fit ab' to the unmasked entries of a strictly positive
// matrix, normalized so mean(log a) = 0. Dense: power iteration on M'M;
// masked: alternating least squares over present entries.
RankOneResult rank_one_factorize(const Matrix& m, const BoolMatrix* mask = nullptr);

struct EigenPairs {
    std::vector<std::complex<double>> values;  // sorted by |Re| desc, Im desc, index
    Matrix vectors_real;                       // real parts, columns follow values
};

EigenPairs eigen_real_parts(const Matrix& m);

// labels in 1..k, best of `restarts` k-means++ runs by within-cluster cost
std::vector<int> kmeans_cluster(const Matrix& points, int k, int restarts, CounterRng rng);

}  // namespace socnet
