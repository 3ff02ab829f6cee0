#include "socnet/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace socnet {

namespace {

void check_positive(const Matrix& m, const BoolMatrix* mask) {
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (mask && (*mask)(r, c)) continue;
            if (!(m(r, c) > 0.0))
                throw std::invalid_argument("rank_one_factorize: entries must be positive");
        }
}

RankOneResult normalize_scale(Vector a, Vector b, bool converged, double residual) {
    double logMean = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) logMean += std::log(a[i]);
    logMean /= static_cast<double>(a.size());
    const double c = std::exp(logMean);
    RankOneResult out;
    out.a = a / c;
    out.b = b * c;
    out.converged = converged;
    out.residual = residual;
    return out;
}

RankOneResult factorize_dense(const Matrix& m) {
    const Eigen::Index rows = m.rows(), cols = m.cols();
    Vector v = Vector::Ones(cols) / std::sqrt(static_cast<double>(cols));
    double rayleigh = 0.0;
    bool converged = false;
    for (int it = 0; it < 10000; ++it) {
        Vector w = m.transpose() * (m * v);
        const double norm = w.norm();
        if (norm == 0.0) break;
        v = w / norm;
        const double rq = v.dot(m.transpose() * (m * v));
        if (it > 0 && std::fabs(rq - rayleigh) <= 1e-12 * std::max(1.0, std::fabs(rq))) {
            rayleigh = rq;
            converged = true;
            break;
        }
        rayleigh = rq;
    }
    Vector b = v.cwiseAbs();
    Vector a = (m * v).cwiseAbs();
    // least-squares rescale of a against fixed b
    const double bb = b.squaredNorm();
    if (bb > 0.0) {
        Vector mb = m * b;
        a = (mb / bb).cwiseAbs();
    }
    (void)rows;
    const double residual = (m - a * b.transpose()).norm();
    return normalize_scale(std::move(a), std::move(b), converged, residual);
}

RankOneResult factorize_masked(const Matrix& m, const BoolMatrix& mask) {
    const Eigen::Index rows = m.rows(), cols = m.cols();
    Vector a = Vector::Ones(rows), b = Vector::Ones(cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        double s = 0.0;
        int c = 0;
        for (Eigen::Index j = 0; j < cols; ++j)
            if (!mask(r, j)) {
                s += m(r, j);
                ++c;
            }
        if (c > 0) a[r] = s / c;
    }
    double prev = std::numeric_limits<double>::infinity();
    bool converged = false;
    double residual = 0.0;
    for (int sweep = 0; sweep < 1000; ++sweep) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            double num = 0.0, den = 0.0;
            for (Eigen::Index r = 0; r < rows; ++r)
                if (!mask(r, j)) {
                    num += a[r] * m(r, j);
                    den += a[r] * a[r];
                }
            if (den > 0.0) b[j] = std::fabs(num / den);
        }
        for (Eigen::Index r = 0; r < rows; ++r) {
            double num = 0.0, den = 0.0;
            for (Eigen::Index j = 0; j < cols; ++j)
                if (!mask(r, j)) {
                    num += b[j] * m(r, j);
                    den += b[j] * b[j];
                }
            if (den > 0.0) a[r] = std::fabs(num / den);
        }
        double ss = 0.0;
        for (Eigen::Index r = 0; r < rows; ++r)
            for (Eigen::Index j = 0; j < cols; ++j)
                if (!mask(r, j)) {
                    const double d = m(r, j) - a[r] * b[j];
                    ss += d * d;
                }
        residual = std::sqrt(ss);
        if (std::fabs(prev - residual) <= 1e-10 * std::max(1.0, residual)) {
            converged = true;
            break;
        }
        prev = residual;
    }
    return normalize_scale(std::move(a), std::move(b), converged, residual);
}

}  // namespace

RankOneResult rank_one_factorize(const Matrix& m, const BoolMatrix* mask) {
    if (m.rows() == 0 || m.cols() == 0)
        throw std::invalid_argument("rank_one_factorize: empty matrix");
    check_positive(m, mask);
    if (!mask) return factorize_dense(m);
    return factorize_masked(m, *mask);
}

EigenPairs eigen_real_parts(const Matrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("eigen_real_parts: matrix not square");
    Eigen::EigenSolver<Matrix> solver(m);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eigen_real_parts: decomposition failed");
    const auto vals = solver.eigenvalues();
    const auto vecs = solver.eigenvectors();
    const Eigen::Index n = m.rows();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
        const double ax = std::fabs(vals[x].real()), ay = std::fabs(vals[y].real());
        if (ax != ay) return ax > ay;
        if (vals[x].imag() != vals[y].imag()) return vals[x].imag() > vals[y].imag();
        return x < y;
    });
    EigenPairs out;
    out.values.reserve(static_cast<std::size_t>(n));
    out.vectors_real.resize(n, n);
    for (Eigen::Index c = 0; c < n; ++c) {
        const Eigen::Index src = order[static_cast<std::size_t>(c)];
        out.values.push_back(vals[src]);
        Eigen::VectorXcd v = vecs.col(src);
        // rotate the largest-modulus entry onto the positive real axis so the
        // output does not depend on the solver's phase choice
        Eigen::Index pivot = 0;
        double best = -1.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double a = std::abs(v[i]);
            if (a > best) {
                best = a;
                pivot = i;
            }
        }
        if (best > 0.0) v *= std::conj(v[pivot]) / std::abs(v[pivot]);
        out.vectors_real.col(c) = v.real();
    }
    return out;
}

namespace {

double sq_dist(const Matrix& points, Eigen::Index row, const Vector& center) {
    return (points.row(row).transpose() - center).squaredNorm();
}

}  // namespace

std::vector<int> kmeans_cluster(const Matrix& points, int k, int restarts, CounterRng rng) {
    const Eigen::Index m = points.rows();
    if (k <= 0 || static_cast<Eigen::Index>(k) > m)
        throw std::invalid_argument("kmeans_cluster: need 0 < k <= point count");
    std::vector<int> bestLabels;
    double bestCost = std::numeric_limits<double>::infinity();
    for (int restart = 0; restart < restarts; ++restart) {
        CounterRng local = rng.fork("kmeans", static_cast<std::uint64_t>(restart));
        Matrix centers(k, points.cols());
        centers.row(0) = points.row(static_cast<Eigen::Index>(local.uniform_below(static_cast<std::uint64_t>(m))));
        std::vector<double> d2(static_cast<std::size_t>(m));
        for (int c = 1; c < k; ++c) {
            double total = 0.0;
            for (Eigen::Index i = 0; i < m; ++i) {
                double d = std::numeric_limits<double>::infinity();
                for (int cc = 0; cc < c; ++cc)
                    d = std::min(d, sq_dist(points, i, centers.row(cc).transpose()));
                d2[static_cast<std::size_t>(i)] = d;
                total += d;
            }
            Eigen::Index pick = 0;
            if (total > 0.0) {
                double target = local.uniform01() * total;
                double acc = 0.0;
                for (Eigen::Index i = 0; i < m; ++i) {
                    acc += d2[static_cast<std::size_t>(i)];
                    if (acc >= target) {
                        pick = i;
                        break;
                    }
                }
            } else {
                pick = static_cast<Eigen::Index>(local.uniform_below(static_cast<std::uint64_t>(m)));
            }
            centers.row(c) = points.row(pick);
        }
        std::vector<int> labels(static_cast<std::size_t>(m), 0);
        for (int iter = 0; iter < 100; ++iter) {
            bool changed = false;
            for (Eigen::Index i = 0; i < m; ++i) {
                int best = 0;
                double bd = std::numeric_limits<double>::infinity();
                for (int c = 0; c < k; ++c) {
                    const double d = sq_dist(points, i, centers.row(c).transpose());
                    if (d < bd) {
                        bd = d;
                        best = c;
                    }
                }
                if (labels[static_cast<std::size_t>(i)] != best) {
                    labels[static_cast<std::size_t>(i)] = best;
                    changed = true;
                }
            }
            std::vector<int> sizes(static_cast<std::size_t>(k), 0);
            Matrix sums = Matrix::Zero(k, points.cols());
            for (Eigen::Index i = 0; i < m; ++i) {
                sums.row(labels[static_cast<std::size_t>(i)]) += points.row(i);
                sizes[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])]++;
            }
            for (int c = 0; c < k; ++c) {
                if (sizes[static_cast<std::size_t>(c)] > 0) {
                    centers.row(c) = sums.row(c) / sizes[static_cast<std::size_t>(c)];
                } else {
                    // revive an empty cluster at the point worst served now
                    Eigen::Index far = 0;
                    double fd = -1.0;
                    for (Eigen::Index i = 0; i < m; ++i) {
                        const double d =
                            sq_dist(points, i, centers.row(labels[static_cast<std::size_t>(i)]).transpose());
                        if (d > fd) {
                            fd = d;
                            far = i;
                        }
                    }
                    centers.row(c) = points.row(far);
                    labels[static_cast<std::size_t>(far)] = c;
                    changed = true;
                }
            }
            if (!changed) break;
        }
        double cost = 0.0;
        for (Eigen::Index i = 0; i < m; ++i)
            cost += sq_dist(points, i, centers.row(labels[static_cast<std::size_t>(i)]).transpose());
        if (cost < bestCost) {
            bestCost = cost;
            bestLabels = labels;
        }
    }
    for (int& l : bestLabels) ++l;
    return bestLabels;
}

}  // namespace socnet
