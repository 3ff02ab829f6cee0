#include "socnet/distributions.hpp"

#include "socnet/special.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace socnet {

double EmpiricalCdf::level_of(double w) const {
    auto it = std::lower_bound(values.begin(), values.end(), w);
    if (it == values.end() || *it != w)
        throw std::invalid_argument("EmpiricalCdf::level_of: value not observed");
    return levels[static_cast<std::size_t>(it - values.begin())];
}

double EmpiricalCdf::level_at(double x) const {
    auto it = std::lower_bound(values.begin(), values.end(), x);
    std::size_t idx = static_cast<std::size_t>(it - values.begin());
    if (it != values.end() && *it == x) return levels[idx];
    std::size_t below = 0;
    for (std::size_t k = 0; k < idx; ++k) below += counts[k];
    return (static_cast<double>(below) + 0.5) / static_cast<double>(n + 1);
}

EmpiricalCdf empirical_cdf(const std::vector<double>& weights) {
    if (weights.empty()) throw std::invalid_argument("empirical_cdf: empty sample");
    std::vector<double> sorted = weights;
    std::sort(sorted.begin(), sorted.end());
    EmpiricalCdf out;
    out.n = sorted.size();
    const double denom = static_cast<double>(out.n + 1);
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        const double k = static_cast<double>(i);        // strictly-below count
        const double m = static_cast<double>(j - i);    // multiplicity
        out.values.push_back(sorted[i]);
        out.levels.push_back((k + 0.5 * m + 0.5 / m) / denom);
        out.counts.push_back(j - i);
        i = j;
    }
    return out;
}

namespace {

double triangular_cdf(double lo, double hi, double x) {
    if (x <= lo) return 0.0;
    if (x >= hi) return 1.0;
    const double span = hi - lo;
    const double mid = 0.5 * (lo + hi);
    if (x <= mid) {
        const double t = (x - lo) / span;
        return 2.0 * t * t;
    }
    const double t = (hi - x) / span;
    return 1.0 - 2.0 * t * t;
}

double triangular_quantile(double lo, double hi, double u) {
    const double span = hi - lo;
    if (u <= 0.5) return lo + span * std::sqrt(0.5 * u);
    return hi - span * std::sqrt(0.5 * (1.0 - u));
}

}  // namespace

double Distribution::cdf(double x) const {
    switch (kind) {
        case DistKind::Normal:
            return normal_cdf((x - p1) / std::sqrt(p2));
        case DistKind::Exponential:
            return x <= 0.0 ? 0.0 : -std::expm1(-p1 * x);
        case DistKind::Gamma:
            return x <= 0.0 ? 0.0 : gamma_p(p1, p2 * x);
        case DistKind::Uniform:
            return x <= p1 ? 0.0 : (x >= p2 ? 1.0 : (x - p1) / (p2 - p1));
        case DistKind::NegGamma:
            return x >= 0.0 ? 1.0 : 1.0 - gamma_p(p1, -p2 * x);
        case DistKind::Triangular:
            return triangular_cdf(p1, p2, x);
        case DistKind::Tabulated: {
            if (x <= grid.front()) return 0.0;
            if (x >= grid.back()) return 1.0;
            auto it = std::upper_bound(grid.begin(), grid.end(), x);
            std::size_t hi = static_cast<std::size_t>(it - grid.begin());
            std::size_t lo = hi - 1;
            const double t = (x - grid[lo]) / (grid[hi] - grid[lo]);
            return gcdf[lo] + t * (gcdf[hi] - gcdf[lo]);
        }
        case DistKind::Empirical: {
            auto it = std::upper_bound(emp.values.begin(), emp.values.end(), x);
            if (it == emp.values.begin()) return 0.0;
            return emp.levels[static_cast<std::size_t>(it - emp.values.begin()) - 1];
        }
    }
    throw std::logic_error("Distribution::cdf: unknown kind");
}

double Distribution::quantile(double u) const {
    if (!(u > 0.0) || !(u < 1.0))
        throw std::domain_error("Distribution::quantile: argument must lie in (0,1)");
    switch (kind) {
        case DistKind::Normal:
            return p1 + std::sqrt(p2) * normal_quantile(u);
        case DistKind::Exponential:
            return -std::log1p(-u) / p1;
        case DistKind::Gamma:
            return gamma_p_inverse(p1, u) / p2;
        case DistKind::Uniform:
            return p1 + (p2 - p1) * u;
        case DistKind::NegGamma:
            return -gamma_p_inverse(p1, 1.0 - u) / p2;
        case DistKind::Triangular:
            return triangular_quantile(p1, p2, u);
        case DistKind::Tabulated: {
            auto it = std::lower_bound(gcdf.begin(), gcdf.end(), u);
            if (it == gcdf.begin()) return grid.front();
            if (it == gcdf.end()) return grid.back();
            std::size_t hi = static_cast<std::size_t>(it - gcdf.begin());
            std::size_t lo = hi - 1;
            const double dv = gcdf[hi] - gcdf[lo];
            const double t = dv > 0.0 ? (u - gcdf[lo]) / dv : 0.0;
            return grid[lo] + t * (grid[hi] - grid[lo]);
        }
        case DistKind::Empirical: {
            // nearest observed level in normal-score space, ties to the
            // smaller weight; this is the sampling analogue of the smooth
            // reconstruction rule
            const double target = normal_quantile(u);
            double best = emp.values.front();
            double bestDist = std::fabs(normal_quantile(emp.levels.front()) - target);
            for (std::size_t k = 1; k < emp.values.size(); ++k) {
                const double d = std::fabs(normal_quantile(emp.levels[k]) - target);
                if (d < bestDist) {
                    bestDist = d;
                    best = emp.values[k];
                }
            }
            return best;
        }
    }
    throw std::logic_error("Distribution::quantile: unknown kind");
}

Distribution normal_dist(double mean, double variance) {
    if (!(variance > 0.0)) throw std::invalid_argument("normal_dist: variance must be positive");
    return Distribution{DistKind::Normal, mean, variance, {}, {}, {}};
}

Distribution exponential_dist(double rate) {
    if (!(rate > 0.0)) throw std::invalid_argument("exponential_dist: rate must be positive");
    return Distribution{DistKind::Exponential, rate, 0.0, {}, {}, {}};
}

Distribution gamma_dist(double shape, double rate) {
    if (!(shape > 0.0) || !(rate > 0.0))
        throw std::invalid_argument("gamma_dist: shape and rate must be positive");
    return Distribution{DistKind::Gamma, shape, rate, {}, {}, {}};
}

Distribution uniform_dist(double lo, double hi) {
    if (!(hi > lo)) throw std::invalid_argument("uniform_dist: need hi > lo");
    return Distribution{DistKind::Uniform, lo, hi, {}, {}, {}};
}

Distribution neg_gamma_dist(double shape, double rate) {
    if (!(shape > 0.0) || !(rate > 0.0))
        throw std::invalid_argument("neg_gamma_dist: shape and rate must be positive");
    return Distribution{DistKind::NegGamma, shape, rate, {}, {}, {}};
}

Distribution triangular_dist(double lo, double hi) {
    if (!(hi > lo)) throw std::invalid_argument("triangular_dist: need hi > lo");
    return Distribution{DistKind::Triangular, lo, hi, {}, {}, {}};
}

Distribution tabulated_dist(std::vector<double> grid, std::vector<double> cdf) {
    if (grid.size() != cdf.size() || grid.size() < 2)
        throw std::invalid_argument("tabulated_dist: need matching grids of length >= 2");
    Distribution d;
    d.kind = DistKind::Tabulated;
    d.grid = std::move(grid);
    d.gcdf = std::move(cdf);
    return d;
}

Distribution empirical_dist(EmpiricalCdf e) {
    Distribution d;
    d.kind = DistKind::Empirical;
    d.emp = std::move(e);
    return d;
}

}  // namespace socnet
