#pragma once

#include "socnet/rng.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace socnet {

// Empirical CDF over observed weights. Distinct value k (1-based, k values
// strictly below, multiplicity m) gets level (k + m/2 + 1/(2m)) / (n+1),
// which reduces to rank/(n+1) when m = 1 and stays strictly inside (0,1).
struct EmpiricalCdf {
    std::vector<double> values;        // sorted distinct weights
    std::vector<double> levels;        // CDF level per distinct weight
    std::vector<std::size_t> counts;   // multiplicity per distinct weight
    std::size_t n = 0;                 // source edge count

    // level of an observed weight; throws if w was not in the source sample
    double level_of(double w) const;

    // level for an arbitrary point: exact-match values get their stored
    // level, anything else gets (#below + 1/2)/(n+1)
    double level_at(double x) const;
};

EmpiricalCdf empirical_cdf(const std::vector<double>& weights);

enum class DistKind {
    Normal,       // mean, variance
    Exponential,  // rate
    Gamma,        // shape, rate
    Uniform,      // lo, hi
    NegGamma,     // shape, rate, mirrored onto x < 0
    Triangular,   // lo, hi, peak at the midpoint
    Tabulated,    // numeric CDF on a grid, linear interpolation
    Empirical,    // observed weights with assigned levels
};

struct Distribution {
    DistKind kind = DistKind::Normal;
    double p1 = 0.0;
    double p2 = 1.0;
    std::vector<double> grid;   // Tabulated: abscissae
    std::vector<double> gcdf;   // Tabulated: CDF values at grid
    EmpiricalCdf emp;           // Empirical

    double cdf(double x) const;
    double quantile(double u) const;  // u strictly in (0,1)
    double sample(CounterRng& rng) const { return quantile(rng.uniform01()); }
};

Distribution normal_dist(double mean, double variance);
Distribution exponential_dist(double rate);
Distribution gamma_dist(double shape, double rate);
Distribution uniform_dist(double lo, double hi);
Distribution neg_gamma_dist(double shape, double rate);
Distribution triangular_dist(double lo, double hi);
Distribution tabulated_dist(std::vector<double> grid, std::vector<double> cdf);
Distribution empirical_dist(EmpiricalCdf e);

}  // namespace socnet
