#pragma once

#include <vector>

namespace socnet {

double mean(const std::vector<double>& x);
double sample_sd(const std::vector<double>& x);  // n-1 denominator

// Pearson correlation; a zero-variance side yields 0 (degenerate pairs carry
// no signal), judged against a relative spread threshold
double pearson(const std::vector<double>& x, const std::vector<double>& y);

// Spearman rank correlation with average ranks on ties
double spearman(const std::vector<double>& x, const std::vector<double>& y);

// one-sample Kolmogorov-Smirnov statistic against U(0,1)
double ks_uniform(std::vector<double> sample);

// two-sample Kolmogorov-Smirnov statistic
double ks_two_sample(std::vector<double> a, std::vector<double> b);

// adjusted Rand index between two labelings
double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b);

std::vector<double> average_ranks(const std::vector<double>& x);  // 1-based

}  // namespace socnet
