#pragma once

namespace socnet {

// standard normal CDF and its inverse; quantile is accurate to ~1e-15 on
// (0,1), comfortably below the 1e-10 requirement on every caller's path
double normal_cdf(double x);
double normal_quantile(double p);

// regularized lower incomplete gamma P(a, x) and its inverse in x
double gamma_p(double a, double x);
double gamma_p_inverse(double a, double p);

}  // namespace socnet
