#include "socnet/special.hpp"

#include "socnet/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace socnet {

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x * 0.7071067811865475244);
}

namespace {

// Acklam's rational initializer, max relative error ~1.15e-9
double quantile_seed(double p) {
    static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                -2.759285104469687e+02, 1.383577518672690e+02,
                                -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                -1.556989798598866e+02, 6.680131188771972e+01,
                                -1.328068155288572e+01};
    static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                -2.400758277161838e+00, -2.549732539343734e+00,
                                4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;

    if (p < plow) {
        double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - plow) {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    double q = p - 0.5;
    double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double normal_quantile(double p) {
    if (!(p > 0.0) || !(p < 1.0))
        throw std::domain_error("normal_quantile: argument must lie in (0,1)");
    double x = quantile_seed(p);
    // one Halley step against the erfc-based CDF pushes the error to ~1e-15
    double e = normal_cdf(x) - p;
    double u = e * 2.5066282746310005024 * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

double CounterRng::normal() {
    return normal_quantile(uniform01());
}

namespace {

// series expansion, converges fast for x < a+1
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Lentz continued fraction for Q(a, x), x >= a+1
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        double an = -static_cast<double>(i) * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_p(double a, double x) {
    if (a <= 0.0) throw std::domain_error("gamma_p: shape must be positive");
    if (x <= 0.0) return 0.0;
    return x < a + 1.0 ? gamma_p_series(a, x) : 1.0 - gamma_q_cf(a, x);
}

double gamma_p_inverse(double a, double p) {
    if (!(p > 0.0) || !(p < 1.0))
        throw std::domain_error("gamma_p_inverse: argument must lie in (0,1)");
    // Wilson-Hilferty start, then safeguarded Newton on P(a, x) - p
    double g = std::lgamma(a);
    double x;
    {
        double t = normal_quantile(p);
        double w = 1.0 - 1.0 / (9.0 * a) + t / (3.0 * std::sqrt(a));
        x = a * w * w * w;
        if (!(x > 0.0)) x = std::exp((std::log(p * a) + g) / a);
    }
    double lo = 0.0, hi = INFINITY;
    for (int it = 0; it < 200; ++it) {
        double f = gamma_p(a, x) - p;
        if (f > 0.0) hi = x; else lo = x;
        double logpdf = -x + (a - 1.0) * std::log(x) - g;
        double step = f * std::exp(-logpdf);
        double nx = x - step;
        if (!(nx > lo) || !(nx < hi)) nx = std::isinf(hi) ? x * 2.0 : 0.5 * (lo + hi);
        if (std::fabs(nx - x) <= 1e-14 * (1.0 + std::fabs(x))) { x = nx; break; }
        x = nx;
    }
    return x;
}

}  // namespace socnet
