#include "socnet/hfunc.hpp"

#include "socnet/special.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace socnet {

namespace {

constexpr double kTop = 0.9999999999999999;  // largest double below 1
constexpr double kBottom = 1e-300;

double clamp_unit(double v) {
    if (v >= 1.0) return kTop;
    if (v <= 0.0) return kBottom;
    return v;
}

std::pair<double, double> flip(Association assoc, double x, double y) {
    switch (assoc) {
        case Association::Positive: return {x, y};
        case Association::Negative: return {1.0 - x, 1.0 - y};
        case Association::SimpsonX: return {1.0 - x, y};
        case Association::SimpsonY: return {x, 1.0 - y};
    }
    throw std::logic_error("flip: unknown association");
}

}  // namespace

double HFunction::eval(double x, double y) const {
    if (!(x > 0.0) || !(x < 1.0) || !(y > 0.0) || !(y < 1.0))
        throw std::domain_error("HFunction::eval: arguments must lie in (0,1)");
    auto [xp, yp] = flip(association, x, y);
    switch (construction) {
        case HConstruction::ConvolutionPair:
            return clamp_unit(f12.cdf(f1.quantile(xp) + f2.quantile(yp)));
        case HConstruction::NormalRho:
            return clamp_unit(normal_cdf((normal_quantile(xp) + rho * normal_quantile(yp)) /
                                         std::sqrt(1.0 + rho * rho)));
        case HConstruction::Projection:
            return axis == 1 ? xp : yp;
    }
    throw std::logic_error("HFunction::eval: unknown construction");
}

HFunction convolution_pair(Distribution f1, Distribution f2, Distribution f12,
                           Association assoc) {
    HFunction h;
    h.construction = HConstruction::ConvolutionPair;
    h.association = assoc;
    h.f1 = std::move(f1);
    h.f2 = std::move(f2);
    h.f12 = std::move(f12);
    return h;
}

HFunction normal_rho(double rho, Association assoc) {
    if (!(rho > 0.0)) throw std::invalid_argument("normal_rho: rho must be positive");
    HFunction h;
    h.construction = HConstruction::NormalRho;
    h.association = assoc;
    h.rho = rho;
    return h;
}

HFunction projection(int axis, Association assoc) {
    if (axis != 1 && axis != 2) throw std::invalid_argument("projection: axis must be 1 or 2");
    HFunction h;
    h.construction = HConstruction::Projection;
    h.association = assoc;
    h.axis = axis;
    return h;
}

HFunction convolution_pair_numeric(const Distribution& f1, const Distribution& f2,
                                   Association assoc) {
    constexpr int kPoints = 4096;
    constexpr double kTail = 1e-8;
    std::vector<double> t(kPoints);
    const double du = (1.0 - 2.0 * kTail) / static_cast<double>(kPoints - 1);
    for (int i = 0; i < kPoints; ++i) t[i] = f2.quantile(kTail + du * i);
    const double zLo = f1.quantile(kTail) + t.front();
    const double zHi = f1.quantile(1.0 - kTail) + t.back();
    std::vector<double> grid(kPoints), cdf(kPoints);
    const double dz = (zHi - zLo) / static_cast<double>(kPoints - 1);
    for (int j = 0; j < kPoints; ++j) {
        const double z = zLo + dz * j;
        grid[j] = z;
        // F12(z) = \int_0^1 F1(z - F2^{-1}(u)) du, trapezoid over u
        double acc = 0.5 * (f1.cdf(z - t.front()) + f1.cdf(z - t.back()));
        for (int i = 1; i + 1 < kPoints; ++i) acc += f1.cdf(z - t[i]);
        cdf[j] = acc * du;
    }
    // enforce monotonicity against quadrature jitter
    for (int j = 1; j < kPoints; ++j)
        if (cdf[j] < cdf[j - 1]) cdf[j] = cdf[j - 1];
    return convolution_pair(f1, f2, tabulated_dist(std::move(grid), std::move(cdf)), assoc);
}

double eval_noisy(const HFunction& h, double x, double y, double eta, double sigma) {
    if (!(eta > 0.0) || !(eta < 1.0))
        throw std::domain_error("eval_noisy: eta must lie in (0,1)");
    if (sigma < 0.0) throw std::domain_error("eval_noisy: sigma must be nonnegative");
    const double base = h.eval(x, y);
    if (sigma == 0.0) return base;
    const double denom = std::sqrt(1.0 + sigma * sigma);
    const double s = 1.0 / denom;
    const double t = sigma / denom;
    return clamp_unit(normal_cdf(s * normal_quantile(base) + t * normal_quantile(eta)));
}

double eval_failure(const FailureSpec& spec, double x, double y, double eta) {
    const double alpha = spec.alpha;
    if (alpha < 0.0 || alpha > 1.0)
        throw std::domain_error("eval_failure: alpha must lie in [0,1]");
    if (!(eta > 0.0) || !(eta < 1.0))
        throw std::domain_error("eval_failure: eta must lie in (0,1)");
    const double base = spec.base.eval(x, y);
    if (alpha == 1.0) return base;
    const double delta =
        eta > 1.0 - alpha ? 1.0 : std::pow(eta / (1.0 - alpha), 1.0 / (1.0 - alpha));
    return clamp_unit(std::pow(base, alpha) * std::pow(delta, 1.0 - alpha));
}

double ChainedH::eval(double x, double y, double eta) const {
    return outer.eval(inner.eval(x, y), eta);
}

ChainedH chain(HFunction outer, HFunction inner) {
    return ChainedH{std::move(outer), std::move(inner)};
}

std::vector<double> normal_rho_grid() {
    std::vector<double> rhos;
    rhos.reserve(17);
    for (int k = 0; k <= 16; ++k) rhos.push_back(std::pow(2.0, -3.0 + 0.375 * k));
    return rhos;
}

const std::vector<CatalogEntry>& h_catalog() {
    static const std::vector<CatalogEntry> catalog = [] {
        std::vector<CatalogEntry> out;
        for (double rho : normal_rho_grid())
            out.push_back({"normal_rho", normal_rho(rho)});
        out.push_back({"exp_gamma",
                       convolution_pair(exponential_dist(1.0), exponential_dist(1.0),
                                        gamma_dist(2.0, 1.0))});
        out.push_back({"uniform_triangular",
                       convolution_pair(uniform_dist(0.0, 1.0), uniform_dist(0.0, 1.0),
                                        triangular_dist(0.0, 2.0))});
        out.push_back({"neg_half_gamma",
                       convolution_pair(neg_gamma_dist(0.5, 1.0), neg_gamma_dist(0.5, 1.0),
                                        neg_gamma_dist(1.0, 1.0))});
        out.push_back({"projection_1", projection(1)});
        out.push_back({"projection_2", projection(2)});
        return out;
    }();
    return catalog;
}

}  // namespace socnet
