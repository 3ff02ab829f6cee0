#pragma once

#include "socnet/distributions.hpp"

#include <string>
#include <vector>

namespace socnet {

enum class Association { Positive, Negative, SimpsonX, SimpsonY };

enum class HConstruction { ConvolutionPair, NormalRho, Projection };

// A 2-dimensional H-function: a bivariate map (0,1)^2 -> (0,1) that is
// monotone in both arguments after the association input flips and carries
// independent uniforms to a uniform output.
struct HFunction {
    HConstruction construction = HConstruction::NormalRho;
    Association association = Association::Positive;

    Distribution f1, f2, f12;  // ConvolutionPair
    double rho = 1.0;          // NormalRho
    int axis = 1;              // Projection

    double eval(double x, double y) const;
};

HFunction convolution_pair(Distribution f1, Distribution f2, Distribution f12,
                           Association assoc = Association::Positive);
HFunction normal_rho(double rho, Association assoc = Association::Positive);
HFunction projection(int axis, Association assoc = Association::Positive);

// custom pairs without an analytic sum CDF: trapezoid quadrature on 4096
// points across the [1e-8, 1-1e-8] quantile range of both components
HFunction convolution_pair_numeric(const Distribution& f1, const Distribution& f2,
                                   Association assoc = Association::Positive);

// noisy extension: s = 1/sqrt(1+sigma^2), t = sigma/sqrt(1+sigma^2),
// output Phi(s * Phi^-1(eval) + t * Phi^-1(eta)); exactly eval at sigma = 0
double eval_noisy(const HFunction& h, double x, double y, double eta, double sigma);

struct FailureSpec {
    double alpha = 1.0;  // in [0,1]
    HFunction base;
};

double eval_failure(const FailureSpec& spec, double x, double y, double eta);

// (x,y,eta) -> outer(inner(x,y), eta)
struct ChainedH {
    HFunction outer;
    HFunction inner;
    double eval(double x, double y, double eta) const;
};

ChainedH chain(HFunction outer, HFunction inner);

struct CatalogEntry {
    std::string name;
    HFunction h;
};

// shipped surface families, positive association; 17 NormalRho entries on a
// log-spaced rho grid in [1/8, 8], three convolution pairs, two projections
const std::vector<CatalogEntry>& h_catalog();

std::vector<double> normal_rho_grid();  // the 17 catalog rho values

}  // namespace socnet
