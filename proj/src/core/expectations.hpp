#pragma once

#include <span>

#include "common.hpp"

namespace relaybf {

/// Arithmetic-mean eigenvalue functionals driving the multi-relay analysis:
/// E1 = mean x/(x+a), E2 = mean x/(x+a)^2, E3 = mean x^2/(x+a)^2, taken with
/// (theta, alpha_mmse) and (lambda, alpha_rzf).
struct EigExpectations {
    double E1_theta = 0.0;
    double E2_theta = 0.0;
    double E3_theta = 0.0;
    double E1_lambda = 0.0;
    double E2_lambda = 0.0;
    double E3_lambda = 0.0;
};

struct EigMeans {
    double E1 = 0.0;
    double E2 = 0.0;
    double E3 = 0.0;
};

EigMeans eigen_means(std::span<const double> samples, double alpha);

EigExpectations expectations(std::span<const double> theta_samples,
                             std::span<const double> lambda_samples, double alpha_mmse,
                             double alpha_rzf);

}  // namespace relaybf
