#pragma once

#include <span>

#include "rsreg/slope.hpp"

namespace rsreg {

struct InterceptSolverConfig {
    double c_iota = 80.0;  // penalty constant in front of ||theta||_iota
    int max_outer = 500;
    double rel_tol = 1e-9;
    double sigma_floor = 1e-12;
};

/// sqrt(sum_i (z_i - mu - sqrt(m)*theta_i)^2) + c_iota * ||theta||_iota
double sqrt_slope_objective(double mu, std::span<const double> theta, std::span<const double> z,
                            const SlopeWeights& iota, double c_iota);

struct InterceptFit {
    double mu_hat = 0.0;
    Vector theta_hat;
    double objective = 0.0;
    int outer_iterations = 0;
    bool converged = false;
    Vector objective_trace;
};

/// Block-coordinate iteration on the scaled form of the square-root problem:
///   sigma <- max(floor, sqrt(sum (z - mu - sqrt(m) theta)^2))
///   mu    <- mean(z - sqrt(m) theta)
///   theta <- prox_sorted_l1((z - mu)/sqrt(m), iota, c_iota*sigma/m)
/// Every update is an exact block minimization, so the objective never
/// increases. A final mu refresh enforces mu = mean(z - sqrt(m) theta)
/// exactly at the returned point.
InterceptFit solve_intercept(std::span<const double> z, const SlopeWeights& iota,
                             const InterceptSolverConfig& cfg = {});

}  // namespace rsreg
