#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "rsreg/model.hpp"
#include "rsreg/slope.hpp"

namespace rsreg {

/// H(t) = t^2/2 for |t| <= 1, |t| - 1/2 otherwise. Convex, even, continuous.
inline double huber_value(double t) {
    const double a = std::abs(t);
    return a <= 1.0 ? 0.5 * t * t : a - 0.5;
}

/// Derivative of huber_value: t on the quadratic branch, sign(t) outside.
/// Odd and 1-Lipschitz; both branches agree at |t| = 1.
inline double huber_deriv(double t) {
    if (t > 1.0) return 1.0;
    if (t < -1.0) return -1.0;
    return t;
}

enum class StepRule { fixed_inverse_lipschitz, backtracking };

struct HuberSolverConfig {
    int max_iters = 10000;
    double rel_obj_tol = 1e-10;
    StepRule step_rule = StepRule::fixed_inverse_lipschitz;
    double backtrack_beta = 0.5;
    bool restart = true;
    double lipschitz_hint = 0.0;  // > 0 skips the power-iteration estimate
};

enum class Termination { residual, objective, max_iters };

std::string to_string(Termination t);

struct SolveDiagnostics {
    Termination termination = Termination::max_iters;
    bool converged = false;
    int iterations = 0;
    int restarts = 0;
    double objective = 0.0;
    double opt_residual = 0.0;  // ||x - prox(x - grad(x)/L)||_2 at the returned point
    Vector objective_trace;     // objective after every iteration, trace[0] at the start
};

struct HuberFit {
    Vector beta;
    SolveDiagnostics diag;
};

/// Smooth part sum_i s^2 H((y_i - x_i'b)/s) with s = huber scale.
double huber_smooth_value(std::span<const double> beta, const Dataset& data, double scale);

/// Gradient of the smooth part: -X^T [s * h(r/s)].
Vector huber_smooth_gradient(std::span<const double> beta, const Dataset& data, double scale);

/// sum_i (c_h*varsigma)^2 H(r_i/(c_h*varsigma)) + c_lambda*c_h*varsigma*||beta||_lam
double penalized_huber_objective(std::span<const double> beta, const Dataset& data, double c_h,
                                 double varsigma, double c_lambda, const SlopeWeights& lam);

/// Solves the SLOPE-penalized Huber problem by accelerated proximal gradient
/// with a monotone restart, fixed step 1/||X||_op^2 by default.
///
/// The returned point satisfies the composite-gradient residual bound
/// 1e-7*(1+||beta||) unless max_iters was exhausted, in which case the best
/// iterate is returned with diag.converged == false.
HuberFit solve_penalized_huber(const Dataset& data, double c_h, double varsigma, double c_lambda,
                               const SlopeWeights& lam, const HuberSolverConfig& cfg = {},
                               const std::optional<Vector>& warm_start = std::nullopt);

/// Same machinery with squared loss: 0.5*sum_i r_i^2 + penalty*||beta||_lam.
HuberFit solve_penalized_least_squares(const Dataset& data, double penalty,
                                       const SlopeWeights& lam, const HuberSolverConfig& cfg = {},
                                       const std::optional<Vector>& warm_start = std::nullopt);

}  // namespace rsreg
