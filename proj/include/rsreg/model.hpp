#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "rsreg/linalg.hpp"

namespace rsreg {

/// Response vector paired with its covariate matrix; the universal fit input.
struct Dataset {
    Vector y;  // length m
    Matrix X;  // m x d, row i is the covariate vector of sample i

    std::size_t m() const { return y.size(); }
    std::size_t d() const { return X.cols(); }
};

enum class NoiseFamily { gaussian, student_t, pareto_symmetric, none };

struct NoiseSpec {
    NoiseFamily family = NoiseFamily::gaussian;
    double sigma_star = 1.0;  // target standard deviation
    double dof = 4.0;         // student_t only, must be > 2
    double tail_index = 3.0;  // pareto_symmetric only, must be > 2
    double moment_order_M = std::numeric_limits<double>::infinity();

    void validate() const;
};

struct GroundTruth {
    Vector beta_star;
    double mu_star = 0.0;
    std::vector<std::size_t> outlier_indices;
    Vector theta;  // nonzero exactly on outlier_indices
    NoiseSpec noise;
};

/// Constants of the theory: used for block-count defaults and the
/// predicted_rate diagnostic, never estimated from data.
struct TheoryParams {
    double rho = 1.0;    // bound on the largest marginal covariate std
    double kappa = 1.0;  // curvature (restricted-eigenvalue-type) constant
    double L = 1.0;      // sub-Gaussian constant, >= 1
    std::size_t s = 1;
    std::size_t o = 0;
    double delta = 1.0 / 9.0;  // confidence level

    void validate() const;
};

struct StageDiagnostic {
    std::string stage;
    double objective = 0.0;
    std::string termination;
    int iterations = 0;
};

struct FitResult {
    Vector beta_hat;
    double mu_hat = 0.0;
    Vector varsigma_trace;  // scale estimates, trace[0] is the initializer
    int iterations_used = 0;
    std::vector<StageDiagnostic> solver_diagnostics;
};

/// Throws std::invalid_argument (naming the offending index) unless the
/// dataset invariants hold: matching sizes, all entries finite, m,d >= 1.
const Dataset& validate_dataset(const Dataset& data);

struct ErrorMetrics {
    double l2_error = 0.0;
    double sigma_norm_error = 0.0;
    double mu_error = 0.0;
};

/// l2, Sigma-norm and intercept errors of a fit against ground truth.
/// When sigma is absent the identity is used and sigma_norm_error == l2_error.
ErrorMetrics error_metrics(const FitResult& result, const GroundTruth& truth,
                           const std::optional<Matrix>& sigma = std::nullopt);

}  // namespace rsreg
