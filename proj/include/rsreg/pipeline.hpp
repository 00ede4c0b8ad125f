#pragma once

#include <optional>

#include "rsreg/huber.hpp"
#include "rsreg/intercept.hpp"
#include "rsreg/model.hpp"
#include "rsreg/mom.hpp"
#include "rsreg/slope.hpp"

namespace rsreg {

enum class CLambdaMode { auto_from_data, explicit_value };

struct CLambdaConfig {
    CLambdaMode mode = CLambdaMode::auto_from_data;
    double multiplier = 0.004;  // auto: multiplier * L * rho_hat
    double value = 0.0;         // explicit
};

enum class InterceptMethodKind { sqrt_slope, mom };

struct InterceptMethodConfig {
    InterceptMethodKind kind = InterceptMethodKind::sqrt_slope;
    IotaRegime regime = IotaRegime::subgaussian;
    double moment_order_M = 3.0;
    std::optional<std::size_t> known_o;  // sqrt_slope: flat iota weights
    std::size_t known_o_upper = 0;       // mom: block count rule
    InterceptSolverConfig solver;
};

struct PipelineConfig {
    double c_ini = 1.0;
    double c_h = 72.0;
    CLambdaConfig c_lambda;
    int n_iter = 30;
    double scale_rtol = 1e-3;  // early stop once the scale trace settles
    std::optional<std::size_t> block_count_override;
    InterceptMethodConfig intercept;
    std::optional<TheoryParams> theory;
    HuberSolverConfig solver;

    double delta() const { return theory ? theory->delta : 1.0 / 9.0; }
};

/// Pair differencing: row i of the output is
/// ((y_i - y_{n+i})/sqrt(2), (x_i - x_{n+i})/sqrt(2)), i = 1..n, m = 2n.
/// Eliminates the intercept while preserving covariance and noise scale.
Dataset normalize_pairs(const Dataset& data);

/// multiplier * L * rho_hat, where rho_hat is the largest per-column sample
/// standard deviation of the covariates. Errors when every column has zero
/// variance.
double auto_c_lambda(const Dataset& norm_data, double multiplier, double L = 1.0);

struct CoefficientsResult {
    Vector beta_hat;
    Vector varsigma_trace;  // trace[0] == c_ini
    int iterations_used = 0;
    bool early_stopped = false;
    bool all_converged = true;
    double c_lambda_used = 0.0;
    std::vector<StageDiagnostic> diagnostics;
};

/// Alternates the penalized Huber solve with the median-of-means scale
/// update, warm-starting each solve from the previous iterate. Stops early
/// once |scale_l - scale_{l-1}| <= scale_rtol * scale_l.
CoefficientsResult coefficients_estimation(const Dataset& norm_data, const PipelineConfig& cfg,
                                           const SlopeWeights& lam);

/// Full pipeline: normalize, estimate coefficients on the n differenced
/// rows, then estimate the intercept from all 2n original rows using the
/// final coefficients.
FitResult adaptive_estimate(const Dataset& data, const PipelineConfig& cfg);

}  // namespace rsreg
