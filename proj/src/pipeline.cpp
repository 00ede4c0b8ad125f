#include "rsreg/pipeline.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rsreg {

namespace {

[[noreturn]] void rethrow_with_stage(const char* stage, const std::exception& e) {
    throw std::runtime_error(std::string(stage) + ": " + e.what());
}

double resolve_c_lambda(const Dataset& norm_data, const PipelineConfig& cfg) {
    if (cfg.c_lambda.mode == CLambdaMode::explicit_value) {
        if (!(cfg.c_lambda.value > 0.0))
            throw std::invalid_argument("explicit c_lambda must be positive");
        return cfg.c_lambda.value;
    }
    const double L = cfg.theory ? cfg.theory->L : 1.0;
    try {
        return auto_c_lambda(norm_data, cfg.c_lambda.multiplier, L);
    } catch (const std::invalid_argument&) {
        // Degenerate covariates (all columns constant). Any positive penalty
        // gives the same zero coefficient fit; keep the nominal magnitude.
        return cfg.c_lambda.multiplier * L;
    }
}

}  // namespace

Dataset normalize_pairs(const Dataset& data) {
    validate_dataset(data);
    const std::size_t m = data.m();
    if (m % 2 != 0) throw std::invalid_argument("pair differencing needs an even sample count");
    const std::size_t n = m / 2;
    const std::size_t d = data.d();
    const double inv_rt2 = 1.0 / std::sqrt(2.0);

    Dataset out;
    out.y.resize(n);
    out.X = Matrix(n, d);
    for (std::size_t i = 0; i < n; ++i) {
        out.y[i] = (data.y[i] - data.y[n + i]) * inv_rt2;
        for (std::size_t j = 0; j < d; ++j)
            out.X(i, j) = (data.X(i, j) - data.X(n + i, j)) * inv_rt2;
    }
    return out;
}

double auto_c_lambda(const Dataset& norm_data, double multiplier, double L) {
    validate_dataset(norm_data);
    if (!(multiplier > 0.0)) throw std::invalid_argument("multiplier must be positive");
    const std::size_t n = norm_data.m();
    if (n < 2) throw std::invalid_argument("need at least 2 rows to estimate column scale");

    double rho_hat = 0.0;
    for (std::size_t j = 0; j < norm_data.d(); ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += norm_data.X(i, j);
        mean /= static_cast<double>(n);
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double c = norm_data.X(i, j) - mean;
            ss += c * c;
        }
        rho_hat = std::max(rho_hat, std::sqrt(ss / static_cast<double>(n - 1)));
    }
    if (rho_hat == 0.0)
        throw std::invalid_argument("every covariate column has zero variance");
    return multiplier * L * rho_hat;
}

CoefficientsResult coefficients_estimation(const Dataset& norm_data, const PipelineConfig& cfg,
                                           const SlopeWeights& lam) {
    validate_dataset(norm_data);
    if (!(cfg.c_ini > 0.0) || !(cfg.c_h > 0.0) || cfg.n_iter < 1)
        throw std::invalid_argument("invalid pipeline config");
    const std::size_t n = norm_data.m();

    CoefficientsResult res;
    res.c_lambda_used = resolve_c_lambda(norm_data, cfg);
    const std::size_t block_count = cfg.block_count_override
                                        ? *cfg.block_count_override
                                        : (n >= 3 ? default_block_count(n, cfg.delta()) : 1);

    HuberSolverConfig solver_cfg = cfg.solver;
    if (solver_cfg.lipschitz_hint <= 0.0)
        solver_cfg.lipschitz_hint = spectral_norm_sq(norm_data.X);

    // The per-sample loss carries an implicit 1/n (the proofs bound the
    // averaged gradient against an n-free penalty constant), so the solver's
    // literal sum formulation takes the penalty constant scaled by n.
    const double c_lambda_solver = res.c_lambda_used * static_cast<double>(n);

    res.varsigma_trace.push_back(cfg.c_ini);
    std::optional<Vector> warm;
    for (int l = 1; l <= cfg.n_iter; ++l) {
        HuberFit fit = solve_penalized_huber(norm_data, cfg.c_h, res.varsigma_trace.back(),
                                             c_lambda_solver, lam, solver_cfg, warm);
        res.all_converged = res.all_converged && fit.diag.converged;
        res.diagnostics.push_back({"huber[" + std::to_string(l) + "]", fit.diag.objective,
                                   to_string(fit.diag.termination), fit.diag.iterations});

        Vector r = matvec(norm_data.X, fit.beta);
        for (std::size_t i = 0; i < n; ++i) r[i] = norm_data.y[i] - r[i];
        const double varsigma = robust_absolute_moment(r, block_count);

        res.beta_hat = fit.beta;
        warm = std::move(fit.beta);
        const double prev = res.varsigma_trace.back();
        res.varsigma_trace.push_back(varsigma);
        res.iterations_used = l;
        if (std::abs(varsigma - prev) <= cfg.scale_rtol * varsigma) {
            res.early_stopped = true;
            break;
        }
    }
    return res;
}

FitResult adaptive_estimate(const Dataset& data, const PipelineConfig& cfg) {
    Dataset norm;
    try {
        norm = normalize_pairs(data);
    } catch (const std::exception& e) {
        rethrow_with_stage("normalizing", e);
    }

    CoefficientsResult coef;
    try {
        const SlopeWeights lam = lambda_weights(data.d(), norm.m());
        coef = coefficients_estimation(norm, cfg, lam);
    } catch (const std::exception& e) {
        rethrow_with_stage("coefficients-estimation", e);
    }

    FitResult out;
    out.beta_hat = coef.beta_hat;
    out.varsigma_trace = coef.varsigma_trace;
    out.iterations_used = coef.iterations_used;
    out.solver_diagnostics = coef.diagnostics;

    try {
        const std::size_t m = data.m();
        Vector z = matvec(data.X, out.beta_hat);
        for (std::size_t i = 0; i < m; ++i) z[i] = data.y[i] - z[i];

        if (cfg.intercept.kind == InterceptMethodKind::sqrt_slope) {
            const SlopeWeights iota = iota_weights(m, cfg.intercept.regime,
                                                   cfg.intercept.moment_order_M,
                                                   cfg.intercept.known_o);
            const InterceptFit fit = solve_intercept(z, iota, cfg.intercept.solver);
            out.mu_hat = fit.mu_hat;
            out.solver_diagnostics.push_back({"intercept_sqrt_slope", fit.objective,
                                              fit.converged ? "objective" : "max_outer",
                                              fit.outer_iterations});
        } else {
            const std::size_t bprime =
                default_block_count(m, cfg.delta(), cfg.intercept.known_o_upper);
            out.mu_hat = mom_intercept(z, bprime);
            out.solver_diagnostics.push_back(
                {"intercept_mom", 0.0, "exact", static_cast<int>(bprime)});
        }
    } catch (const std::exception& e) {
        rethrow_with_stage("intercept-estimation", e);
    }
    return out;
}

}  // namespace rsreg
