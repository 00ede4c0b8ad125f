#include "rsreg/huber.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rsreg {

namespace {

constexpr double kOptTol = 1e-7;

Vector residuals(const Dataset& data, std::span<const double> beta) {
    Vector r = matvec(data.X, beta);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = data.y[i] - r[i];
    return r;
}

// psi(r) applied elementwise; the gradient of the smooth loss is -X^T psi(r).
// scale <= 0 selects the squared loss (psi = identity).
void apply_psi(Vector& r, double scale) {
    if (scale <= 0.0) return;
    for (auto& ri : r) ri = scale * huber_deriv(ri / scale);
}

double smooth_value(std::span<const double> r, double scale) {
    double s = 0.0;
    if (scale <= 0.0) {
        for (double ri : r) s += 0.5 * ri * ri;
    } else {
        for (double ri : r) s += scale * scale * huber_value(ri / scale);
    }
    return s;
}

struct Point {
    Vector beta;
    Vector grad;
    double smooth = 0.0;
};

HuberFit solve_composite(const Dataset& data, const SlopeWeights& lam, double penalty_weight,
                         const HuberSolverConfig& cfg, const std::optional<Vector>& warm_start,
                         double scale) {
    validate_dataset(data);
    const std::size_t d = data.d();
    if (lam.size() != d)
        throw std::invalid_argument("length-mismatch: lambda weights vs covariate count");
    if (!(penalty_weight > 0.0)) throw std::invalid_argument("penalty weight must be positive");
    if (cfg.max_iters < 1 || !(cfg.rel_obj_tol > 0.0) || !(cfg.rel_obj_tol < 1.0))
        throw std::invalid_argument("invalid solver config");

    double lip = cfg.lipschitz_hint > 0.0 ? cfg.lipschitz_hint : spectral_norm_sq(data.X);
    // Guard against power-iteration underestimation so fixed steps still descend.
    lip = std::max(lip * (1.0 + 1e-6), 1e-300);

    const auto eval = [&](Vector beta) {
        Point p;
        Vector r = residuals(data, beta);
        p.smooth = smooth_value(r, scale);
        apply_psi(r, scale);
        p.grad = matvec_t(data.X, r);
        for (auto& g : p.grad) g = -g;
        p.beta = std::move(beta);
        return p;
    };
    const auto objective = [&](const Point& p) {
        return p.smooth + penalty_weight * slope_norm(p.beta, lam);
    };
    // One proximal-gradient step from p with the given step size.
    const auto prox_step = [&](const Point& p, double step) {
        Vector z(d);
        for (std::size_t j = 0; j < d; ++j) z[j] = p.beta[j] - step * p.grad[j];
        return prox_sorted_l1(z, lam, step * penalty_weight);
    };
    // Backtracked step from p; returns the accepted candidate and step used.
    const auto forward = [&](const Point& p, double& step) {
        Vector z = prox_step(p, step);
        if (cfg.step_rule == StepRule::backtracking) {
            for (int tries = 0; tries < 60; ++tries) {
                const double fz = smooth_value(residuals(data, z), scale);
                double q = p.smooth, sq = 0.0;
                for (std::size_t j = 0; j < d; ++j) {
                    const double dj = z[j] - p.beta[j];
                    q += p.grad[j] * dj;
                    sq += dj * dj;
                }
                if (fz <= q + sq / (2.0 * step) + 1e-12 * std::abs(fz)) break;
                step *= cfg.backtrack_beta;
                z = prox_step(p, step);
            }
        }
        return z;
    };

    Point x = eval(warm_start ? *warm_start : Vector(d, 0.0));
    double fx = objective(x);
    Point y = x;
    bool y_is_x = true;
    double tk = 1.0;
    double step0 = 1.0 / lip;

    SolveDiagnostics diag;
    diag.objective_trace.push_back(fx);

    for (int iter = 1; iter <= cfg.max_iters; ++iter) {
        diag.iterations = iter;

        // Optimality residual at x, with the fixed 1/L map.
        Vector zx = prox_step(x, 1.0 / lip);
        const double res = norm2_diff(x.beta, zx);
        diag.opt_residual = res;
        if (res <= kOptTol * (1.0 + norm2(x.beta))) {
            diag.termination = Termination::residual;
            diag.converged = true;
            diag.objective = fx;
            return {std::move(x.beta), std::move(diag)};
        }

        double step = step0;
        Vector zy = y_is_x ? zx : forward(y, step);
        Point cand = eval(std::move(zy));
        double fcand = objective(cand);

        if (cfg.restart && fcand > fx) {
            // Momentum overshoot: plain descent step from x, momentum reset.
            cand = eval(std::move(zx));
            fcand = objective(cand);
            tk = 1.0;
            ++diag.restarts;
        }

        const double tk1 = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
        Point ynext;
        ynext.beta.resize(d);
        const double mom = (tk - 1.0) / tk1;
        for (std::size_t j = 0; j < d; ++j)
            ynext.beta[j] = cand.beta[j] + mom * (cand.beta[j] - x.beta[j]);
        tk = tk1;

        const double relchange = std::abs(fx - fcand) / std::max(1.0, std::abs(fx));
        x = std::move(cand);
        fx = fcand;
        diag.objective_trace.push_back(fx);

        if (mom == 0.0) {
            y = x;
            y_is_x = true;
        } else {
            y = eval(std::move(ynext.beta));
            y_is_x = false;
        }

        if (relchange < cfg.rel_obj_tol) {
            // Accept the stall only once the optimality contract also holds;
            // otherwise keep driving the residual down.
            Vector zstall = prox_step(x, 1.0 / lip);
            if (norm2_diff(x.beta, zstall) <= kOptTol * (1.0 + norm2(x.beta))) {
                diag.termination = Termination::objective;
                diag.converged = true;
                break;
            }
        }
        if (iter == cfg.max_iters) diag.termination = Termination::max_iters;
    }

    // Report the residual at the point actually returned.
    Vector zx = prox_step(x, 1.0 / lip);
    diag.opt_residual = norm2_diff(x.beta, zx);
    diag.converged = diag.termination != Termination::max_iters;
    diag.objective = fx;
    return {std::move(x.beta), std::move(diag)};
}

}  // namespace

std::string to_string(Termination t) {
    switch (t) {
        case Termination::residual: return "residual";
        case Termination::objective: return "objective";
        default: return "max_iters";
    }
}

double huber_smooth_value(std::span<const double> beta, const Dataset& data, double scale) {
    if (!(scale > 0.0)) throw std::invalid_argument("nonpositive scale");
    return smooth_value(residuals(data, beta), scale);
}

Vector huber_smooth_gradient(std::span<const double> beta, const Dataset& data, double scale) {
    if (!(scale > 0.0)) throw std::invalid_argument("nonpositive scale");
    Vector r = residuals(data, beta);
    apply_psi(r, scale);
    Vector g = matvec_t(data.X, r);
    for (auto& gj : g) gj = -gj;
    return g;
}

double penalized_huber_objective(std::span<const double> beta, const Dataset& data, double c_h,
                                 double varsigma, double c_lambda, const SlopeWeights& lam) {
    if (!(c_h > 0.0) || !(varsigma > 0.0) || !(c_lambda > 0.0))
        throw std::invalid_argument("nonpositive scale");
    const double s = c_h * varsigma;
    return huber_smooth_value(beta, data, s) + c_lambda * s * slope_norm(beta, lam);
}

HuberFit solve_penalized_huber(const Dataset& data, double c_h, double varsigma, double c_lambda,
                               const SlopeWeights& lam, const HuberSolverConfig& cfg,
                               const std::optional<Vector>& warm_start) {
    if (!(c_h > 0.0) || !(varsigma > 0.0) || !(c_lambda > 0.0))
        throw std::invalid_argument("nonpositive scale");
    const double s = c_h * varsigma;
    return solve_composite(data, lam, c_lambda * s, cfg, warm_start, s);
}

HuberFit solve_penalized_least_squares(const Dataset& data, double penalty,
                                       const SlopeWeights& lam, const HuberSolverConfig& cfg,
                                       const std::optional<Vector>& warm_start) {
    return solve_composite(data, lam, penalty, cfg, warm_start, /*scale=*/0.0);
}

}  // namespace rsreg
