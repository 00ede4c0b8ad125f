#include "rsreg/model.hpp"

#include <cmath>
#include <stdexcept>

namespace rsreg {

void NoiseSpec::validate() const {
    if (family == NoiseFamily::none) {
        if (sigma_star != 0.0)
            throw std::invalid_argument("noise family 'none' requires sigma_star == 0");
        return;
    }
    if (!(sigma_star > 0.0)) throw std::invalid_argument("sigma_star must be > 0");
    if (family == NoiseFamily::student_t) {
        if (!(dof > 2.0)) throw std::invalid_argument("student_t dof must be > 2");
        if (!(moment_order_M < dof))
            throw std::invalid_argument("moment_order_M must be < student_t dof");
    }
    if (family == NoiseFamily::pareto_symmetric && !(tail_index > 2.0))
        throw std::invalid_argument("pareto tail_index must be > 2");
    if (!(moment_order_M > 2.0))
        throw std::invalid_argument("moment_order_M must be > 2 (or infinity)");
}

void TheoryParams::validate() const {
    if (!(rho > 0.0) || !(kappa > 0.0)) throw std::invalid_argument("rho and kappa must be > 0");
    if (!(L >= 1.0)) throw std::invalid_argument("L must be >= 1");
    if (s < 1) throw std::invalid_argument("s must be >= 1");
    if (!(delta > 0.0) || !(delta < 1.0)) throw std::invalid_argument("delta must be in (0, 1)");
}

const Dataset& validate_dataset(const Dataset& data) {
    if (data.y.empty() || data.X.cols() == 0)
        throw std::invalid_argument("dataset must have m >= 1 and d >= 1");
    if (data.y.size() != data.X.rows())
        throw std::invalid_argument("dimension-mismatch: y has " + std::to_string(data.y.size()) +
                                    " entries but X has " + std::to_string(data.X.rows()) +
                                    " rows");
    for (std::size_t i = 0; i < data.y.size(); ++i)
        if (!std::isfinite(data.y[i]))
            throw std::invalid_argument("non-finite-entry: y[" + std::to_string(i) + "]");
    for (std::size_t i = 0; i < data.X.rows(); ++i)
        for (std::size_t j = 0; j < data.X.cols(); ++j)
            if (!std::isfinite(data.X(i, j)))
                throw std::invalid_argument("non-finite-entry: X[" + std::to_string(i) + "][" +
                                            std::to_string(j) + "]");
    return data;
}

ErrorMetrics error_metrics(const FitResult& result, const GroundTruth& truth,
                           const std::optional<Matrix>& sigma) {
    const std::size_t d = truth.beta_star.size();
    if (result.beta_hat.size() != d)
        throw std::invalid_argument("dimension-mismatch: beta_hat has " +
                                    std::to_string(result.beta_hat.size()) +
                                    " entries, beta_star has " + std::to_string(d));
    Vector diff(d);
    for (std::size_t j = 0; j < d; ++j) diff[j] = result.beta_hat[j] - truth.beta_star[j];

    ErrorMetrics out;
    out.l2_error = norm2(diff);
    out.mu_error = std::abs(result.mu_hat - truth.mu_star);
    if (sigma) {
        if (sigma->rows() != d || sigma->cols() != d)
            throw std::invalid_argument("dimension-mismatch: sigma must be d x d");
        const double q = quad_form(*sigma, diff);
        if (q < -1e-10 * (1.0 + dot(diff, diff)))
            throw std::invalid_argument("sigma is not positive semidefinite");
        out.sigma_norm_error = std::sqrt(std::max(q, 0.0));
    } else {
        out.sigma_norm_error = out.l2_error;
    }
    return out;
}

}  // namespace rsreg
