#include "rsreg/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rsreg {

namespace {

double student_scale(const NoiseSpec& s) {
    return s.sigma_star * std::sqrt((s.dof - 2.0) / s.dof);
}

double pareto_scale(const NoiseSpec& s) {
    return s.sigma_star * std::sqrt((s.tail_index - 2.0) / s.tail_index);
}

}  // namespace

void SynthConfig::validate() const {
    if (n_pairs < 1) throw std::invalid_argument("n_pairs must be >= 1");
    if (d < 1) throw std::invalid_argument("d must be >= 1");
    if (s > d) throw std::invalid_argument("sparsity s must be <= d");
    noise.validate();
    if (outliers.o > 2 * n_pairs) throw std::invalid_argument("outlier count exceeds sample count");
    if (covariate_cov.shape == CovShape::equicorrelated &&
        !(covariate_cov.rho_c >= 0.0 && covariate_cov.rho_c < 1.0))
        throw std::invalid_argument("equicorrelated rho_c must lie in [0, 1)");
}

CovariateDraw gen_covariates(const SynthConfig& cfg, Rng& rng) {
    const std::size_t m = 2 * cfg.n_pairs;
    const std::size_t d = cfg.d;
    CovariateDraw out;
    out.X = Matrix(m, d);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < d; ++j) out.X(i, j) = rng.normal();

    switch (cfg.covariate_cov.shape) {
        case CovShape::identity:
            out.sigma = Matrix::identity(d);
            break;
        case CovShape::diagonal: {
            const Vector& v = cfg.covariate_cov.diag_values;
            if (v.size() != d)
                throw std::invalid_argument("diagonal covariance needs d values");
            for (double vj : v)
                if (!(vj > 0.0))
                    throw std::invalid_argument("requested covariance is not positive definite");
            out.sigma = Matrix(d, d);
            for (std::size_t j = 0; j < d; ++j) out.sigma(j, j) = v[j];
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < d; ++j) out.X(i, j) *= std::sqrt(v[j]);
            break;
        }
        case CovShape::equicorrelated: {
            const double rho = cfg.covariate_cov.rho_c;
            if (!(rho >= 0.0 && rho < 1.0))
                throw std::invalid_argument("requested covariance is not positive definite");
            // Sigma^{1/2} = a I + b 11^T in closed form.
            const double a = std::sqrt(1.0 - rho);
            const double b =
                (std::sqrt(1.0 - rho + static_cast<double>(d) * rho) - a) / static_cast<double>(d);
            for (std::size_t i = 0; i < m; ++i) {
                auto row = out.X.row(i);
                double s = 0.0;
                for (double x : row) s += x;
                for (auto& x : row) x = a * x + b * s;
            }
            out.sigma = Matrix(d, d, rho);
            for (std::size_t j = 0; j < d; ++j) out.sigma(j, j) = 1.0;
            break;
        }
    }
    return out;
}

NoiseDraw gen_noise(const NoiseSpec& spec, std::size_t count, Rng& rng) {
    spec.validate();
    NoiseDraw out;
    out.values.resize(count);
    switch (spec.family) {
        case NoiseFamily::none:
            std::fill(out.values.begin(), out.values.end(), 0.0);
            break;
        case NoiseFamily::gaussian:
            for (auto& v : out.values) v = spec.sigma_star * rng.normal();
            break;
        case NoiseFamily::student_t: {
            const double c = student_scale(spec);
            for (auto& v : out.values) v = c * rng.student_t(spec.dof);
            break;
        }
        case NoiseFamily::pareto_symmetric: {
            const double c = pareto_scale(spec);
            for (auto& v : out.values) v = rng.pareto_symmetric(spec.tail_index, c);
            break;
        }
    }
    out.varsigma_star = analytic_varsigma_star(spec);
    return out;
}

OutlierDraw inject_outliers(const Vector& y, const OutlierSpec& spec, const Matrix& X, Rng& rng) {
    const std::size_t m = y.size();
    if (spec.o > m) throw std::invalid_argument("outlier count exceeds sample count");

    OutlierDraw out;
    out.y = y;
    out.theta.assign(m, 0.0);
    if (spec.o == 0) return out;

    switch (spec.placement) {
        case OutlierPlacement::first_o:
            out.indices.resize(spec.o);
            std::iota(out.indices.begin(), out.indices.end(), 0);
            break;
        case OutlierPlacement::random_uniform: {
            std::vector<std::size_t> pool(m);
            std::iota(pool.begin(), pool.end(), 0);
            for (std::size_t i = 0; i < spec.o; ++i)
                std::swap(pool[i], pool[i + rng.below(m - i)]);
            out.indices.assign(pool.begin(), pool.begin() + spec.o);
            std::sort(out.indices.begin(), out.indices.end());
            break;
        }
        case OutlierPlacement::adversarial_leverage: {
            std::vector<std::size_t> order(m);
            std::iota(order.begin(), order.end(), 0);
            Vector lev(m);
            for (std::size_t i = 0; i < m; ++i) lev[i] = norm2(X.row(i));
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return lev[a] != lev[b] ? lev[a] > lev[b] : a < b;
            });
            out.indices.assign(order.begin(), order.begin() + spec.o);
            std::sort(out.indices.begin(), out.indices.end());
            break;
        }
    }

    const double root_m = std::sqrt(static_cast<double>(m));
    for (std::size_t r = 0; r < out.indices.size(); ++r) {
        const std::size_t i = out.indices[r];
        double add;
        if (spec.magnitude_mode == OutlierMagnitudeMode::sqrt_n_scaled) {
            double sgn = 1.0;
            if (spec.sign == OutlierSign::alternating) sgn = (r % 2 == 0) ? 1.0 : -1.0;
            if (spec.sign == OutlierSign::random) sgn = rng.uniform() < 0.5 ? -1.0 : 1.0;
            add = root_m * spec.theta_value * sgn;
        } else {
            add = spec.absolute_value;
        }
        out.y[i] += add;
        out.theta[i] = add / root_m;
    }
    return out;
}

SynthInstance make_instance(const SynthConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);
    const std::size_t m = 2 * cfg.n_pairs;

    CovariateDraw cov = gen_covariates(cfg, rng);
    NoiseDraw noise = gen_noise(cfg.noise, m, rng);

    Vector beta_star(cfg.d, 0.0);
    for (std::size_t j = 0; j < cfg.s; ++j)
        beta_star[j] = (j % 2 == 0 ? cfg.beta_scale : -cfg.beta_scale);

    Vector y = matvec(cov.X, beta_star);
    for (std::size_t i = 0; i < m; ++i) y[i] += cfg.mu_star + noise.values[i];

    OutlierDraw out = inject_outliers(y, cfg.outliers, cov.X, rng);

    SynthInstance inst;
    inst.data = Dataset{std::move(out.y), std::move(cov.X)};
    inst.truth = GroundTruth{std::move(beta_star), cfg.mu_star, std::move(out.indices),
                             std::move(out.theta), cfg.noise};
    inst.sigma = std::move(cov.sigma);
    validate_dataset(inst.data);
    return inst;
}

double analytic_abs_moment(const NoiseSpec& spec, double order) {
    if (!(order > 0.0)) throw std::invalid_argument("moment order must be positive");
    switch (spec.family) {
        case NoiseFamily::none:
            return 0.0;
        case NoiseFamily::gaussian:
            // E|Z|^p = 2^{p/2} Gamma((p+1)/2) / sqrt(pi)
            return std::pow(spec.sigma_star, order) * std::pow(2.0, order / 2.0) *
                   std::tgamma((order + 1.0) / 2.0) / std::sqrt(M_PI);
        case NoiseFamily::student_t: {
            if (!(order < spec.dof))
                throw std::invalid_argument("student_t |moment| of this order does not exist");
            const double nu = spec.dof;
            const double base = std::pow(nu, order / 2.0) * std::tgamma((order + 1.0) / 2.0) *
                                std::tgamma((nu - order) / 2.0) /
                                (std::sqrt(M_PI) * std::tgamma(nu / 2.0));
            return std::pow(student_scale(spec), order) * base;
        }
        case NoiseFamily::pareto_symmetric: {
            if (!(order < spec.tail_index))
                throw std::invalid_argument("pareto |moment| of this order does not exist");
            const double a = spec.tail_index;
            return std::pow(pareto_scale(spec), order) * a / (a - order);
        }
    }
    throw std::logic_error("unreachable");
}

double analytic_varsigma_star(const NoiseSpec& spec) { return analytic_abs_moment(spec, 1.0); }

}  // namespace rsreg
