#pragma once

#include <cstdint>

#include "rsreg/model.hpp"
#include "rsreg/rng.hpp"

namespace rsreg {

enum class CovShape { identity, diagonal, equicorrelated };

struct CovariateCov {
    CovShape shape = CovShape::identity;
    Vector diag_values;  // diagonal shape, length d, all > 0
    double rho_c = 0.0;  // equicorrelated shape, in [0, 1)
};

enum class OutlierPlacement { random_uniform, first_o, adversarial_leverage };
enum class OutlierMagnitudeMode { sqrt_n_scaled, absolute };
enum class OutlierSign { positive, alternating, random };

struct OutlierSpec {
    std::size_t o = 0;
    OutlierPlacement placement = OutlierPlacement::random_uniform;
    OutlierMagnitudeMode magnitude_mode = OutlierMagnitudeMode::sqrt_n_scaled;
    double theta_value = 1.0;    // sqrt_n_scaled: adds sqrt(m)*theta_value (signed)
    double absolute_value = 0.0; // absolute: adds this value verbatim
    OutlierSign sign = OutlierSign::positive;
};

struct SynthConfig {
    std::size_t n_pairs = 100;  // generates 2*n_pairs rows
    std::size_t d = 10;
    std::size_t s = 1;
    double beta_scale = 1.0;
    double mu_star = 0.0;
    CovariateCov covariate_cov;
    NoiseSpec noise;
    OutlierSpec outliers;
    std::uint64_t seed = 0;

    void validate() const;
};

struct SynthInstance {
    Dataset data;
    GroundTruth truth;
    Matrix sigma;  // covariance actually used for the covariates
};

struct CovariateDraw {
    Matrix X;
    Matrix sigma;
};

/// i.i.d. rows from N(0, Sigma) with Sigma given by cfg.covariate_cov.
/// Entries are drawn row-major, one normal per cell, before the shape
/// transform is applied; callers relying on determinism can count draws.
CovariateDraw gen_covariates(const SynthConfig& cfg, Rng& rng);

struct NoiseDraw {
    Vector values;
    double varsigma_star;  // analytic E|xi| for the scaled family
};

/// i.i.d. draws rescaled so the population standard deviation is sigma_star.
NoiseDraw gen_noise(const NoiseSpec& spec, std::size_t count, Rng& rng);

struct OutlierDraw {
    Vector y;
    std::vector<std::size_t> indices;  // ascending
    Vector theta;                      // length m, nonzero exactly on indices
};

/// Adds sqrt(m)-scaled (or fixed absolute) corruption at the chosen indices.
/// adversarial_leverage targets the o rows with the largest covariate norm.
OutlierDraw inject_outliers(const Vector& y, const OutlierSpec& spec, const Matrix& X, Rng& rng);

/// Full generative composition: beta* has s nonzeros of magnitude beta_scale,
/// alternating signs, on the first s coordinates; then
/// y = X beta* + mu* + noise + outliers. Fully determined by cfg.seed; draw
/// order is covariates, noise, outlier placement, outlier signs.
SynthInstance make_instance(const SynthConfig& cfg);

/// E|xi|^order for the scaled family; throws when the moment does not exist.
double analytic_abs_moment(const NoiseSpec& spec, double order);
double analytic_varsigma_star(const NoiseSpec& spec);

}  // namespace rsreg
