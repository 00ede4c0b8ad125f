#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "rsreg/model.hpp"
#include "rsreg/rng.hpp"

using namespace rsreg;

namespace {

Dataset small_dataset() {
    Dataset d;
    d.y = {1.0, 2.0};
    d.X = Matrix(2, 3);
    double v = 0.5;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 3; ++j) d.X(i, j) = v += 1.0;
    return d;
}

}  // namespace

TEST_CASE("validate_dataset") {
    const Dataset ok = small_dataset();
    CHECK_NOTHROW(validate_dataset(ok));

    Dataset bad = ok;
    bad.y.push_back(3.0);
    CHECK_THROWS_WITH_AS(validate_dataset(bad), doctest::Contains("dimension-mismatch"),
                         std::invalid_argument);

    Dataset nan_y;
    nan_y.y = {1.0, std::nan("")};
    nan_y.X = Matrix(2, 1, 1.0);
    CHECK_THROWS_WITH_AS(validate_dataset(nan_y), doctest::Contains("y[1]"),
                         std::invalid_argument);

    Dataset inf_x = ok;
    inf_x.X(1, 2) = INFINITY;
    CHECK_THROWS_WITH_AS(validate_dataset(inf_x), doctest::Contains("X[1][2]"),
                         std::invalid_argument);

    // Idempotent: validating twice returns the same object unchanged.
    const Dataset& again = validate_dataset(validate_dataset(ok));
    CHECK(again.y == ok.y);
    CHECK(again.X == ok.X);
}

TEST_CASE("error_metrics basics") {
    GroundTruth truth;
    truth.beta_star = {1.0, -1.0};
    truth.mu_star = 0.5;

    FitResult exact;
    exact.beta_hat = truth.beta_star;
    exact.mu_hat = truth.mu_star;
    const ErrorMetrics zero = error_metrics(exact, truth);
    CHECK(zero.l2_error == 0.0);
    CHECK(zero.sigma_norm_error == 0.0);
    CHECK(zero.mu_error == 0.0);

    FitResult off;
    off.beta_hat = {4.0, 3.0};  // diff (3, 4)
    off.mu_hat = -1.5;          // diff -2
    const ErrorMetrics em = error_metrics(off, truth, Matrix::identity(2));
    CHECK(em.l2_error == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(em.sigma_norm_error == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(em.mu_error == doctest::Approx(2.0).epsilon(1e-15));

    // Diagonal quadratic form.
    GroundTruth t2;
    t2.beta_star = {0.0, 0.0};
    FitResult r2;
    r2.beta_hat = {1.0, 0.0};
    Matrix sig(2, 2);
    sig(0, 0) = 4.0;
    sig(1, 1) = 1.0;
    CHECK(error_metrics(r2, t2, sig).sigma_norm_error == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("error_metrics errors") {
    GroundTruth truth;
    truth.beta_star = {1.0, 2.0};
    FitResult r;
    r.beta_hat = {1.0};
    CHECK_THROWS_AS(error_metrics(r, truth), std::invalid_argument);

    r.beta_hat = {2.0, 2.0};
    Matrix neg(2, 2);
    neg(0, 0) = -1.0;
    CHECK_THROWS_WITH_AS(error_metrics(r, truth, neg), doctest::Contains("positive semidefinite"),
                         std::invalid_argument);
}

TEST_CASE("error_metrics invariances") {
    Rng rng(21);
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t d = 2 + rng.below(6);
        GroundTruth truth;
        truth.beta_star.resize(d);
        FitResult fit;
        fit.beta_hat.resize(d);
        for (std::size_t j = 0; j < d; ++j) {
            truth.beta_star[j] = rng.normal();
            fit.beta_hat[j] = rng.normal();
        }
        Matrix sig(d, d);
        for (std::size_t j = 0; j < d; ++j) sig(j, j) = 0.5 + rng.uniform();

        const ErrorMetrics base = error_metrics(fit, truth, sig);

        // Simultaneous coordinate rotation leaves the metrics unchanged.
        GroundTruth truth_p;
        truth_p.beta_star.resize(d);
        FitResult fit_p;
        fit_p.beta_hat.resize(d);
        Matrix sig_p(d, d);
        for (std::size_t j = 0; j < d; ++j) {
            const std::size_t pj = (j + 1) % d;
            truth_p.beta_star[pj] = truth.beta_star[j];
            fit_p.beta_hat[pj] = fit.beta_hat[j];
            sig_p(pj, pj) = sig(j, j);
        }
        const ErrorMetrics perm = error_metrics(fit_p, truth_p, sig_p);
        CHECK(perm.l2_error == doctest::Approx(base.l2_error).epsilon(1e-13));
        CHECK(perm.sigma_norm_error == doctest::Approx(base.sigma_norm_error).epsilon(1e-13));

        // Sigma = c*I scales the Sigma-norm by sqrt(c).
        const double c = 0.1 + 3.0 * rng.uniform();
        Matrix ci(d, d);
        for (std::size_t j = 0; j < d; ++j) ci(j, j) = c;
        const ErrorMetrics scaled = error_metrics(fit, truth, ci);
        CHECK(scaled.sigma_norm_error ==
              doctest::Approx(std::sqrt(c) * base.l2_error).epsilon(1e-12));
    }
}

TEST_CASE("noise spec invariants") {
    NoiseSpec bad_t;
    bad_t.family = NoiseFamily::student_t;
    bad_t.dof = 2.0;
    bad_t.moment_order_M = 1.5;
    CHECK_THROWS_AS(bad_t.validate(), std::invalid_argument);

    NoiseSpec none;
    none.family = NoiseFamily::none;
    none.sigma_star = 1.0;
    CHECK_THROWS_AS(none.validate(), std::invalid_argument);
    none.sigma_star = 0.0;
    CHECK_NOTHROW(none.validate());
}
