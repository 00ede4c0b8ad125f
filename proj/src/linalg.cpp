#include "rsreg/linalg.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace rsreg {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double norm2_diff(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

Vector matvec(const Matrix& X, std::span<const double> b) {
    Vector y(X.rows());
    for (std::size_t i = 0; i < X.rows(); ++i) y[i] = dot(X.row(i), b);
    return y;
}

Vector matvec_t(const Matrix& X, std::span<const double> r) {
    Vector y(X.cols(), 0.0);
    for (std::size_t i = 0; i < X.rows(); ++i) {
        const auto row = X.row(i);
        const double ri = r[i];
        if (ri == 0.0) continue;
        for (std::size_t j = 0; j < X.cols(); ++j) y[j] += ri * row[j];
    }
    return y;
}

double quad_form(const Matrix& S, std::span<const double> v) {
    double s = 0.0;
    for (std::size_t i = 0; i < S.rows(); ++i) s += v[i] * dot(S.row(i), v);
    return s;
}

double spectral_norm_sq(const Matrix& X, double rel_tol, int max_iters) {
    const std::size_t d = X.cols();
    if (d == 0 || X.rows() == 0) return 0.0;

    // Fixed pseudo-random start so repeated calls are bit-identical.
    std::mt19937_64 gen(0xD1B54A32D192ED03ULL);
    Vector v(d);
    for (auto& vi : v) vi = ((gen() >> 11) * 0x1.0p-53) - 0.5;
    double vnorm = norm2(v);
    if (vnorm == 0.0) v[0] = 1.0, vnorm = 1.0;
    for (auto& vi : v) vi /= vnorm;

    double lambda = 0.0;
    for (int it = 0; it < max_iters; ++it) {
        Vector xv = matvec(X, v);
        Vector w = matvec_t(X, xv);
        const double wnorm = norm2(w);
        if (wnorm == 0.0) return 0.0;  // v in the null space and X^T X v = 0
        const double lambda_new = dot(w, v);
        for (std::size_t j = 0; j < d; ++j) v[j] = w[j] / wnorm;
        if (it > 0 && std::abs(lambda_new - lambda) <= rel_tol * std::abs(lambda_new)) {
            return lambda_new;
        }
        lambda = lambda_new;
    }
    return lambda;
}

}  // namespace rsreg
