#include "rsreg/slope.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rsreg {

SlopeWeights SlopeWeights::checked(Vector w) {
    if (w.empty()) throw std::invalid_argument("weights must be nonempty");
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!(w[i] >= 0.0)) throw std::invalid_argument("weights must be nonnegative");
        if (i > 0 && w[i] > w[i - 1])
            throw std::invalid_argument("weights must be non-increasing");
    }
    if (!(w.front() > 0.0))
        throw std::invalid_argument("at least one weight must be strictly positive");
    return SlopeWeights{std::move(w)};
}

double slope_norm(std::span<const double> v, const SlopeWeights& w) {
    if (v.size() != w.size())
        throw std::invalid_argument("length-mismatch: vector " + std::to_string(v.size()) +
                                    ", weights " + std::to_string(w.size()));
    Vector mags(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) mags[i] = std::abs(v[i]);
    std::sort(mags.begin(), mags.end(), std::greater<double>());
    double s = 0.0;
    for (std::size_t i = 0; i < mags.size(); ++i) s += w.w[i] * mags[i];
    return s;
}

Vector prox_sorted_l1(std::span<const double> v, const SlopeWeights& w, double t) {
    const std::size_t k = v.size();
    if (k != w.size())
        throw std::invalid_argument("length-mismatch: vector " + std::to_string(k) +
                                    ", weights " + std::to_string(w.size()));
    if (!(t > 0.0)) throw std::invalid_argument("step must be positive");

    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double ma = std::abs(v[a]), mb = std::abs(v[b]);
        return ma != mb ? ma > mb : a < b;
    });

    // Shifted magnitudes in sorted order, then PAVA toward non-increasing.
    // Blocks carry (running sum, count); merge while monotonicity is violated.
    Vector sum(k), mean(k);
    std::vector<std::size_t> count(k);
    std::size_t nblocks = 0;
    for (std::size_t i = 0; i < k; ++i) {
        double s = std::abs(v[order[i]]) - t * w.w[i];
        std::size_t c = 1;
        while (nblocks > 0 && mean[nblocks - 1] <= (s / static_cast<double>(c))) {
            s += sum[nblocks - 1];
            c += count[nblocks - 1];
            --nblocks;
        }
        sum[nblocks] = s;
        count[nblocks] = c;
        mean[nblocks] = s / static_cast<double>(c);
        ++nblocks;
    }

    Vector out(k);
    std::size_t pos = 0;
    for (std::size_t b = 0; b < nblocks; ++b) {
        const double val = std::max(mean[b], 0.0);
        for (std::size_t r = 0; r < count[b]; ++r, ++pos) {
            const std::size_t j = order[pos];
            out[j] = v[j] < 0.0 ? -val : val;
        }
    }
    return out;
}

SlopeWeights lambda_weights(std::size_t d, std::size_t n) {
    if (d == 0 || n == 0) throw std::invalid_argument("counts must be >= 1");
    Vector w(d);
    for (std::size_t i = 1; i <= d; ++i)
        w[i - 1] = std::sqrt((1.0 + std::log(static_cast<double>(d) / i)) / n);
    return SlopeWeights{std::move(w)};
}

SlopeWeights iota_weights(std::size_t n, IotaRegime regime, double moment_order_M,
                          std::optional<std::size_t> known_o) {
    if (n == 0) throw std::invalid_argument("counts must be >= 1");
    if (regime == IotaRegime::heavy && !(moment_order_M > 2.0))
        throw std::invalid_argument("heavy regime requires moment order M > 2");
    if (known_o && (*known_o < 1 || *known_o > n))
        throw std::invalid_argument("known_o out of range [1, n]");

    const double dn = static_cast<double>(n);
    const auto at = [&](double i) {
        return regime == IotaRegime::heavy
                   ? std::pow(dn / i, 1.0 / moment_order_M) / std::sqrt(dn)
                   : std::sqrt((1.0 + std::log(dn / i)) / dn);
    };
    Vector w(n);
    if (known_o) {
        const double flat = at(static_cast<double>(*known_o));
        std::fill(w.begin(), w.end(), flat);
    } else {
        for (std::size_t i = 1; i <= n; ++i) w[i - 1] = at(static_cast<double>(i));
    }
    return SlopeWeights{std::move(w)};
}

}  // namespace rsreg
