#include "rsreg/mom.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rsreg {

namespace {

// Lower median: the ceil(B/2)-th order statistic, so the output is always an
// actual block mean and never an average of a corrupted with a clean block.
double lower_median(Vector v) {
    const std::size_t rank = (v.size() + 1) / 2;  // 1-based
    std::nth_element(v.begin(), v.begin() + (rank - 1), v.end());
    return v[rank - 1];
}

Vector block_means(std::span<const double> r, std::size_t block_count, bool absolute) {
    const BlockPlan plan = make_block_plan(r.size(), block_count);
    Vector means(plan.block_count);
    for (std::size_t k = 0; k < plan.block_count; ++k) {
        double s = 0.0;
        for (std::size_t i = k * plan.block_size; i < (k + 1) * plan.block_size; ++i)
            s += absolute ? std::abs(r[i]) : r[i];
        means[k] = s / static_cast<double>(plan.block_size);
    }
    return means;
}

}  // namespace

BlockPlan make_block_plan(std::size_t m, std::size_t block_count) {
    if (block_count < 1 || block_count > m)
        throw std::invalid_argument("block count out of range [1, " + std::to_string(m) + "]");
    return BlockPlan{block_count, m / block_count};
}

double robust_absolute_moment(std::span<const double> residuals, std::size_t block_count) {
    const double med = lower_median(block_means(residuals, block_count, /*absolute=*/true));
    return std::max(8.0 * med, kEpsScale);
}

double mom_intercept(std::span<const double> residuals, std::size_t block_count) {
    return lower_median(block_means(residuals, block_count, /*absolute=*/false));
}

std::size_t default_block_count(std::size_t m, double delta,
                                std::optional<std::size_t> known_o) {
    if (m < 3) throw std::invalid_argument("need at least 3 samples");
    if (known_o) {
        if (!(delta > 0.0) || !(delta < 1.0)) throw std::invalid_argument("delta must be in (0,1)");
        const double raw = std::max(128.0 * std::log(1.0 / delta),
                                    8.0 * static_cast<double>(*known_o));
        auto b = static_cast<std::size_t>(std::ceil(raw));
        b = std::max<std::size_t>(b, 1);
        if (b % 2 == 0) ++b;
        return std::min(b, m);
    }
    const std::size_t b = 2 * (m / 40) + 1;
    return std::clamp<std::size_t>(b, 3, m);
}

}  // namespace rsreg
