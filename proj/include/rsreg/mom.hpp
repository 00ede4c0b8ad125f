#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "rsreg/linalg.hpp"

namespace rsreg {

/// Contiguous blocking of the first B*N sample indices; tail indices beyond
/// B*N are excluded from every block.
struct BlockPlan {
    std::size_t block_count = 1;  // B
    std::size_t block_size = 1;   // N = floor(m/B)
};

BlockPlan make_block_plan(std::size_t m, std::size_t block_count);

/// Floor applied to the scale estimate so downstream Huber problems stay
/// non-degenerate.
inline constexpr double kEpsScale = 1e-12;

/// Median-of-means estimate of the absolute noise moment: per-block means of
/// |r_i| over contiguous blocks, lower median, times 8.
double robust_absolute_moment(std::span<const double> residuals, std::size_t block_count);

/// Lower median of per-block means of the signed residuals.
double mom_intercept(std::span<const double> residuals, std::size_t block_count);

/// Default block count. With known_o: ceil(max(128 log(1/delta), 8*o)),
/// rounded up to odd, capped at m. Without: 2*floor(m/40)+1 clamped to [3, m]
/// (odd, block size about 20).
std::size_t default_block_count(std::size_t m, double delta,
                                std::optional<std::size_t> known_o = std::nullopt);

}  // namespace rsreg
