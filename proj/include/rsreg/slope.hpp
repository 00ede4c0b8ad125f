#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "rsreg/linalg.hpp"

namespace rsreg {

/// Nonnegative, non-increasing weight sequence defining a sorted-l1 norm.
struct SlopeWeights {
    Vector w;

    std::size_t size() const { return w.size(); }

    /// Builds after checking the invariants (non-increasing, nonnegative,
    /// at least one strictly positive entry).
    static SlopeWeights checked(Vector w);
};

/// sum_i w_i * |v|_(i)  with |v|_(1) >= |v|_(2) >= ...
double slope_norm(std::span<const double> v, const SlopeWeights& w);

/// Unique minimizer of  0.5*||b - v||^2 + t * slope_norm(b, w).
///
/// Magnitudes are sorted descending (ties broken by original index, so the
/// output is deterministic), shifted by t*w, projected onto the
/// non-increasing nonnegative cone by pool-adjacent-violators averaging with
/// clamping at zero, then unsorted and re-signed.
Vector prox_sorted_l1(std::span<const double> v, const SlopeWeights& w, double t);

/// lambda_i = sqrt(log(e*d/i)/n), i = 1..d.
SlopeWeights lambda_weights(std::size_t d, std::size_t n);

enum class IotaRegime { heavy, subgaussian };

/// Weight sequence for the outlier component, length n.
/// heavy:        iota_i = n^{-1/2} (n/i)^{1/M}        (requires M > 2)
/// subgaussian:  iota_i = sqrt(log(e*n/i)/n)
/// With known_o both collapse to the flat sequence evaluated at i = o.
SlopeWeights iota_weights(std::size_t n, IotaRegime regime, double moment_order_M = 3.0,
                          std::optional<std::size_t> known_o = std::nullopt);

}  // namespace rsreg
