#pragma once

#include <cstdint>
#include <random>

namespace rsreg {

/// SplitMix64 finalizer; used to derive independent streams from a master seed.
inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

/// Seed for replication `rep` of a run with the given master seed.
/// Stable across platforms and releases; recorded in experiment output.
inline std::uint64_t replication_seed(std::uint64_t master_seed, std::uint64_t rep) {
    return mix64(master_seed ^ (rep * 0x9E3779B97F4A7C15ULL));
}

/// Deterministic random source. mt19937_64 gives a portable bit stream and
/// all samplers are implemented here rather than with std:: distributions,
/// whose output is implementation-defined.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform on [0, 1).
    double uniform() { return (gen_() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1].
    double uniform_pos() { return 1.0 - uniform(); }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // Rejection to remove modulo bias.
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = gen_();
        } while (x >= limit);
        return x % n;
    }

    /// Standard normal via Box-Muller, second value cached.
    double normal();

    /// Student-t with dof degrees of freedom (Bailey's polar method).
    double student_t(double dof);

    /// Two-sided Pareto: magnitude scale * U^{-1/alpha}, random sign.
    double pareto_symmetric(double alpha, double scale);

  private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace rsreg
