#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace wdisc {

/// Seeded pseudo-random generator with a pinned algorithm so that identical
/// seeds reproduce identical streams on every build. Uniform and normal
/// variates are constructed explicitly from the mt19937_64 bit stream instead
/// of going through std::*_distribution, whose algorithms are
/// implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53 random mantissa bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Unbiased integer in [0, n) by rejection sampling.
    std::uint64_t uniform_below(std::uint64_t n) {
        // rejects the top partial bucket of the 64-bit range
        for (;;) {
            std::uint64_t x = engine_();
            std::uint64_t r = x % n;
            if (x - r <= UINT64_MAX - (n - 1)) return r;
        }
    }

    /// Standard normal via Box-Muller; one fresh pair per two draws.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        double radius = std::sqrt(-2.0 * std::log1p(-u1));
        double angle = 2.0 * M_PI * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

    std::vector<double> normal_vector(std::size_t n) {
        std::vector<double> out(n);
        for (auto& v : out) v = normal();
        return out;
    }

    /// Fisher-Yates shuffle using uniform_below.
    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(uniform_below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace wdisc
