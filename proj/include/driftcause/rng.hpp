#ifndef DRIFTCAUSE_RNG_HPP
#define DRIFTCAUSE_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace driftcause {

/// All randomness flows through this wrapper. mt19937_64 is fully specified
/// by the standard, and the draws below avoid the implementation-defined
/// std::*_distribution classes, so seeded runs are byte-reproducible across
/// platforms and standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Index drawn from an (unnormalized-tolerant) categorical distribution.
    int categorical(std::span<const double> probs) {
        double u = uniform();
        double acc = 0.0;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            acc += probs[i];
            if (u < acc) return static_cast<int>(i);
        }
        // Rounding can leave acc slightly below 1; the last state absorbs it.
        return static_cast<int>(probs.size()) - 1;
    }

    double exponential() { return -std::log1p(-uniform()); }

    /// One draw from the flat Dirichlet over k states.
    std::vector<double> dirichlet_flat(int k) {
        std::vector<double> w(static_cast<std::size_t>(k));
        double total = 0.0;
        for (auto& v : w) {
            v = exponential();
            total += v;
        }
        if (total <= 0.0) {
            for (auto& v : w) v = 1.0 / k;
            return w;
        }
        for (auto& v : w) v /= total;
        return w;
    }

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace driftcause

#endif  // DRIFTCAUSE_RNG_HPP
