#pragma once

#include <cstdint>
#include <initializer_list>

namespace flatcolor {

/// splitmix64: small, fast, and bit-identical on every platform. The std
/// distributions are implementation-defined, so sampling helpers live here.
class Rng {
public:
    explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n) noexcept {
        const std::uint64_t limit = -n % n;  // 2^64 mod n
        for (;;) {
            const std::uint64_t r = next();
            if (r >= limit) {
                return r % n;
            }
        }
    }

    int range(int lo, int hi_inclusive) noexcept {
        return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi_inclusive - lo) + 1));
    }

    bool chance(double p) noexcept { return uniform() < p; }

private:
    std::uint64_t state_;
};

/// Hierarchical seed derivation: mixes a parent seed with a path of indices.
inline std::uint64_t derive_seed(std::uint64_t parent, std::initializer_list<std::uint64_t> path) noexcept {
    std::uint64_t s = parent;
    for (std::uint64_t idx : path) {
        Rng r(s ^ (idx * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL));
        s = r.next();
    }
    return s;
}

}  // namespace flatcolor
