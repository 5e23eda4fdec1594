#pragma once

#include <cstdint>

#include "flatcolor/grid.hpp"

namespace flatcolor {

inline constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

/// FNV-1a over raw RGB bytes, row-major. Chain by passing the previous hash.
inline std::uint64_t fnv1a(const Raster& img, std::uint64_t h = kFnvOffset) noexcept {
    for (const Rgb& c : img.cells()) {
        for (std::uint8_t byte : {c.r, c.g, c.b}) {
            h ^= byte;
            h *= kFnvPrime;
        }
    }
    return h;
}

}  // namespace flatcolor
