#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace flatcolor {

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend constexpr bool operator==(const Rgb&, const Rgb&) = default;
};

inline constexpr Rgb kBlack{0, 0, 0};
inline constexpr Rgb kWhite{255, 255, 255};

/// Parses "#rrggbb" (leading '#' optional). Throws std::invalid_argument.
Rgb parse_hex_color(const std::string& text);
std::string to_hex_color(Rgb c);

struct Rect {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;

    friend constexpr bool operator==(const Rect&, const Rect&) = default;
};

/// Row-major 2D grid of values. Constructed grids are at least 1x1.
template <class T>
class Grid {
public:
    /// Empty 0x0 grid; only useful as a placeholder before assignment.
    Grid() = default;

    Grid(int width, int height, T fill = T{})
        : width_(width), height_(height) {
        if (width < 1 || height < 1) {
            throw std::invalid_argument("grid dimensions must be >= 1, got " +
                                        std::to_string(width) + "x" + std::to_string(height));
        }
        cells_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
    }

    Grid(int width, int height, std::vector<T> cells)
        : width_(width), height_(height), cells_(std::move(cells)) {
        if (width < 1 || height < 1) {
            throw std::invalid_argument("grid dimensions must be >= 1");
        }
        if (cells_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
            throw std::invalid_argument("grid buffer length does not match dimensions");
        }
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return cells_.size(); }

    bool contains(int x, int y) const noexcept {
        return x >= 0 && y >= 0 && x < width_ && y < height_;
    }

    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(x);
    }

    const T& at(int x, int y) const { return cells_[index(x, y)]; }
    T& at(int x, int y) { return cells_[index(x, y)]; }

    std::span<const T> cells() const noexcept { return cells_; }
    std::span<T> cells() noexcept { return cells_; }

    bool same_shape(const auto& other) const noexcept {
        return width_ == other.width() && height_ == other.height();
    }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<T> cells_;
};

using Raster = Grid<Rgb>;

enum class Ink : std::uint8_t { Paper = 0, Line = 1 };

/// true = line (ink) pixel.
using LineMask = Grid<Ink>;

inline void require_same_shape(const auto& a, const auto& b, const char* what) {
    if (a.width() != b.width() || a.height() != b.height()) {
        throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                    std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                                    " vs " + std::to_string(b.width()) + "x" +
                                    std::to_string(b.height()) + ")");
    }
}

/// Crops `rect` out of `src`. The rect must lie within the grid.
template <class T>
Grid<T> crop_grid(const Grid<T>& src, Rect rect) {
    if (rect.w < 1 || rect.h < 1 || rect.x < 0 || rect.y < 0 || rect.x + rect.w > src.width() ||
        rect.y + rect.h > src.height()) {
        throw std::invalid_argument("crop rect outside canvas");
    }
    Grid<T> out(rect.w, rect.h);
    for (int y = 0; y < rect.h; ++y) {
        for (int x = 0; x < rect.w; ++x) {
            out.at(x, y) = src.at(rect.x + x, rect.y + y);
        }
    }
    return out;
}

/// Nearest-neighbour resize; source sample = floor((dst + 0.5) * src / dst).
template <class T>
Grid<T> resize_nearest(const Grid<T>& src, int width, int height) {
    if (width == src.width() && height == src.height()) {
        return src;
    }
    Grid<T> out(width, height);
    std::vector<int> xs(static_cast<std::size_t>(width));
    for (int x = 0; x < width; ++x) {
        xs[static_cast<std::size_t>(x)] =
            static_cast<int>((static_cast<std::int64_t>(2 * x + 1) * src.width()) / (2 * width));
    }
    for (int y = 0; y < height; ++y) {
        const int sy =
            static_cast<int>((static_cast<std::int64_t>(2 * y + 1) * src.height()) / (2 * height));
        for (int x = 0; x < width; ++x) {
            out.at(x, y) = src.at(xs[static_cast<std::size_t>(x)], sy);
        }
    }
    return out;
}

}  // namespace flatcolor
