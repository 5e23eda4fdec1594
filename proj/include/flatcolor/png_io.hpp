#pragma once

#include <filesystem>
#include <stdexcept>

#include "flatcolor/grid.hpp"

namespace flatcolor {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Loads an 8-bit PNG as RGB. Gray is promoted, alpha is dropped, 16-bit is
/// stripped to 8. Throws IoError.
Raster read_png(const std::filesystem::path& path);

/// Writes 8-bit RGB, no ancillary chunks, so output bytes depend only on pixels.
void write_png(const std::filesystem::path& path, const Raster& img);

}  // namespace flatcolor
