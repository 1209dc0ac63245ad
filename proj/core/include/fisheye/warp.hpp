#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <limits>
#include <vector>

#include "fisheye/image.hpp"
#include "fisheye/model.hpp"

namespace fisheye {

enum class WarpMode { simple, modified, full };
enum class Interp { nearest, bilinear, bicubic };

// Configuration of an inverse-mapping warp. Output pixel centers are taken
// at (i + 0.5, j + 0.5), centered coordinates relative to (width/2,
// height/2); even-sized images are therefore exactly symmetric. The output
// keeps the source pixel pitch: `scale` only sets the canvas size.
struct WarpConfig {
    WarpMode mode;
    CameraModel cam;
    // Output side = scale * source side when out_width/out_height are 0.
    // scale <= 0 selects the per-mode default: 1 for simple, 2 otherwise.
    double scale = 0.0;
    Interp interp = Interp::bilinear;
    int out_width = 0;
    int out_height = 0;

    double resolved_scale() const {
        if (scale > 0.0) return scale;
        return mode == WarpMode::simple ? 1.0 : 2.0;
    }
};

// Per-output-pixel source coordinates in source-pixel units. Entries whose
// model-mapped point falls outside the source raster hold the sentinel
// (quiet NaN in both components); remap paints those pixels black.
// Coordinates are stored as f32: the quantization (< 1e-3 px for any
// realistic raster) is far below the interpolation error.
struct Lut {
    int width = 0;
    int height = 0;
    std::vector<std::array<float, 2>> entries;

    static constexpr float sentinel_value() {
        return std::numeric_limits<float>::quiet_NaN();
    }
    bool is_sentinel(std::size_t i) const {
        return std::isnan(entries[i][0]) || std::isnan(entries[i][1]);
    }
};

// Builds the LUT for a warp of a src_width x src_height source. For each
// output pixel the mode's plane->source map runs in 64-bit; the in-range
// test (against the source rectangle [0, w] x [0, h], not the rim circle)
// happens before the f32 downcast. Identical inputs give bit-identical
// LUTs regardless of thread count.
// Throws std::domain_error when mode == full and the output canvas does not
// fit in [-2R, 2R]^2, std::invalid_argument for non-positive dimensions.
Lut build_lut(const WarpConfig& cfg, int src_width, int src_height);

// Point-samples the source at (x, y) with the given method and returns one
// value per channel in [0, 255]. Out-of-range coordinates are clamped to
// the border. Bicubic uses the Catmull-Rom kernel over a 4x4 neighborhood
// and clamps the result to the neighborhood's value range, which suppresses
// overshoot and keeps constant regions exact.
// Throws std::invalid_argument for non-finite coordinates.
std::array<double, 3> interpolate(const ImageBuffer& src, double x, double y, Interp method);

// Applies a LUT: every output pixel is the interpolated source sample at
// its LUT coordinate; sentinel entries become 0 in every channel. The
// result is independent of row processing order.
ImageBuffer remap(const ImageBuffer& src, const Lut& lut, Interp method);

// LUT file format "FLUT1": magic "FLUT1\0", little-endian u32 width and
// height, then width*height (sx, sy) pairs of little-endian f32 in
// row-major order; sentinel entries are quiet NaN in both components.
void save_lut(const std::filesystem::path& path, const Lut& lut);

// Rejects wrong magic, truncated or oversized payloads, and non-finite
// coordinates that are not the NaN sentinel.
Lut load_lut(const std::filesystem::path& path);

}  // namespace fisheye
