#pragma once

#include <cstdint>
#include <vector>

namespace fisheye {

// Row-major 8-bit raster with 1 (grayscale) or 3 (RGB) channels.
struct ImageBuffer {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<std::uint8_t> data;

    ImageBuffer() = default;
    ImageBuffer(int w, int h, int c, std::uint8_t fill = 0);

    std::uint8_t& at(int x, int y, int c = 0) {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    std::uint8_t at(int x, int y, int c = 0) const {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    std::uint8_t* row(int y) {
        return data.data() + static_cast<std::size_t>(y) * width * channels;
    }
    const std::uint8_t* row(int y) const {
        return data.data() + static_cast<std::size_t>(y) * width * channels;
    }

    bool same_shape(const ImageBuffer& other) const {
        return width == other.width && height == other.height && channels == other.channels;
    }
};

}  // namespace fisheye
