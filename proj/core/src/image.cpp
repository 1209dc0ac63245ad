#include "fisheye/image.hpp"

#include <stdexcept>

namespace fisheye {

ImageBuffer::ImageBuffer(int w, int h, int c, std::uint8_t fill)
    : width(w), height(h), channels(c) {
    if (w < 1 || h < 1) {
        throw std::invalid_argument("ImageBuffer: dimensions must be >= 1");
    }
    if (c != 1 && c != 3) {
        throw std::invalid_argument("ImageBuffer: channel count must be 1 or 3");
    }
    data.assign(static_cast<std::size_t>(w) * h * c, fill);
}

}  // namespace fisheye
