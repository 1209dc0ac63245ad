#include "fisheye/warp.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

#include "fisheye/errors.hpp"
#include "parallel.hpp"

namespace fisheye {

namespace {

SourcePoint map_point(WarpMode mode, const PlanePoint& pt, const CameraModel& cam) {
    switch (mode) {
        case WarpMode::simple:
            return plane_to_source_simple(pt, cam);
        case WarpMode::modified: {
            const double s = mapping_scale_modified(pt.radius(), cam);
            return {pt.x * s, pt.y * s};
        }
        case WarpMode::full:
            return plane_to_source_full(pt, cam);
    }
    throw std::invalid_argument("map_point: unknown warp mode");
}

int clamp_index(int i, int n) {
    return std::clamp(i, 0, n - 1);
}

// Catmull-Rom interpolation of four evenly spaced samples; t in [0, 1]
// between p1 and p2.
double catmull_rom(double p0, double p1, double p2, double p3, double t) {
    const double a = -p0 + 3.0 * p1 - 3.0 * p2 + p3;
    const double b = 2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3;
    const double c = -p0 + p2;
    return 0.5 * (a * t * t * t + b * t * t + c * t + 2.0 * p1);
}

}  // namespace

Lut build_lut(const WarpConfig& cfg, int src_width, int src_height) {
    if (src_width < 1 || src_height < 1) {
        throw std::invalid_argument("build_lut: source dimensions must be >= 1");
    }
    int out_w = cfg.out_width;
    int out_h = cfg.out_height;
    if (out_w == 0 && out_h == 0) {
        const double s = cfg.resolved_scale();
        out_w = static_cast<int>(std::lround(s * src_width));
        out_h = static_cast<int>(std::lround(s * src_height));
    }
    if (out_w < 1 || out_h < 1) {
        throw std::invalid_argument("build_lut: output dimensions must be >= 1");
    }
    if (cfg.mode == WarpMode::full) {
        const double limit = 4.0 * cfg.cam.rim_radius() * (1.0 + 1e-9);
        if (out_w > limit || out_h > limit) {
            throw std::domain_error(
                "build_lut: full-mode output canvas exceeds [-2R, 2R]^2; "
                "need side <= 4 * rim radius = " + std::to_string(4.0 * cfg.cam.rim_radius()));
        }
    }

    Lut lut;
    lut.width = out_w;
    lut.height = out_h;
    lut.entries.resize(static_cast<std::size_t>(out_w) * out_h);

    const double cx_out = out_w / 2.0;
    const double cy_out = out_h / 2.0;
    const double cx_src = src_width / 2.0;
    const double cy_src = src_height / 2.0;
    const float nan = Lut::sentinel_value();

    detail::parallel_rows(out_h, [&](int y0, int y1) {
        for (int j = y0; j < y1; ++j) {
            auto* row = lut.entries.data() + static_cast<std::size_t>(j) * out_w;
            const double yc = (j + 0.5) - cy_out;
            for (int i = 0; i < out_w; ++i) {
                const double xc = (i + 0.5) - cx_out;
                const SourcePoint sp = map_point(cfg.mode, {xc, yc}, cfg.cam);
                const double sx = sp.x + cx_src;
                const double sy = sp.y + cy_src;
                // In/out decided in 64-bit, before the f32 downcast.
                if (sx >= 0.0 && sx <= src_width && sy >= 0.0 && sy <= src_height) {
                    row[i] = {static_cast<float>(sx), static_cast<float>(sy)};
                } else {
                    row[i] = {nan, nan};
                }
            }
        }
    });
    return lut;
}

std::array<double, 3> interpolate(const ImageBuffer& src, double x, double y, Interp method) {
    if (!std::isfinite(x) || !std::isfinite(y)) {
        throw std::invalid_argument("interpolate: coordinates must be finite");
    }
    const int w = src.width;
    const int h = src.height;
    const int nc = src.channels;
    std::array<double, 3> out{0.0, 0.0, 0.0};

    switch (method) {
        case Interp::nearest: {
            const int ix = clamp_index(static_cast<int>(std::floor(x)), w);
            const int iy = clamp_index(static_cast<int>(std::floor(y)), h);
            for (int c = 0; c < nc; ++c) out[c] = src.at(ix, iy, c);
            return out;
        }
        case Interp::bilinear: {
            const double gx = x - 0.5;
            const double gy = y - 0.5;
            const int x0 = static_cast<int>(std::floor(gx));
            const int y0 = static_cast<int>(std::floor(gy));
            const double tx = gx - x0;
            const double ty = gy - y0;
            const int x0c = clamp_index(x0, w), x1c = clamp_index(x0 + 1, w);
            const int y0c = clamp_index(y0, h), y1c = clamp_index(y0 + 1, h);
            for (int c = 0; c < nc; ++c) {
                const double v0 = (1.0 - tx) * src.at(x0c, y0c, c) + tx * src.at(x1c, y0c, c);
                const double v1 = (1.0 - tx) * src.at(x0c, y1c, c) + tx * src.at(x1c, y1c, c);
                out[c] = (1.0 - ty) * v0 + ty * v1;
            }
            return out;
        }
        case Interp::bicubic: {
            const double gx = x - 0.5;
            const double gy = y - 0.5;
            const int x1 = static_cast<int>(std::floor(gx));
            const int y1 = static_cast<int>(std::floor(gy));
            const double tx = gx - x1;
            const double ty = gy - y1;
            int xs[4], ys[4];
            for (int k = 0; k < 4; ++k) {
                xs[k] = clamp_index(x1 - 1 + k, w);
                ys[k] = clamp_index(y1 - 1 + k, h);
            }
            for (int c = 0; c < nc; ++c) {
                double rows[4];
                double lo = 255.0, hi = 0.0;
                for (int k = 0; k < 4; ++k) {
                    double p[4];
                    for (int m = 0; m < 4; ++m) {
                        p[m] = src.at(xs[m], ys[k], c);
                        lo = std::min(lo, p[m]);
                        hi = std::max(hi, p[m]);
                    }
                    rows[k] = catmull_rom(p[0], p[1], p[2], p[3], tx);
                }
                const double v = catmull_rom(rows[0], rows[1], rows[2], rows[3], ty);
                out[c] = std::clamp(v, lo, hi);
            }
            return out;
        }
    }
    throw std::invalid_argument("interpolate: unknown method");
}

ImageBuffer remap(const ImageBuffer& src, const Lut& lut, Interp method) {
    if (src.channels != 1 && src.channels != 3) {
        throw std::invalid_argument("remap: source must have 1 or 3 channels");
    }
    if (src.data.size() != static_cast<std::size_t>(src.width) * src.height * src.channels) {
        throw std::invalid_argument("remap: source buffer size does not match its dimensions");
    }
    if (lut.entries.size() != static_cast<std::size_t>(lut.width) * lut.height) {
        throw std::invalid_argument("remap: LUT entry count does not match its dimensions");
    }

    ImageBuffer out(lut.width, lut.height, src.channels);
    const int nc = src.channels;
    detail::parallel_rows(lut.height, [&](int y0, int y1) {
        for (int j = y0; j < y1; ++j) {
            std::uint8_t* orow = out.row(j);
            const auto* lrow = lut.entries.data() + static_cast<std::size_t>(j) * lut.width;
            for (int i = 0; i < lut.width; ++i) {
                const float sx = lrow[i][0];
                const float sy = lrow[i][1];
                std::uint8_t* px = orow + static_cast<std::size_t>(i) * nc;
                if (std::isnan(sx) || std::isnan(sy)) {
                    for (int c = 0; c < nc; ++c) px[c] = 0;
                    continue;
                }
                const auto v = interpolate(src, sx, sy, method);
                for (int c = 0; c < nc; ++c) {
                    px[c] = static_cast<std::uint8_t>(
                        std::clamp(std::lround(v[c]), 0L, 255L));
                }
            }
        }
    });
    return out;
}

namespace {

constexpr char kLutMagic[6] = {'F', 'L', 'U', 'T', '1', '\0'};

void put_u32_le(std::string& buf, std::uint32_t v) {
    buf.push_back(static_cast<char>(v & 0xff));
    buf.push_back(static_cast<char>((v >> 8) & 0xff));
    buf.push_back(static_cast<char>((v >> 16) & 0xff));
    buf.push_back(static_cast<char>((v >> 24) & 0xff));
}

std::uint32_t get_u32_le(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace

void save_lut(const std::filesystem::path& path, const Lut& lut) {
    if (lut.entries.size() != static_cast<std::size_t>(lut.width) * lut.height) {
        throw std::invalid_argument("save_lut: LUT entry count does not match its dimensions");
    }
    std::string buf;
    buf.reserve(14 + lut.entries.size() * 8);
    buf.append(kLutMagic, sizeof(kLutMagic));
    put_u32_le(buf, static_cast<std::uint32_t>(lut.width));
    put_u32_le(buf, static_cast<std::uint32_t>(lut.height));
    for (const auto& e : lut.entries) {
        put_u32_le(buf, std::bit_cast<std::uint32_t>(e[0]));
        put_u32_le(buf, std::bit_cast<std::uint32_t>(e[1]));
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("save_lut: cannot open " + path.string() + " for writing");
    f.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!f) throw IoError("save_lut: short write to " + path.string());
}

Lut load_lut(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("load_lut: cannot open " + path.string());
    std::string buf((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    if (f.bad()) throw IoError("load_lut: read failure on " + path.string());

    if (buf.size() < 14 || std::memcmp(buf.data(), kLutMagic, sizeof(kLutMagic)) != 0) {
        throw FormatError("load_lut: not a FLUT1 file: " + path.string());
    }
    const auto* p = reinterpret_cast<const unsigned char*>(buf.data());
    const std::uint32_t w = get_u32_le(p + 6);
    const std::uint32_t h = get_u32_le(p + 10);
    if (w < 1 || h < 1 || w > (1u << 24) || h > (1u << 24)) {
        throw FormatError("load_lut: implausible dimensions in " + path.string());
    }
    const std::size_t need = static_cast<std::size_t>(w) * h * 8;
    if (buf.size() - 14 < need) {
        throw IoError("load_lut: truncated payload in " + path.string());
    }
    if (buf.size() - 14 > need) {
        throw FormatError("load_lut: trailing data in " + path.string());
    }

    Lut lut;
    lut.width = static_cast<int>(w);
    lut.height = static_cast<int>(h);
    lut.entries.resize(static_cast<std::size_t>(w) * h);
    const unsigned char* q = p + 14;
    for (auto& e : lut.entries) {
        e[0] = std::bit_cast<float>(get_u32_le(q));
        e[1] = std::bit_cast<float>(get_u32_le(q + 4));
        q += 8;
        const bool nan0 = std::isnan(e[0]), nan1 = std::isnan(e[1]);
        if (nan0 != nan1 || (!nan0 && (!std::isfinite(e[0]) || !std::isfinite(e[1])))) {
            throw FormatError("load_lut: malformed entry in " + path.string());
        }
    }
    return lut;
}

}  // namespace fisheye
