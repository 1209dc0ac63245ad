#include "fisheye/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fisheye/errors.hpp"
#include "parallel.hpp"

namespace fisheye {

namespace {

constexpr double kPi = std::numbers::pi;

// 2x2 supersample offsets within a pixel.
constexpr double kSubOffsets[2] = {0.25, 0.75};

void validate(const TargetSpec& spec) {
    if (spec.rings < 1) throw std::invalid_argument("TargetSpec: rings must be >= 1");
    if (!(spec.ring_thickness >= 1.0)) {
        throw std::invalid_argument("TargetSpec: ring thickness must be >= 1 px");
    }
    if (spec.checker_cells < 1) {
        throw std::invalid_argument("TargetSpec: checker cells must be >= 1");
    }
    if (!(spec.wall_distance > 0.0)) {
        throw std::invalid_argument("TargetSpec: wall distance must be positive");
    }
}

// Renders a 1-channel target by averaging sample(dx, dy) over a 2x2 subgrid.
// Subsample offsets mirror exactly, so even-sized canvases come out exactly
// 4-fold symmetric.
template <typename SampleFn>
ImageBuffer render_supersampled(int width, int height, SampleFn&& sample) {
    if (width < 1 || height < 1) {
        throw std::invalid_argument("render: dimensions must be >= 1");
    }
    ImageBuffer img(width, height, 1);
    const double cx = width / 2.0;
    const double cy = height / 2.0;
    detail::parallel_rows(height, [&](int y0, int y1) {
        for (int j = y0; j < y1; ++j) {
            std::uint8_t* row = img.row(j);
            for (int i = 0; i < width; ++i) {
                int acc = 0;
                for (double oy : kSubOffsets) {
                    for (double ox : kSubOffsets) {
                        acc += sample((i + ox) - cx, (j + oy) - cy);
                    }
                }
                row[i] = static_cast<std::uint8_t>((acc + 2) / 4);
            }
        }
    });
    return img;
}

}  // namespace

ImageBuffer render_rings(const TargetSpec& spec, const CameraModel& cam, int width, int height) {
    validate(spec);
    const double big_r = cam.rim_radius();
    const int n = spec.rings;
    const double half_t = spec.ring_thickness / 2.0;

    return render_supersampled(width, height, [&](double dx, double dy) -> int {
        const double r = std::sqrt(dx * dx + dy * dy);
        if (r > big_r) return 0;
        // Nearest ring index in 1..n; rings sit at k * R / n.
        const double k = std::clamp(std::round(r * n / big_r), 1.0, static_cast<double>(n));
        if (std::fabs(r - k * big_r / n) <= half_t) return 0;
        return 255;
    });
}

ImageBuffer render_checker(const TargetSpec& spec, const CameraModel& cam, int width, int height) {
    validate(spec);
    const double big_r = cam.rim_radius();
    const double cells = spec.checker_cells;
    const double wall = spec.wall_distance;

    return render_supersampled(width, height, [&](double dx, double dy) -> int {
        const double r = std::sqrt(dx * dx + dy * dy);
        const double ratio = r / big_r;          // theta / (pi/2)
        if (ratio >= 1.0 - 1e-6) return 0;
        if (r == 0.0) return 255;                // plane origin, cell (0, 0)
        const double theta = kPi * ratio / 2.0;
        const double rho = wall * std::tan(theta) * cells;  // plane radius, cell units
        const auto u = static_cast<long long>(std::floor(rho * dx / r));
        const auto v = static_cast<long long>(std::floor(rho * dy / r));
        return ((u + v) & 1) ? 0 : 255;
    });
}

double straightness_residual(std::span<const std::pair<double, double>> points) {
    if (points.size() < 3) {
        throw std::invalid_argument("straightness_residual: need at least 3 points");
    }
    const double n = static_cast<double>(points.size());
    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : points) {
        mx += x;
        my += y;
    }
    mx /= n;
    my /= n;

    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (const auto& [x, y] : points) {
        const double dx = x - mx, dy = y - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }

    // Principal eigenvector of [[sxx, sxy], [sxy, syy]]; of the two
    // algebraic forms, take the better-conditioned one.
    const double half_gap = std::sqrt((sxx - syy) * (sxx - syy) / 4.0 + sxy * sxy);
    const double lam = (sxx + syy) / 2.0 + half_gap;
    double dx, dy;
    if (sxx >= syy) {
        dx = lam - syy;
        dy = sxy;
    } else {
        dx = sxy;
        dy = lam - sxx;
    }
    const double norm = std::sqrt(dx * dx + dy * dy);
    if (norm == 0.0) {
        // Isotropic or degenerate scatter; for all-coincident points the
        // residual is 0 along any direction.
        dx = 1.0;
        dy = 0.0;
    } else {
        dx /= norm;
        dy /= norm;
    }

    double worst = 0.0;
    for (const auto& [x, y] : points) {
        worst = std::max(worst, std::fabs(-(x - mx) * dy + (y - my) * dx));
    }
    return worst;
}

double estimate_big_r0(const ImageBuffer& img, int threshold) {
    if (img.width < 1 || img.height < 1) {
        throw std::invalid_argument("estimate_big_r0: empty image");
    }
    const double cx = img.width / 2.0;
    const double cy = img.height / 2.0;
    const int ic = img.width / 2;
    const int jc = img.height / 2;

    auto bright = [&](int x, int y) {
        for (int c = 0; c < img.channels; ++c) {
            if (img.at(x, y, c) > threshold) return true;
        }
        return false;
    };

    // Distance from the center to the outer edge of the farthest bright
    // pixel along each axis direction.
    double arms[4];
    int found = 0;

    arms[0] = arms[1] = arms[2] = arms[3] = -1.0;
    for (int i = img.width - 1; i >= ic; --i) {
        if (bright(i, jc)) { arms[0] = (i + 1) - cx; break; }
    }
    for (int i = 0; i < ic; ++i) {
        if (bright(i, jc)) { arms[1] = cx - i; break; }
    }
    for (int j = img.height - 1; j >= jc; --j) {
        if (bright(ic, j)) { arms[2] = (j + 1) - cy; break; }
    }
    for (int j = 0; j < jc; ++j) {
        if (bright(ic, j)) { arms[3] = cy - j; break; }
    }
    double sum = 0.0;
    for (double a : arms) {
        if (a >= 0.0) {
            sum += a;
            ++found;
        }
    }
    if (found < 4) {
        throw DetectionError("estimate_big_r0: no image circle found above threshold");
    }
    return sum / 4.0;
}

}  // namespace fisheye
