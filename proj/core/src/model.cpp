#include "fisheye/model.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>

namespace fisheye {

namespace {

constexpr double kPi = std::numbers::pi;

// Below this r / rim_radius the arctan ratio is evaluated by its quadratic
// series to avoid cancellation.
constexpr double kSeriesCutoff = 1e-4;

// Relative slack accepted on the canvas bound of plane_to_intermediate, so
// that boundary points computed with rounding noise are not rejected.
constexpr double kCanvasSlack = 1e-9;

}  // namespace

CameraModel::CameraModel(double rim_radius) : rim_radius_(rim_radius) {
    if (!(rim_radius > 0.0) || !std::isfinite(rim_radius)) {
        throw std::domain_error("CameraModel: rim radius must be positive and finite");
    }
}

double heaviside(double x) {
    return x > 0.0 ? 1.0 : 0.0;
}

double mapping_scale_simple(double r, const CameraModel& cam) {
    if (!(r >= 0.0)) {
        throw std::domain_error("mapping_scale_simple: radius must be non-negative");
    }
    const double big_r = cam.rim_radius();
    const double x = kPi * r / (2.0 * big_r);
    if (r < kSeriesCutoff * big_r) {
        return 1.0 - x * x / 3.0;
    }
    return std::atan(x) / x;
}

double mapping_scale_modified(double r, const CameraModel& cam) {
    if (!(r >= 0.0)) {
        throw std::domain_error("mapping_scale_modified: radius must be non-negative");
    }
    const double big_r = cam.rim_radius();
    const double seam = 2.0 * big_r;
    if (r < kSeriesCutoff * big_r) {
        // Same quadratic series as the simple mapping; the two agree to
        // O(r^3) near the center.
        const double x = kPi * r / (2.0 * big_r);
        return 1.0 - x * x / 3.0;
    }
    if (r == seam) {
        // Two-sided limit across the branch point; the denominator below is
        // zero here and must not be evaluated.
        return 0.5;
    }
    // The sign of the arctan branch must agree with the step term, so the
    // denominator is pinned to the side implied by comparing r with 2R
    // rather than trusting its rounded sign.
    double den = 8.0 * big_r * big_r * big_r - r * r * r;
    den = r < seam ? std::max(den, 0.0) : std::min(den, -0.0);
    const double num = 4.0 * kPi * big_r * big_r * r;
    const double step = r > seam ? 1.0 : 0.0;  // heaviside(r / (2R) - 1), branch-exact
    return (2.0 * big_r / (kPi * r)) * std::atan(num / den) + (2.0 * big_r / r) * step;
}

double squircle_shape(double h, double v, double p) {
    if (!(h >= 0.0 && h <= 1.0 && v >= 0.0 && v <= 1.0 && p >= 0.0 && p <= 1.0)) {
        throw std::domain_error("squircle_shape: arguments must lie in [0, 1]");
    }
    const double big = std::max(h, v);
    if (p >= 1.0 - 1e-6) {
        return 1.0 - big * std::sqrt(big);
    }
    if (big == 0.0) {
        return 1.0;
    }
    // Factored form of 1 - (h^a + v^a)^(3/2 / a): pulling out the larger
    // base keeps the inner power in range where h^a alone would underflow.
    const double small = std::min(h, v);
    const double a = 1.0 + std::tan(kPi * p / 2.0);
    const double ratio_term = std::pow(small / big, a);
    return 1.0 - std::pow(big, 1.5) * std::pow(1.0 + ratio_term, 1.5 / a);
}

double squircle_scale(double w, double z) {
    if (!(w >= 0.0 && w <= 0.25)) {
        throw std::domain_error("squircle_scale: w must lie in [0, 1/4]");
    }
    const double c = std::cos(kPi * z / 2.0);
    const double u = 8.0 * w * c / (1.0 + c);
    const double t = std::max(1.0 - u, 0.0);
    return std::sqrt((1.0 + std::sqrt(t)) / 2.0);
}

SquareDeformInputs SquareDeformInputs::from_plane(const PlanePoint& pt, const CameraModel& cam) {
    const double side = 2.0 * cam.rim_radius();
    const double xx = pt.x * pt.x;
    const double yy = pt.y * pt.y;
    const double r2 = xx + yy;

    SquareDeformInputs in;
    in.w = r2 > 0.0 ? std::min(xx * yy / (r2 * r2), 0.25) : 0.0;
    in.h = std::min(xx / (side * side), 1.0);
    in.v = std::min(yy / (side * side), 1.0);
    in.p = (in.h + in.v) / 2.0;
    in.z = squircle_shape(in.h, in.v, in.p);
    return in;
}

IntermediatePoint plane_to_intermediate(const PlanePoint& pt, const CameraModel& cam) {
    const double bound = 2.0 * cam.rim_radius() * (1.0 + kCanvasSlack);
    if (!(std::fabs(pt.x) <= bound && std::fabs(pt.y) <= bound)) {
        throw std::domain_error("plane_to_intermediate: point outside the [-2R, 2R]^2 canvas");
    }
    if (pt.x == 0.0 && pt.y == 0.0) {
        return {0.0, 0.0};
    }
    const SquareDeformInputs in = SquareDeformInputs::from_plane(pt, cam);
    const double g = squircle_scale(in.w, in.z);
    return {pt.x * g, pt.y * g};
}

SourcePoint intermediate_to_source(const IntermediatePoint& pt, const CameraModel& cam) {
    const double s = mapping_scale_modified(pt.radius(), cam);
    return {pt.x * s, pt.y * s};
}

SourcePoint plane_to_source_simple(const PlanePoint& pt, const CameraModel& cam) {
    const double s = mapping_scale_simple(pt.radius(), cam);
    return {pt.x * s, pt.y * s};
}

SourcePoint plane_to_source_full(const PlanePoint& pt, const CameraModel& cam) {
    return intermediate_to_source(plane_to_intermediate(pt, cam), cam);
}

double forward_equidistant(double theta, const CameraModel& cam) {
    if (!(theta >= 0.0 && theta <= kPi / 2.0)) {
        throw std::domain_error("forward_equidistant: angle must lie in [0, pi/2]");
    }
    return 2.0 * cam.rim_radius() / kPi * theta;
}

double fov_of_canvas(double radius_ratio) {
    if (!(radius_ratio > 0.0)) {
        throw std::domain_error("fov_of_canvas: radius ratio must be positive");
    }
    return 2.0 * std::atan(kPi * radius_ratio / 2.0) * (180.0 / kPi);
}

}  // namespace fisheye
