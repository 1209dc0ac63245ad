#pragma once

#include <cmath>

// Radial mapping model for equidistant fisheye rectification.
//
// All coordinates are measured in source-image pixels from the image
// center. The single calibration parameter is the rim radius: the radius
// of the circle on the fisheye image corresponding to rays 90 degrees off
// the lens axis. Rays at 45 degrees land at half that radius.
//
// Three plane->source maps are provided:
//   * plane_to_source_simple  — complete rectification; the rendered view
//     narrows to ~115 deg on a canvas of radius rim_radius.
//   * plane_to_intermediate + intermediate_to_source — the two-stage
//     wide-FOV pipeline: a circle-to-square deformation pulls the square
//     canvas boundary onto the rim circle, then a modified radial mapping
//     removes the residual barrel distortion while keeping the full
//     180 deg view on a canvas of side 4*rim_radius.
//   * plane_to_source_full — the composition of the two stages.
//
// Every function is pure and safe to call concurrently.

namespace fisheye {

class CameraModel {
public:
    // rim_radius must be positive and finite (pixels).
    explicit CameraModel(double rim_radius);

    // Radius of the 90 deg rim circle (pixels).
    double rim_radius() const { return rim_radius_; }
    // Radius of the 45 deg circle; exactly half the rim radius.
    double half_angle_radius() const { return rim_radius_ / 2.0; }

private:
    double rim_radius_;
};

struct PlanePoint {
    double x = 0.0;
    double y = 0.0;
    double radius() const { return std::sqrt(x * x + y * y); }
};

struct IntermediatePoint {
    double x = 0.0;
    double y = 0.0;
    double radius() const { return std::sqrt(x * x + y * y); }
};

struct SourcePoint {
    double x = 0.0;
    double y = 0.0;
    double radius() const { return std::sqrt(x * x + y * y); }
};

// Dimensionless inputs of the circle-to-square deformation, derived from a
// plane point. All values are clamped against rounding so that
// w in [0, 1/4] and h, v, p in [0, 1] hold on the [-2R, 2R]^2 canvas;
// p == (h + v) / 2 exactly.
struct SquareDeformInputs {
    double w = 0.0;  // x^2 y^2 / r^4, anisotropy of the point direction
    double z = 0.0;  // squircle_shape(h, v, p)
    double h = 0.0;  // x^2 / (2R)^2
    double v = 0.0;  // y^2 / (2R)^2
    double p = 0.0;  // r^2 / (2 (2R)^2) = (h + v) / 2

    static SquareDeformInputs from_plane(const PlanePoint& pt, const CameraModel& cam);
};

// Unit step: 0 for x <= 0, 1 for x > 0. No smoothing at the origin.
double heaviside(double x);

// Radial scale of the complete rectification: maps a plane radius r to the
// source radius r * mapping_scale_simple(r).  Equals arctan(x)/x with
// x = pi r / (2 R); strictly decreasing from 1 at r = 0, so the source
// radius approaches the rim asymptotically and never reaches it.
// Throws std::domain_error for negative r.
double mapping_scale_simple(double r, const CameraModel& cam);

// Radial scale of the wide-FOV mapping. Close to mapping_scale_simple near
// the center, but reaches the rim exactly at r = 2R: the scale is 1/2 there
// (returned exactly; the two branches of the formula meet at that value)
// and the function is continuous on [0, inf).
// Throws std::domain_error for negative r.
double mapping_scale_modified(double r, const CameraModel& cam);

// Shape parameter of the squircle deformation, blending between a circle
// (p -> 0) and a square (p -> 1). Symmetric in h and v. Requires
// h, v, p in [0, 1]; for p within 1e-6 of 1 the analytic limit
// 1 - max(h, v)^(3/2) is used (the exponent blend diverges there).
// Throws std::domain_error outside the domain.
double squircle_shape(double h, double v, double p);

// Radial scale of the circle-to-square deformation, in [1/sqrt(2), 1].
// Evaluated through the algebraically equivalent stable form
//   u = 8 w c / (1 + c),  c = cos(pi z / 2),  G = sqrt((1 + sqrt(1 - u)) / 2),
// which avoids the 0/0 of the raw expression as w -> 0 or c -> 0.
// Requires w in [0, 1/4]; throws std::domain_error otherwise.
double squircle_scale(double w, double z);

// Stage one of the wide-FOV pipeline: radial scaling by
// squircle_scale(w, squircle_shape(h, v, p)). Fixes the origin and both
// axes; maps the square canvas boundary max(|x|,|y|) = 2R onto the circle
// of radius 2R (to within ~4e-3 relative). Requires |x|, |y| <= 2R.
IntermediatePoint plane_to_intermediate(const PlanePoint& pt, const CameraModel& cam);

// Stage two: radial scaling by mapping_scale_modified. Points at radius 2R
// land exactly on the rim circle.
SourcePoint intermediate_to_source(const IntermediatePoint& pt, const CameraModel& cam);

// Complete rectification map (defined for any finite point).
SourcePoint plane_to_source_simple(const PlanePoint& pt, const CameraModel& cam);

// Full wide-FOV pipeline; exactly the composition
// intermediate_to_source(plane_to_intermediate(pt)).
SourcePoint plane_to_source_full(const PlanePoint& pt, const CameraModel& cam);

// Forward equidistant projection: source radius of a ray theta radians off
// the lens axis, linear in theta. Requires theta in [0, pi/2].
double forward_equidistant(double theta, const CameraModel& cam);

// Full angle of view, in degrees, rendered by the complete rectification on
// a canvas of radius radius_ratio * rim_radius. Requires radius_ratio > 0.
// Approaches 180 as the ratio grows: 115.04 at ratio 1, 144.69 at ratio 2.
double fov_of_canvas(double radius_ratio);

}  // namespace fisheye
