#pragma once

#include <span>
#include <utility>
#include <vector>

#include "fisheye/image.hpp"
#include "fisheye/model.hpp"

namespace fisheye {

// Synthetic calibration targets rendered through the forward equidistant
// model, plus the measurements used to verify rectification on them.
// Targets are drawn with 2x2 supersampling so sub-pixel metrics are stable.

enum class TargetPattern { rings, checker };

struct TargetSpec {
    TargetPattern pattern = TargetPattern::rings;
    int rings = 5;                 // concentric circles, radii k * R / rings
    double ring_thickness = 3.0;   // ring stroke width on the fisheye image, px
    int checker_cells = 8;         // checker cells per unit plane coordinate
    double wall_distance = 1.0;    // wall distance in focal lengths (2R/pi)
};

// Fisheye view of concentric circles: white inside the rim, black outside,
// rings of constant thickness at radii k*R/rings. Under the equidistant
// model the rings correspond to cones at equally spaced field angles, so
// spacing and thickness look uniform, as a straight-on photograph of
// printed circles would.
// Throws std::invalid_argument for invalid spec fields.
ImageBuffer render_rings(const TargetSpec& spec, const CameraModel& cam, int width, int height);

// Fisheye view of a frontal planar checkerboard. A source pixel at radius
// r_s sees the ray at theta = pi r_s / (2R); the wall point is at plane
// radius wall_distance * tan(theta) (focal-length units), azimuth
// preserved; parity of the cell indices (checker_cells per unit plane
// coordinate) picks black or white. Pixels within 1e-6 of theta = pi/2
// are black.
ImageBuffer render_checker(const TargetSpec& spec, const CameraModel& cam, int width, int height);

// Maximum perpendicular distance of the points from their total
// least-squares line (the principal direction of the centered covariance).
// Zero for collinear or all-coincident points; rotation-invariant.
// Throws std::invalid_argument for fewer than 3 points.
double straightness_residual(std::span<const std::pair<double, double>> points);

// Starting estimate of the rim radius from an image with a bright image
// circle on a dark surround: the distance from the image center to the
// last pixel above `threshold` along each of the 4 axis directions,
// averaged. Throws DetectionError when an axis finds no such pixel.
double estimate_big_r0(const ImageBuffer& img, int threshold);

}  // namespace fisheye
