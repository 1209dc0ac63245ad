// fisheye — command-line front end for the rectification toolkit.
//
// Subcommands: correct, generate, lut, metrics, fov. Images and LUTs go to
// files; metrics and fov print JSON to stdout; diagnostics go to stderr.
// Exit codes: 0 success, 1 usage error, 2 I/O or format error, 3 numeric or
// domain error.

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fisheye/errors.hpp"
#include "fisheye/imageio.hpp"
#include "fisheye/model.hpp"
#include "fisheye/synth.hpp"
#include "fisheye/warp.hpp"

namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

std::pair<int, int> parse_size(const std::string& text) {
    const auto sep = text.find_first_of("xX");
    if (sep == std::string::npos || sep == 0 || sep + 1 >= text.size()) {
        throw UsageError("size must look like WxH, got '" + text + "'");
    }
    try {
        std::size_t used = 0;
        const int w = std::stoi(text.substr(0, sep), &used);
        if (used != sep) throw UsageError("bad width in '" + text + "'");
        const int h = std::stoi(text.substr(sep + 1), &used);
        if (used != text.size() - sep - 1) throw UsageError("bad height in '" + text + "'");
        if (w < 1 || h < 1) throw UsageError("size components must be >= 1");
        return {w, h};
    } catch (const std::invalid_argument&) {
        throw UsageError("size must look like WxH, got '" + text + "'");
    } catch (const std::out_of_range&) {
        throw UsageError("size out of range: '" + text + "'");
    }
}

std::vector<std::pair<double, double>> parse_points(const std::string& text) {
    std::vector<std::pair<double, double>> pts;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find(';', start);
        if (end == std::string::npos) end = text.size();
        const std::string item = text.substr(start, end - start);
        if (!item.empty()) {
            const auto comma = item.find(',');
            if (comma == std::string::npos) {
                throw UsageError("point '" + item + "' is not of the form x,y");
            }
            try {
                std::size_t ux = 0, uy = 0;
                const double x = std::stod(item.substr(0, comma), &ux);
                const double y = std::stod(item.substr(comma + 1), &uy);
                if (ux != comma || uy != item.size() - comma - 1) {
                    throw UsageError("point '" + item + "' has trailing characters");
                }
                pts.emplace_back(x, y);
            } catch (const std::invalid_argument&) {
                throw UsageError("point '" + item + "' is not numeric");
            } catch (const std::out_of_range&) {
                throw UsageError("point '" + item + "' is out of range");
            }
        }
        start = end + 1;
    }
    return pts;
}

// --r0 / --big-r0: exactly one must be given; both normalize to R = 2 r0.
fisheye::CameraModel camera_from_flags(std::optional<double> r0, std::optional<double> big_r0) {
    if (r0.has_value() == big_r0.has_value()) {
        throw UsageError("give exactly one of --r0 or --big-r0");
    }
    const double big = big_r0 ? *big_r0 : 2.0 * *r0;
    if (!(big > 0.0)) {
        throw UsageError("R0 must be positive");
    }
    return fisheye::CameraModel(big);
}

fisheye::WarpMode parse_mode(const std::string& text) {
    if (text == "simple") return fisheye::WarpMode::simple;
    if (text == "modified") return fisheye::WarpMode::modified;
    if (text == "full") return fisheye::WarpMode::full;
    throw UsageError("unknown mode '" + text + "' (simple|modified|full)");
}

fisheye::Interp parse_interp(const std::string& text) {
    if (text == "nearest") return fisheye::Interp::nearest;
    if (text == "bilinear") return fisheye::Interp::bilinear;
    if (text == "bicubic") return fisheye::Interp::bicubic;
    throw UsageError("unknown interpolation '" + text + "' (nearest|bilinear|bicubic)");
}

struct CorrectArgs {
    std::string input, output;
    std::optional<double> r0, big_r0;
    std::string mode = "full";
    double scale = 0.0;
    std::string interp = "bilinear";
    std::string lut_out, lut_in;
};

int run_correct(const CorrectArgs& a) {
    const fisheye::CameraModel cam = camera_from_flags(a.r0, a.big_r0);
    const fisheye::ImageBuffer src = fisheye::load_image(a.input);

    fisheye::WarpConfig cfg{parse_mode(a.mode), cam};
    cfg.scale = a.scale;
    cfg.interp = parse_interp(a.interp);

    fisheye::Lut lut;
    if (!a.lut_in.empty()) {
        lut = fisheye::load_lut(a.lut_in);
    } else {
        lut = fisheye::build_lut(cfg, src.width, src.height);
    }
    if (!a.lut_out.empty()) {
        fisheye::save_lut(a.lut_out, lut);
    }

    const fisheye::ImageBuffer out = fisheye::remap(src, lut, cfg.interp);
    fisheye::save_image(a.output, out);
    std::cerr << "wrote " << a.output << " (" << out.width << "x" << out.height << ")\n";
    return 0;
}

struct GenerateArgs {
    std::string pattern, size, output;
    double big_r0 = 0.0;
    int rings = 5;
    int checker_cells = 8;
    double wall_distance = 1.0;
    double ring_thickness = 3.0;
};

int run_generate(const GenerateArgs& a) {
    if (!(a.big_r0 > 0.0)) throw UsageError("R0 must be positive");
    const fisheye::CameraModel cam(a.big_r0);
    const auto [w, h] = parse_size(a.size);

    fisheye::TargetSpec spec;
    spec.rings = a.rings;
    spec.ring_thickness = a.ring_thickness;
    spec.checker_cells = a.checker_cells;
    spec.wall_distance = a.wall_distance;

    fisheye::ImageBuffer img;
    if (a.pattern == "rings") {
        spec.pattern = fisheye::TargetPattern::rings;
        img = fisheye::render_rings(spec, cam, w, h);
    } else if (a.pattern == "checker") {
        spec.pattern = fisheye::TargetPattern::checker;
        img = fisheye::render_checker(spec, cam, w, h);
    } else {
        throw UsageError("unknown pattern '" + a.pattern + "' (rings|checker)");
    }
    fisheye::save_image(a.output, img);
    std::cerr << "wrote " << a.output << " (" << w << "x" << h << ")\n";
    return 0;
}

struct LutArgs {
    std::optional<double> r0, big_r0;
    std::string src_size, out_size, output;
    std::string mode = "full";
};

int run_lut(const LutArgs& a) {
    const fisheye::CameraModel cam = camera_from_flags(a.r0, a.big_r0);
    const auto [sw, sh] = parse_size(a.src_size);
    const auto [ow, oh] = parse_size(a.out_size);

    fisheye::WarpConfig cfg{parse_mode(a.mode), cam};
    cfg.out_width = ow;
    cfg.out_height = oh;
    const fisheye::Lut lut = fisheye::build_lut(cfg, sw, sh);
    fisheye::save_lut(a.output, lut);
    std::cerr << "wrote " << a.output << " (" << ow << "x" << oh << " entries)\n";
    return 0;
}

struct MetricsArgs {
    std::string input, kind, points;
};

int run_metrics(const MetricsArgs& a) {
    if (a.kind != "straightness") {
        throw UsageError("unknown metrics kind '" + a.kind + "' (straightness)");
    }
    (void)fisheye::load_image(a.input);  // validates the referenced image
    const auto pts = parse_points(a.points);
    const double residual = fisheye::straightness_residual(pts);
    std::cout << json{{"residual_px", residual}}.dump() << "\n";
    return 0;
}

int run_fov(double radius_ratio) {
    const double deg = fisheye::fov_of_canvas(radius_ratio);
    std::cout << json{{"fov_deg", deg}}.dump() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fisheye distortion correction toolkit"};
    app.require_subcommand(1);

    CorrectArgs ca;
    auto* correct = app.add_subcommand("correct", "Rectify a fisheye image");
    correct->add_option("--input,-i", ca.input, "Source fisheye image")->required();
    correct->add_option("--output,-o", ca.output, "Corrected image to write")->required();
    correct->add_option("--r0", ca.r0, "Radius of the 45-degree circle, px");
    correct->add_option("--big-r0", ca.big_r0, "Radius of the 90-degree rim, px");
    correct->add_option("--mode", ca.mode, "simple|modified|full (default full)");
    correct->add_option("--scale", ca.scale, "Output side = scale * source side")
        ->check(CLI::PositiveNumber);
    correct->add_option("--interp", ca.interp, "nearest|bilinear|bicubic (default bilinear)");
    correct->add_option("--lut-out", ca.lut_out, "Also save the LUT (FLUT1)");
    correct->add_option("--lut-in", ca.lut_in, "Reuse a saved LUT instead of building one");

    GenerateArgs ga;
    auto* generate = app.add_subcommand("generate", "Render a synthetic fisheye target");
    generate->add_option("--pattern", ga.pattern, "rings|checker")->required();
    generate->add_option("--size", ga.size, "Canvas size WxH")->required();
    generate->add_option("--big-r0", ga.big_r0, "Radius of the 90-degree rim, px")->required();
    generate->add_option("--output", ga.output, "Image to write")->required();
    generate->add_option("--rings", ga.rings, "Ring count (default 5)");
    generate->add_option("--checker-cells", ga.checker_cells,
                         "Checker cells per unit plane coordinate (default 8)");
    generate->add_option("--wall-distance", ga.wall_distance,
                         "Wall distance in focal lengths (default 1)");
    generate->add_option("--ring-thickness", ga.ring_thickness,
                         "Ring stroke width in px (default 3)");

    LutArgs la;
    auto* lutcmd = app.add_subcommand("lut", "Build and save a remap LUT");
    lutcmd->add_option("--r0", la.r0, "Radius of the 45-degree circle, px");
    lutcmd->add_option("--big-r0", la.big_r0, "Radius of the 90-degree rim, px");
    lutcmd->add_option("--src-size", la.src_size, "Source size WxH")->required();
    lutcmd->add_option("--out-size", la.out_size, "Output size WxH")->required();
    lutcmd->add_option("--mode", la.mode, "simple|modified|full (default full)");
    lutcmd->add_option("--output", la.output, "LUT file to write")->required();

    MetricsArgs ma;
    auto* metrics = app.add_subcommand("metrics", "Compute a rectification metric");
    metrics->add_option("--input", ma.input, "Image the points refer to")->required();
    metrics->add_option("--kind", ma.kind, "Metric kind (straightness)")->required();
    metrics->add_option("--points", ma.points, "Traced points \"x1,y1;x2,y2;...\"")->required();

    double radius_ratio = 0.0;
    auto* fov = app.add_subcommand("fov", "Angle of view of a simple-mode canvas");
    fov->add_option("--radius-ratio", radius_ratio, "Canvas radius / rim radius")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (correct->parsed()) return run_correct(ca);
        if (generate->parsed()) return run_generate(ga);
        if (lutcmd->parsed()) return run_lut(la);
        if (metrics->parsed()) return run_metrics(ma);
        if (fov->parsed()) return run_fov(radius_ratio);
        std::cerr << "no subcommand given\n";
        return 1;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const fisheye::IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return 2;
    } catch (const fisheye::FormatError& e) {
        std::cerr << "format error: " << e.what() << "\n";
        return 2;
    } catch (const fisheye::DetectionError& e) {
        std::cerr << "detection error: " << e.what() << "\n";
        return 3;
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "argument error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
