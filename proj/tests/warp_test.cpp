#include "fisheye/warp.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>

#include "fisheye/errors.hpp"
#include "fisheye/synth.hpp"
#include "test_support.hpp"

namespace fisheye {
namespace {

namespace fs = std::filesystem;

ImageBuffer noise_image(int w, int h, int channels, unsigned seed) {
    ImageBuffer img(w, h, channels);
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> byte(0, 255);
    for (auto& b : img.data) b = static_cast<std::uint8_t>(byte(rng));
    return img;
}

Lut identity_lut(int w, int h) {
    Lut lut;
    lut.width = w;
    lut.height = h;
    lut.entries.resize(static_cast<std::size_t>(w) * h);
    for (int j = 0; j < h; ++j) {
        for (int i = 0; i < w; ++i) {
            lut.entries[static_cast<std::size_t>(j) * w + i] = {i + 0.5f, j + 0.5f};
        }
    }
    return lut;
}

fs::path temp_file(const char* name) {
    return fs::temp_directory_path() / (std::string("fisheye_warp_test_") + name);
}

TEST(BuildLut, CenterPixelMapsToCenter) {
    // Odd sizes put a pixel exactly on the optical axis; every mode fixes it.
    const CameraModel cam(100.0);
    for (WarpMode mode : {WarpMode::simple, WarpMode::modified, WarpMode::full}) {
        WarpConfig cfg{mode, cam};
        cfg.out_width = 255;
        cfg.out_height = 255;
        const Lut lut = build_lut(cfg, 255, 255);
        const auto& e = lut.entries[static_cast<std::size_t>(127) * 255 + 127];
        EXPECT_EQ(e[0], 127.5f);
        EXPECT_EQ(e[1], 127.5f);
    }
}

TEST(BuildLut, FullModeCornersSampleTheRim) {
    // Square source of side 2R, scale 2: corner pixels land near the rim,
    // inside the raster.
    const CameraModel cam(128.0);
    WarpConfig cfg{WarpMode::full, cam};
    const Lut lut = build_lut(cfg, 256, 256);
    ASSERT_EQ(lut.width, 512);
    ASSERT_EQ(lut.height, 512);
    for (std::size_t idx : {std::size_t{0}, std::size_t{511}, std::size_t{511} * 512,
                            std::size_t{511} * 512 + 511}) {
        ASSERT_FALSE(lut.is_sentinel(idx));
        const double dx = lut.entries[idx][0] - 128.0;
        const double dy = lut.entries[idx][1] - 128.0;
        EXPECT_NEAR(std::sqrt(dx * dx + dy * dy), 128.0, 128.0 * 5e-3);
    }
}

TEST(BuildLut, SimpleModeScale2CornerStaysValid) {
    // Output corner at radius 2*sqrt(2)*R maps to 0.85906 R: inside the rim,
    // not a sentinel. (Frozen from (2/pi) atan(sqrt(2) pi).)
    const CameraModel cam(128.0);
    WarpConfig cfg{WarpMode::simple, cam};
    cfg.scale = 2.0;
    const Lut lut = build_lut(cfg, 256, 256);
    ASSERT_EQ(lut.width, 512);
    const auto& e = lut.entries[0];
    ASSERT_FALSE(lut.is_sentinel(0));
    const double dx = e[0] - 128.0;
    const double dy = e[1] - 128.0;
    // Corner pixel center is half a pixel inside the exact corner.
    const double expect = 0.85905893344383067 * 128.0;
    EXPECT_NEAR(std::sqrt(dx * dx + dy * dy), expect, 0.5);
}

TEST(BuildLut, DefaultScalePerMode) {
    const CameraModel cam(64.0);
    WarpConfig simple{WarpMode::simple, cam};
    EXPECT_EQ(build_lut(simple, 128, 96).width, 128);
    EXPECT_EQ(build_lut(simple, 128, 96).height, 96);
    WarpConfig modified{WarpMode::modified, cam};
    EXPECT_EQ(build_lut(modified, 128, 96).width, 256);
    WarpConfig full{WarpMode::full, cam};
    EXPECT_EQ(build_lut(full, 128, 96).height, 192);
}

TEST(BuildLut, FullModeRejectsOversizedCanvas) {
    const CameraModel cam(100.0);
    WarpConfig cfg{WarpMode::full, cam};
    cfg.out_width = 401;  // 4R = 400
    cfg.out_height = 400;
    EXPECT_THROW(build_lut(cfg, 200, 200), std::domain_error);
    cfg.out_width = 400;
    EXPECT_NO_THROW(build_lut(cfg, 200, 200));
    // Other modes take any canvas.
    WarpConfig wide{WarpMode::modified, cam};
    wide.out_width = 4000;
    wide.out_height = 4000;
    EXPECT_NO_THROW(build_lut(wide, 200, 200));
}

TEST(BuildLut, RejectsBadDimensions) {
    const CameraModel cam(100.0);
    WarpConfig cfg{WarpMode::simple, cam};
    EXPECT_THROW(build_lut(cfg, 0, 10), std::invalid_argument);
    cfg.out_width = -3;
    cfg.out_height = 10;
    EXPECT_THROW(build_lut(cfg, 10, 10), std::invalid_argument);
}

TEST(BuildLut, DeterministicAcrossBuilds) {
    const CameraModel cam(128.0);
    WarpConfig cfg{WarpMode::full, cam};
    const Lut a = build_lut(cfg, 256, 256);
    const Lut b = build_lut(cfg, 256, 256);
    ASSERT_EQ(a.entries.size(), b.entries.size());
    EXPECT_EQ(std::memcmp(a.entries.data(), b.entries.data(),
                          a.entries.size() * sizeof(a.entries[0])), 0);
}

TEST(BuildLut, SentinelsOutsideSourceRaster) {
    // Modified mode on a canvas much larger than the source pushes the far
    // field outside the raster; those entries must be sentinels.
    const CameraModel cam(64.0);
    WarpConfig cfg{WarpMode::modified, cam};
    cfg.out_width = 512;
    cfg.out_height = 512;
    const Lut lut = build_lut(cfg, 128, 128);
    std::size_t sentinels = 0;
    for (std::size_t i = 0; i < lut.entries.size(); ++i) {
        if (lut.is_sentinel(i)) {
            ++sentinels;
        } else {
            EXPECT_GE(lut.entries[i][0], 0.0f);
            EXPECT_LE(lut.entries[i][0], 128.0f);
            EXPECT_GE(lut.entries[i][1], 0.0f);
            EXPECT_LE(lut.entries[i][1], 128.0f);
        }
    }
    EXPECT_GT(sentinels, 0u);
}

TEST(Interpolate, ExactPixelCenterAllMethods) {
    const ImageBuffer img = noise_image(8, 6, 3, 1);
    for (Interp m : {Interp::nearest, Interp::bilinear, Interp::bicubic}) {
        for (int y = 0; y < 6; ++y) {
            for (int x = 0; x < 8; ++x) {
                const auto v = interpolate(img, x + 0.5, y + 0.5, m);
                for (int c = 0; c < 3; ++c) {
                    EXPECT_EQ(v[c], img.at(x, y, c)) << x << "," << y << " method "
                                                     << static_cast<int>(m);
                }
            }
        }
    }
}

TEST(Interpolate, BilinearMidpoint) {
    ImageBuffer img(4, 1, 1);
    img.at(1, 0) = 0;
    img.at(2, 0) = 100;
    const auto v = interpolate(img, 2.0, 0.5, Interp::bilinear);
    EXPECT_DOUBLE_EQ(v[0], 50.0);
}

TEST(Interpolate, BicubicCatmullRomMidpoint) {
    // Row samples [0, 100, 100, 0] at t = 0.5: Catmull-Rom gives 112.5,
    // clamped to the neighborhood range -> 100.
    ImageBuffer img(4, 4, 1);
    for (int y = 0; y < 4; ++y) {
        img.at(0, y) = 0;
        img.at(1, y) = 100;
        img.at(2, y) = 100;
        img.at(3, y) = 0;
    }
    const auto v = interpolate(img, 2.0, 1.5, Interp::bicubic);
    EXPECT_DOUBLE_EQ(v[0], 100.0);

    // Same weights without overshoot pass through unclamped:
    // (-1/16)*0 + (9/16)*40 + (9/16)*60 + (-1/16)*100 = 50.
    ImageBuffer ramp(4, 4, 1);
    for (int y = 0; y < 4; ++y) {
        ramp.at(0, y) = 0;
        ramp.at(1, y) = 40;
        ramp.at(2, y) = 60;
        ramp.at(3, y) = 100;
    }
    const auto w = interpolate(ramp, 2.0, 1.5, Interp::bicubic);
    EXPECT_DOUBLE_EQ(w[0], 50.0);
}

TEST(Interpolate, ConstantImageIsExactEverywhere) {
    ImageBuffer img(16, 16, 1, 77);
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> pos(-1.0, 17.0);
    for (Interp m : {Interp::nearest, Interp::bilinear, Interp::bicubic}) {
        for (int i = 0; i < 500; ++i) {
            const auto v = interpolate(img, pos(rng), pos(rng), m);
            EXPECT_EQ(v[0], 77.0);
        }
    }
}

TEST(Interpolate, RejectsNonFiniteCoordinates) {
    const ImageBuffer img(4, 4, 1);
    EXPECT_THROW(interpolate(img, std::nan(""), 1.0, Interp::nearest), std::invalid_argument);
    EXPECT_THROW(interpolate(img, 1.0, INFINITY, Interp::bilinear), std::invalid_argument);
}

TEST(Remap, IdentityLutReproducesInput) {
    for (int channels : {1, 3}) {
        const ImageBuffer img = noise_image(23, 17, channels, 2);
        const Lut lut = identity_lut(23, 17);
        for (Interp m : {Interp::nearest, Interp::bilinear, Interp::bicubic}) {
            const ImageBuffer out = remap(img, lut, m);
            EXPECT_EQ(out.data, img.data) << "method " << static_cast<int>(m);
        }
    }
}

TEST(Remap, AllSentinelGivesBlack) {
    const ImageBuffer img = noise_image(8, 8, 3, 3);
    Lut lut;
    lut.width = 5;
    lut.height = 4;
    lut.entries.assign(20, {Lut::sentinel_value(), Lut::sentinel_value()});
    const ImageBuffer out = remap(img, lut, Interp::bilinear);
    ASSERT_EQ(out.width, 5);
    ASSERT_EQ(out.height, 4);
    ASSERT_EQ(out.channels, 3);
    for (std::uint8_t b : out.data) EXPECT_EQ(b, 0);
}

TEST(Remap, UniformSourceStaysUniformInsideValidRegion) {
    const ImageBuffer img(32, 32, 1, 200);
    const CameraModel cam(16.0);
    WarpConfig cfg{WarpMode::full, cam};
    const Lut lut = build_lut(cfg, 32, 32);
    const ImageBuffer out = remap(img, lut, Interp::bilinear);
    for (std::size_t i = 0; i < lut.entries.size(); ++i) {
        EXPECT_EQ(out.data[i], lut.is_sentinel(i) ? 0 : 200);
    }
}

TEST(Remap, MatchesBruteForceReference) {
    const CameraModel cam(32.0);
    const ImageBuffer src = noise_image(64, 64, 1, 4);
    for (WarpMode mode : {WarpMode::simple, WarpMode::modified, WarpMode::full}) {
        WarpConfig cfg{mode, cam};
        const Lut lut = build_lut(cfg, 64, 64);
        const ImageBuffer fast = remap(src, lut, Interp::bilinear);
        const ImageBuffer ref = testing::reference_remap(src, cfg, lut.width, lut.height);
        EXPECT_LE(testing::max_abs_diff(fast, ref), 1) << "mode " << static_cast<int>(mode);
    }
}

TEST(Remap, FourFoldSymmetricSourceGivesSymmetricOutput) {
    TargetSpec spec;
    spec.rings = 3;
    spec.ring_thickness = 4.0;
    const CameraModel cam(60.0);
    const ImageBuffer src = render_rings(spec, cam, 128, 128);
    WarpConfig cfg{WarpMode::full, cam, 0.0, Interp::nearest};
    cfg.out_width = 240;
    cfg.out_height = 240;
    const Lut lut = build_lut(cfg, 128, 128);

    const ImageBuffer nearest = remap(src, lut, Interp::nearest);
    const ImageBuffer bilinear = remap(src, lut, Interp::bilinear);
    for (int j = 0; j < 240; ++j) {
        for (int i = 0; i < 240; ++i) {
            const int mi = 239 - i, mj = 239 - j;
            EXPECT_EQ(nearest.at(i, j), nearest.at(mi, j));
            EXPECT_EQ(nearest.at(i, j), nearest.at(i, mj));
            EXPECT_EQ(nearest.at(i, j), nearest.at(j, i));
            EXPECT_LE(std::abs(int(bilinear.at(i, j)) - int(bilinear.at(mi, j))), 1);
            EXPECT_LE(std::abs(int(bilinear.at(i, j)) - int(bilinear.at(i, mj))), 1);
            EXPECT_LE(std::abs(int(bilinear.at(i, j)) - int(bilinear.at(j, i))), 1);
        }
    }
}

TEST(Remap, MatchesSerialEvaluationBitwise) {
    // The parallel row partition must not influence the result: a plain
    // serial loop over the same LUT entries gives bit-identical bytes.
    const CameraModel cam(64.0);
    const ImageBuffer src = noise_image(128, 128, 3, 6);
    WarpConfig cfg{WarpMode::full, cam};
    const Lut lut = build_lut(cfg, 128, 128);
    const ImageBuffer out = remap(src, lut, Interp::bicubic);

    ImageBuffer serial(lut.width, lut.height, 3);
    for (int j = 0; j < lut.height; ++j) {
        for (int i = 0; i < lut.width; ++i) {
            const std::size_t idx = static_cast<std::size_t>(j) * lut.width + i;
            if (lut.is_sentinel(idx)) {
                for (int c = 0; c < 3; ++c) serial.at(i, j, c) = 0;
                continue;
            }
            const auto v = interpolate(src, lut.entries[idx][0], lut.entries[idx][1],
                                       Interp::bicubic);
            for (int c = 0; c < 3; ++c) {
                serial.at(i, j, c) =
                    static_cast<std::uint8_t>(std::clamp(std::lround(v[c]), 0L, 255L));
            }
        }
    }
    EXPECT_EQ(out.data, serial.data);
}

TEST(Remap, RejectsMismatchedBuffers) {
    ImageBuffer bad(8, 8, 1);
    bad.data.resize(10);  // wrong size for its dimensions
    const Lut lut = identity_lut(8, 8);
    EXPECT_THROW(remap(bad, lut, Interp::nearest), std::invalid_argument);

    const ImageBuffer img = noise_image(8, 8, 1, 5);
    Lut badlut = identity_lut(8, 8);
    badlut.entries.pop_back();
    EXPECT_THROW(remap(img, badlut, Interp::nearest), std::invalid_argument);
}

TEST(LutFile, RoundTripsBitExactly) {
    const CameraModel cam(64.0);
    WarpConfig cfg{WarpMode::modified, cam};
    cfg.out_width = 300;  // large canvas so sentinels are present
    cfg.out_height = 300;
    const Lut lut = build_lut(cfg, 128, 128);

    const fs::path path = temp_file("roundtrip.flut");
    save_lut(path, lut);
    const Lut loaded = load_lut(path);
    EXPECT_EQ(loaded.width, lut.width);
    EXPECT_EQ(loaded.height, lut.height);
    ASSERT_EQ(loaded.entries.size(), lut.entries.size());
    EXPECT_EQ(std::memcmp(loaded.entries.data(), lut.entries.data(),
                          lut.entries.size() * sizeof(lut.entries[0])), 0);
    fs::remove(path);
}

TEST(LutFile, HeaderLayout) {
    Lut lut = identity_lut(2, 1);
    lut.entries[1] = {Lut::sentinel_value(), Lut::sentinel_value()};
    const fs::path path = temp_file("header.flut");
    save_lut(path, lut);

    std::ifstream in(path, std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    ASSERT_EQ(bytes.size(), 14u + 2u * 8u);
    EXPECT_EQ(bytes.substr(0, 6), std::string("FLUT1\0", 6));
    EXPECT_EQ(static_cast<unsigned char>(bytes[6]), 2);   // width LE
    EXPECT_EQ(static_cast<unsigned char>(bytes[7]), 0);
    EXPECT_EQ(static_cast<unsigned char>(bytes[10]), 1);  // height LE
    fs::remove(path);
}

TEST(LutFile, RejectsWrongMagic) {
    const fs::path path = temp_file("magic.flut");
    std::ofstream(path, std::ios::binary) << "NOTLUT00000000000000";
    EXPECT_THROW(load_lut(path), FormatError);
    fs::remove(path);
}

TEST(LutFile, RejectsTruncatedAndTrailing) {
    const Lut lut = identity_lut(4, 4);
    const fs::path path = temp_file("trunc.flut");
    save_lut(path, lut);

    std::ifstream in(path, std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    in.close();

    const fs::path cut = temp_file("cut.flut");
    std::ofstream(cut, std::ios::binary) << bytes.substr(0, bytes.size() - 5);
    EXPECT_THROW(load_lut(cut), IoError);
    fs::remove(cut);

    const fs::path extra = temp_file("extra.flut");
    std::ofstream(extra, std::ios::binary) << bytes << "xx";
    EXPECT_THROW(load_lut(extra), FormatError);
    fs::remove(extra);

    EXPECT_THROW(load_lut(temp_file("missing.flut")), IoError);
    fs::remove(path);
}

TEST(LutFile, RejectsMalformedEntries) {
    Lut lut = identity_lut(2, 1);
    lut.entries[0] = {Lut::sentinel_value(), 1.0f};  // half-sentinel
    const fs::path path = temp_file("halfnan.flut");
    save_lut(path, lut);
    EXPECT_THROW(load_lut(path), FormatError);

    lut.entries[0] = {std::numeric_limits<float>::infinity(), 1.0f};
    save_lut(path, lut);
    EXPECT_THROW(load_lut(path), FormatError);
    fs::remove(path);
}

}  // namespace
}  // namespace fisheye
