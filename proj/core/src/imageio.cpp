#include "fisheye/imageio.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "fisheye/errors.hpp"

namespace fisheye {

namespace {

std::string lower_extension(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

// ---------------------------------------------------------------- PNM ---

int pnm_read_token(std::istream& in) {
    // Skips whitespace and '#' comments, then parses a decimal token.
    int ch = in.get();
    while (ch != EOF) {
        if (ch == '#') {
            while (ch != EOF && ch != '\n') ch = in.get();
        } else if (!std::isspace(ch)) {
            break;
        }
        ch = in.get();
    }
    if (ch == EOF || !std::isdigit(ch)) {
        throw FormatError("PNM: malformed header");
    }
    long value = 0;
    while (ch != EOF && std::isdigit(ch)) {
        value = value * 10 + (ch - '0');
        if (value > 1'000'000'000L) throw FormatError("PNM: header value out of range");
        ch = in.get();
    }
    if (ch != EOF) in.unget();
    return static_cast<int>(value);
}

ImageBuffer load_pnm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());

    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (!in || magic[0] != 'P' || (magic[1] != '5' && magic[1] != '6')) {
        throw FormatError("PNM: unsupported magic in " + path.string());
    }
    const int channels = magic[1] == '5' ? 1 : 3;
    const int w = pnm_read_token(in);
    const int h = pnm_read_token(in);
    const int maxval = pnm_read_token(in);
    if (w < 1 || h < 1) throw FormatError("PNM: invalid dimensions");
    if (maxval != 255) throw FormatError("PNM: only maxval 255 is supported");
    const int sep = in.get();
    if (sep == EOF || !std::isspace(sep)) throw FormatError("PNM: missing header terminator");

    ImageBuffer img(w, h, channels);
    in.read(reinterpret_cast<char*>(img.data.data()),
            static_cast<std::streamsize>(img.data.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.data.size())) {
        throw IoError("PNM: truncated pixel data in " + path.string());
    }
    return img;
}

void save_pnm(const std::filesystem::path& path, const ImageBuffer& img) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << (img.channels == 1 ? "P5" : "P6") << '\n'
        << img.width << ' ' << img.height << '\n'
        << "255\n";
    out.write(reinterpret_cast<const char*>(img.data.data()),
              static_cast<std::streamsize>(img.data.size()));
    if (!out) throw IoError("short write to " + path.string());
}

// ---------------------------------------------------------------- PNG ---

// libpng reports errors through longjmp; everything the jump may skip is
// kept in this context so both exits release the same resources.
struct PngReadCtx {
    png_structp png = nullptr;
    png_infop info = nullptr;
    std::vector<std::uint8_t> raw;
    std::vector<png_bytep> rows;
    std::string error;

    ~PngReadCtx() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    }
};

void png_error_to_ctx(png_structp png, png_const_charp msg) {
    auto* ctx = static_cast<PngReadCtx*>(png_get_error_ptr(png));
    if (ctx) ctx->error = msg ? msg : "unknown libpng error";
    longjmp(png_jmpbuf(png), 1);
}

void png_warning_ignore(png_structp, png_const_charp) {}

ImageBuffer load_png(const std::filesystem::path& path) {
    FilePtr fp(std::fopen(path.string().c_str(), "rb"));
    if (!fp) throw IoError("cannot open " + path.string());

    unsigned char sig[8];
    if (std::fread(sig, 1, 8, fp.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
        throw FormatError("PNG: bad signature in " + path.string());
    }

    PngReadCtx ctx;
    ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &ctx,
                                     png_error_to_ctx, png_warning_ignore);
    if (!ctx.png) throw IoError("PNG: cannot allocate read struct");
    ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.info) throw IoError("PNG: cannot allocate info struct");

    if (setjmp(png_jmpbuf(ctx.png))) {
        throw FormatError("PNG: " + ctx.error + " in " + path.string());
    }

    png_init_io(ctx.png, fp.get());
    png_set_sig_bytes(ctx.png, 8);
    png_read_info(ctx.png, ctx.info);

    const png_uint_32 w = png_get_image_width(ctx.png, ctx.info);
    const png_uint_32 h = png_get_image_height(ctx.png, ctx.info);
    const int depth = png_get_bit_depth(ctx.png, ctx.info);
    const int color = png_get_color_type(ctx.png, ctx.info);
    const int interlace = png_get_interlace_type(ctx.png, ctx.info);

    if (depth == 16) throw FormatError("PNG: 16-bit depth is not supported: " + path.string());
    if (depth != 8) throw FormatError("PNG: only 8-bit depth is supported: " + path.string());
    if (interlace != PNG_INTERLACE_NONE) {
        throw FormatError("PNG: interlaced files are not supported: " + path.string());
    }
    const bool has_alpha = color == PNG_COLOR_TYPE_RGB_ALPHA;
    if (color != PNG_COLOR_TYPE_GRAY && color != PNG_COLOR_TYPE_RGB && !has_alpha) {
        throw FormatError("PNG: unsupported color type: " + path.string());
    }
    if (w < 1 || h < 1 || w > (1u << 24) || h > (1u << 24)) {
        throw FormatError("PNG: implausible dimensions: " + path.string());
    }

    const int channels = color == PNG_COLOR_TYPE_GRAY ? 1 : 3;
    const int read_channels = has_alpha ? 4 : channels;
    ctx.raw.resize(static_cast<std::size_t>(w) * h * read_channels);
    ctx.rows.resize(h);
    for (png_uint_32 y = 0; y < h; ++y) {
        ctx.rows[y] = ctx.raw.data() + static_cast<std::size_t>(y) * w * read_channels;
    }
    png_read_image(ctx.png, ctx.rows.data());
    png_read_end(ctx.png, nullptr);

    ImageBuffer img(static_cast<int>(w), static_cast<int>(h), channels);
    if (!has_alpha) {
        img.data = std::move(ctx.raw);
    } else {
        // Composite over black: scale color by alpha.
        const std::uint8_t* s = ctx.raw.data();
        std::uint8_t* d = img.data.data();
        for (std::size_t i = 0; i < static_cast<std::size_t>(w) * h; ++i, s += 4, d += 3) {
            const unsigned a = s[3];
            d[0] = static_cast<std::uint8_t>((s[0] * a + 127) / 255);
            d[1] = static_cast<std::uint8_t>((s[1] * a + 127) / 255);
            d[2] = static_cast<std::uint8_t>((s[2] * a + 127) / 255);
        }
    }
    return img;
}

struct PngWriteCtx {
    png_structp png = nullptr;
    png_infop info = nullptr;
    std::vector<png_bytep> rows;
    std::string error;

    ~PngWriteCtx() {
        if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
    }
};

void png_write_error_to_ctx(png_structp png, png_const_charp msg) {
    auto* ctx = static_cast<PngWriteCtx*>(png_get_error_ptr(png));
    if (ctx) ctx->error = msg ? msg : "unknown libpng error";
    longjmp(png_jmpbuf(png), 1);
}

void save_png(const std::filesystem::path& path, const ImageBuffer& img) {
    FilePtr fp(std::fopen(path.string().c_str(), "wb"));
    if (!fp) throw IoError("cannot open " + path.string() + " for writing");

    PngWriteCtx ctx;
    ctx.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &ctx,
                                      png_write_error_to_ctx, png_warning_ignore);
    if (!ctx.png) throw IoError("PNG: cannot allocate write struct");
    ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.info) throw IoError("PNG: cannot allocate info struct");

    ctx.rows.resize(img.height);
    for (int y = 0; y < img.height; ++y) {
        ctx.rows[y] = const_cast<png_bytep>(img.row(y));
    }

    if (setjmp(png_jmpbuf(ctx.png))) {
        throw IoError("PNG: " + ctx.error + " while writing " + path.string());
    }

    png_init_io(ctx.png, fp.get());
    png_set_IHDR(ctx.png, ctx.info, static_cast<png_uint_32>(img.width),
                 static_cast<png_uint_32>(img.height), 8,
                 img.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(ctx.png, ctx.info);
    png_write_image(ctx.png, ctx.rows.data());
    png_write_end(ctx.png, nullptr);
}

}  // namespace

ImageFileFormat format_from_extension(const std::filesystem::path& path) {
    const std::string ext = lower_extension(path);
    if (ext == ".png") return ImageFileFormat::png;
    if (ext == ".ppm" || ext == ".pgm") return ImageFileFormat::pnm;
    throw FormatError("unsupported image extension: " + path.string());
}

ImageBuffer load_image(const std::filesystem::path& path) {
    switch (format_from_extension(path)) {
        case ImageFileFormat::png:
            return load_png(path);
        case ImageFileFormat::pnm:
            return load_pnm(path);
    }
    throw FormatError("unsupported image format: " + path.string());
}

void save_image(const std::filesystem::path& path, const ImageBuffer& img) {
    if (img.channels != 1 && img.channels != 3) {
        throw std::invalid_argument("save_image: channel count must be 1 or 3");
    }
    if (img.data.size() != static_cast<std::size_t>(img.width) * img.height * img.channels) {
        throw std::invalid_argument("save_image: buffer size does not match dimensions");
    }
    const std::string ext = lower_extension(path);
    if (ext == ".pgm" && img.channels != 1) {
        throw std::invalid_argument("save_image: .pgm requires a 1-channel image");
    }
    if (ext == ".ppm" && img.channels != 3) {
        throw std::invalid_argument("save_image: .ppm requires a 3-channel image");
    }
    switch (format_from_extension(path)) {
        case ImageFileFormat::png:
            save_png(path, img);
            return;
        case ImageFileFormat::pnm:
            save_pnm(path, img);
            return;
    }
}

}  // namespace fisheye
