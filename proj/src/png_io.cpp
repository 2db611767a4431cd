#include "relight/png_io.hpp"

#include <png.h>

#include <bit>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <vector>

#include "relight/detail/pixel_math.hpp"

static_assert(std::endian::native == std::endian::little,
              "file formats are little endian and assume a little-endian host");

namespace relight {
namespace {

struct File {
    std::FILE* fp = nullptr;
    File(const std::string& path, const char* mode) : fp(std::fopen(path.c_str(), mode)) {
        if (!fp) throw IoError("cannot open '" + path + "'");
    }
    ~File() {
        if (fp) std::fclose(fp);
    }
    File(const File&) = delete;
    File& operator=(const File&) = delete;
};

struct PngRead {
    png_structp png = nullptr;
    png_infop info = nullptr;
    PngRead() {
        png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
        if (png) info = png_create_info_struct(png);
        if (!png || !info) throw IoError("libpng allocation failed");
    }
    ~PngRead() { png_destroy_read_struct(&png, &info, nullptr); }
    PngRead(const PngRead&) = delete;
    PngRead& operator=(const PngRead&) = delete;
};

struct PngWrite {
    png_structp png = nullptr;
    png_infop info = nullptr;
    PngWrite() {
        png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
        if (png) info = png_create_info_struct(png);
        if (!png || !info) throw IoError("libpng allocation failed");
    }
    ~PngWrite() { png_destroy_write_struct(&png, &info); }
    PngWrite(const PngWrite&) = delete;
    PngWrite& operator=(const PngWrite&) = delete;
};

bool has_suffix(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

Image read_png(const std::string& path) {
    File file(path, "rb");
    unsigned char sig[8];
    if (std::fread(sig, 1, 8, file.fp) != 8 || png_sig_cmp(sig, 0, 8)) {
        throw IoError("'" + path + "' is not a PNG file");
    }
    PngRead ctx;
    std::vector<png_byte> bytes;
    std::vector<png_bytep> rows;
    // libpng reports errors by longjmp; translate to an exception here.
    if (setjmp(png_jmpbuf(ctx.png))) throw IoError("PNG decode failed for '" + path + "'");
    png_init_io(ctx.png, file.fp);
    png_set_sig_bytes(ctx.png, 8);
    png_read_info(ctx.png, ctx.info);

    png_uint_32 w = 0, h = 0;
    int bit_depth = 0, color_type = 0;
    png_get_IHDR(ctx.png, ctx.info, &w, &h, &bit_depth, &color_type, nullptr, nullptr, nullptr);
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(ctx.png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(ctx.png);
    if (png_get_valid(ctx.png, ctx.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(ctx.png);
    png_set_strip_alpha(ctx.png);
    png_read_update_info(ctx.png, ctx.info);

    bit_depth = png_get_bit_depth(ctx.png, ctx.info);
    const int channels = png_get_channels(ctx.png, ctx.info);
    if ((bit_depth != 8 && bit_depth != 16) || (channels != 1 && channels != 3)) {
        throw IoError("unsupported PNG layout in '" + path + "'");
    }
    const std::size_t rowbytes = png_get_rowbytes(ctx.png, ctx.info);
    bytes.resize(rowbytes * h);
    rows.resize(h);
    for (png_uint_32 y = 0; y < h; ++y) rows[y] = bytes.data() + y * rowbytes;
    png_read_image(ctx.png, rows.data());
    png_read_end(ctx.png, nullptr);

    Image img = Image::make(static_cast<int>(h), static_cast<int>(w), channels, ColorSpace::SRGB);
    for (png_uint_32 y = 0; y < h; ++y) {
        const png_byte* row = rows[y];
        for (png_uint_32 x = 0; x < w; ++x) {
            for (int c = 0; c < channels; ++c) {
                float v;
                if (bit_depth == 8) {
                    v = row[x * channels + c] / 255.0f;
                } else {
                    const png_byte* p = row + (x * channels + c) * 2;  // network byte order
                    v = static_cast<float>((p[0] << 8) | p[1]) / 65535.0f;
                }
                img.at(c, static_cast<int>(y), static_cast<int>(x)) = v;
            }
        }
    }
    return img;
}

void write_png(const std::string& path, const Image& img, int bit_depth) {
    if (bit_depth != 8 && bit_depth != 16) throw InvalidInput("PNG bit depth must be 8 or 16");
    if (img.channels != 1 && img.channels != 3) {
        throw InvalidInput("PNG supports 1 or 3 channels, got " + std::to_string(img.channels));
    }
    if (img.color_space == ColorSpace::Lab) throw InvalidInput("cannot write LAB samples to PNG");

    const int maxv = (1 << bit_depth) - 1;
    const std::size_t rowbytes =
        static_cast<std::size_t>(img.width) * img.channels * (bit_depth / 8);
    std::vector<png_byte> bytes(rowbytes * img.height);
    std::vector<png_bytep> rows(img.height);
    for (int y = 0; y < img.height; ++y) {
        png_byte* row = bytes.data() + y * rowbytes;
        rows[y] = row;
        for (int x = 0; x < img.width; ++x) {
            for (int c = 0; c < img.channels; ++c) {
                const long q = std::lround(detail::clamp01(img.at(c, y, x)) * maxv);
                if (bit_depth == 8) {
                    row[x * img.channels + c] = static_cast<png_byte>(q);
                } else {
                    png_byte* p = row + (x * img.channels + c) * 2;
                    p[0] = static_cast<png_byte>(q >> 8);
                    p[1] = static_cast<png_byte>(q & 0xFF);
                }
            }
        }
    }

    File file(path, "wb");
    PngWrite ctx;
    if (setjmp(png_jmpbuf(ctx.png))) throw IoError("PNG encode failed for '" + path + "'");
    png_init_io(ctx.png, file.fp);
    png_set_IHDR(ctx.png, ctx.info, img.width, img.height, bit_depth,
                 img.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(ctx.png, ctx.info);
    png_write_image(ctx.png, rows.data());
    png_write_end(ctx.png, nullptr);
}

namespace {

constexpr char kRawMagic[4] = {'R', 'A', 'W', 'F'};

void put_u32(std::ostream& os, std::uint32_t v) {
    char b[4] = {static_cast<char>(v), static_cast<char>(v >> 8), static_cast<char>(v >> 16),
                 static_cast<char>(v >> 24)};
    os.write(b, 4);
}

std::uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

Image read_rawf32(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open '" + path + "'");
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kRawMagic, 4) != 0) {
        throw IoError("'" + path + "' is not a rawf32 file");
    }
    const std::uint32_t h = get_u32(is), w = get_u32(is), c = get_u32(is);
    if (!is || h == 0 || w == 0 || c == 0 || c > 16 ||
        static_cast<std::uint64_t>(h) * w * c > (1u << 30)) {
        throw IoError("implausible rawf32 header in '" + path + "'");
    }
    Image img = Image::make(static_cast<int>(h), static_cast<int>(w), static_cast<int>(c),
                            ColorSpace::SRGB);
    is.read(reinterpret_cast<char*>(img.data.data()),
            static_cast<std::streamsize>(img.data.size() * sizeof(float)));
    if (is.gcount() != static_cast<std::streamsize>(img.data.size() * sizeof(float))) {
        throw IoError("truncated rawf32 payload in '" + path + "'");
    }
    return img;
}

void write_rawf32(const std::string& path, const Image& img) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    os.write(kRawMagic, 4);
    put_u32(os, static_cast<std::uint32_t>(img.height));
    put_u32(os, static_cast<std::uint32_t>(img.width));
    put_u32(os, static_cast<std::uint32_t>(img.channels));
    os.write(reinterpret_cast<const char*>(img.data.data()),
             static_cast<std::streamsize>(img.data.size() * sizeof(float)));
    if (!os) throw IoError("short write to '" + path + "'");
}

Image read_image(const std::string& path) {
    if (has_suffix(path, ".png")) return read_png(path);
    if (has_suffix(path, ".rawf32")) return read_rawf32(path);
    throw IoError("unsupported image extension on '" + path + "' (expect .png or .rawf32)");
}

void write_image(const std::string& path, const Image& img, int png_bit_depth) {
    if (has_suffix(path, ".png")) {
        write_png(path, img, png_bit_depth);
    } else if (has_suffix(path, ".rawf32")) {
        write_rawf32(path, img);
    } else {
        throw IoError("unsupported image extension on '" + path + "' (expect .png or .rawf32)");
    }
}

}  // namespace relight
