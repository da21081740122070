#include <png.h>

#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "scaffold/imaging.hpp"

namespace scaffold {

namespace {

bool has_png_signature(const std::vector<std::uint8_t>& bytes) {
    static const std::uint8_t sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a,
                                        '\n'};
    return bytes.size() >= 8 && std::memcmp(bytes.data(), sig, 8) == 0;
}

DecodedImage decode_png(const std::vector<std::uint8_t>& bytes) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&image, bytes.data(),
                                          bytes.size())) {
        throw CorruptPayload(std::string("png: ") + image.message);
    }
    const bool gray = (image.format & PNG_FORMAT_FLAG_COLOR) == 0 &&
                      (image.format & PNG_FORMAT_FLAG_ALPHA) == 0;
    if (gray) {
        image.format = PNG_FORMAT_GRAY;
        GrayImage out(static_cast<int>(image.width),
                      static_cast<int>(image.height));
        if (!png_image_finish_read(&image, nullptr, out.data.data(), 0,
                                   nullptr)) {
            throw CorruptPayload(std::string("png: ") + image.message);
        }
        return out;
    }
    image.format = PNG_FORMAT_RGB;
    RgbImage out(static_cast<int>(image.width),
                 static_cast<int>(image.height));
    if (!png_image_finish_read(&image, nullptr, out.data.data(), 0, nullptr)) {
        throw CorruptPayload(std::string("png: ") + image.message);
    }
    return out;
}

std::vector<std::uint8_t> encode_png_impl(const void* pixels, int w, int h,
                                          bool gray) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(w);
    image.height = static_cast<png_uint_32>(h);
    image.format = gray ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;

    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&image, nullptr, &size, 0, pixels, 0,
                                   nullptr)) {
        throw IoError(std::string("png encode: ") + image.message);
    }
    std::vector<std::uint8_t> out(size);
    if (!png_image_write_to_memory(&image, out.data(), &size, 0, pixels, 0,
                                   nullptr)) {
        throw IoError(std::string("png encode: ") + image.message);
    }
    out.resize(size);
    return out;
}

DecodedImage decode_ppm(const std::vector<std::uint8_t>& bytes) {
    std::string text(bytes.begin(), bytes.end());
    std::istringstream in(text);
    std::string magic;
    in >> magic;
    if (magic != "P3") throw UnsupportedFormat("not an ASCII PPM");
    long w = 0, h = 0, maxval = 0;
    auto next_int = [&](long& v) {
        // skip whitespace and '#' comments
        for (;;) {
            int c = in.peek();
            if (c == EOF) throw CorruptPayload("ppm: truncated header");
            if (std::isspace(c)) {
                in.get();
            } else if (c == '#') {
                std::string line;
                std::getline(in, line);
            } else {
                break;
            }
        }
        if (!(in >> v)) throw CorruptPayload("ppm: truncated header");
    };
    next_int(w);
    next_int(h);
    next_int(maxval);
    if (w < 1 || h < 1 || maxval < 1 || maxval > 65535)
        throw CorruptPayload("ppm: bad dimensions or maxval");
    RgbImage out(static_cast<int>(w), static_cast<int>(h));
    for (std::size_t i = 0; i < out.data.size(); ++i) {
        long v;
        if (!(in >> v)) throw CorruptPayload("ppm: truncated pixel data");
        if (v < 0 || v > maxval) throw CorruptPayload("ppm: sample out of range");
        out.data[i] =
            static_cast<std::uint8_t>((v * 255 + maxval / 2) / maxval);
    }
    return out;
}

} // namespace

DecodedImage decode_image(const std::vector<std::uint8_t>& bytes) {
    if (has_png_signature(bytes)) return decode_png(bytes);
    if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '3')
        return decode_ppm(bytes);
    throw UnsupportedFormat("expected PNG or ASCII PPM (P3)");
}

DecodedImage load_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return decode_image(bytes);
}

std::vector<std::uint8_t> encode_png(const GrayImage& img) {
    return encode_png_impl(img.data.data(), img.width, img.height, true);
}

std::vector<std::uint8_t> encode_png(const RgbImage& img) {
    return encode_png_impl(img.data.data(), img.width, img.height, false);
}

std::string encode_ppm(const RgbImage& img) {
    std::ostringstream out;
    out << "P3\n" << img.width << ' ' << img.height << "\n255\n";
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const std::uint8_t* p = img.pixel(x, y);
            out << int(p[0]) << ' ' << int(p[1]) << ' ' << int(p[2])
                << (x + 1 == img.width ? '\n' : ' ');
        }
    }
    return out.str();
}

std::string encode_ppm(const GrayImage& img) { return encode_ppm(to_rgb(img)); }

namespace {
void write_file(const std::string& path, const std::vector<std::uint8_t>& b) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path);
    out.write(reinterpret_cast<const char*>(b.data()),
              static_cast<std::streamsize>(b.size()));
    if (!out) throw IoError("short write to " + path);
}
} // namespace

void save_png(const GrayImage& img, const std::string& path) {
    write_file(path, encode_png(img));
}

void save_png(const RgbImage& img, const std::string& path) {
    write_file(path, encode_png(img));
}

} // namespace scaffold
