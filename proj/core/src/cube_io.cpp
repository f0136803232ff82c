// Copyright 2026 The SSPSR Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sspsr/cube_io.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <memory>

#include "binary_io.hpp"

namespace sspsr {
namespace {

std::string position_of(const HsiCube& cube, std::size_t flat) {
    const std::size_t plane = cube.pixels();
    return "band " + std::to_string(flat / plane) + ", row " +
           std::to_string((flat % plane) / cube.width()) + ", col " +
           std::to_string(flat % cube.width());
}

}  // namespace

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw FormatError("write failed for " + path.string());
}

std::vector<std::uint8_t> encode_cube(const HsiCube& cube) {
    detail::ByteWriter w;
    w.bytes(kHsicMagic.data(), kHsicMagic.size());
    w.u32(kHsicVersion);
    w.u32(static_cast<std::uint32_t>(cube.bands()));
    w.u32(static_cast<std::uint32_t>(cube.height()));
    w.u32(static_cast<std::uint32_t>(cube.width()));
    const auto values = cube.tensor().data();
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double v = values[i];
        if (!(v >= 0.0 && v <= 1.0)) {
            throw FormatError("cube value " + std::to_string(v) + " outside [0,1] at " +
                              position_of(cube, i));
        }
        w.f32(static_cast<float>(v));
    }
    return std::move(w.buffer());
}

HsiCube decode_cube(const std::vector<std::uint8_t>& bytes, const std::string& origin) {
    detail::ByteReader r(bytes, origin);
    std::array<char, 4> magic{};
    r.bytes(magic.data(), magic.size(), "magic");
    if (magic != kHsicMagic) throw FormatError(origin + ": bad magic, not an HSIC file");
    const std::uint32_t version = r.u32("version");
    if (version != kHsicVersion) {
        throw FormatError(origin + ": unsupported HSIC version " + std::to_string(version));
    }
    const std::uint64_t bands = r.u32("bands");
    const std::uint64_t height = r.u32("height");
    const std::uint64_t width = r.u32("width");
    const std::uint64_t count = bands * height * width;
    if (count == 0) throw FormatError(origin + ": header declares an empty cube");
    if (r.remaining() != count * 4) {
        throw FormatError(origin + ": header declares " + std::to_string(bands) + "x" +
                          std::to_string(height) + "x" + std::to_string(width) + " (" +
                          std::to_string(count * 4) + " payload bytes) but file has " +
                          std::to_string(r.remaining()));
    }
    HsiCube cube(bands, height, width);
    auto dst = cube.tensor().data();
    for (std::size_t i = 0; i < count; ++i) {
        const float v = r.f32("sample");
        if (!(v >= 0.0f && v <= 1.0f)) {
            throw FormatError(origin + ": sample " + std::to_string(v) + " outside [0,1] at " +
                              position_of(cube, i) + " (byte " +
                              std::to_string(r.position() - 4) + ")");
        }
        dst[i] = static_cast<double>(v);
    }
    return cube;
}

void save_cube(const HsiCube& cube, const std::filesystem::path& path) {
    write_file(path, encode_cube(cube));
}

HsiCube load_cube(const std::filesystem::path& path) {
    return decode_cube(read_file(path), path.string());
}

void write_png_composite(const HsiCube& cube, std::array<std::size_t, 3> rgb_bands,
                         const std::filesystem::path& path) {
    for (auto b : rgb_bands) {
        if (b >= cube.bands()) {
            throw std::invalid_argument("composite band " + std::to_string(b) + " out of range for " +
                                        std::to_string(cube.bands()) + "-band cube");
        }
    }
    const std::size_t h = cube.height(), w = cube.width();
    std::vector<png_byte> rgb(h * w * 3);
    for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x < w; ++x)
            for (std::size_t c = 0; c < 3; ++c) {
                const double v = std::clamp(cube(rgb_bands[c], y, x), 0.0, 1.0);
                rgb[(y * w + x) * 3 + c] = static_cast<png_byte>(std::lround(v * 255.0));
            }

    std::unique_ptr<FILE, int (*)(FILE*)> fp(std::fopen(path.string().c_str(), "wb"), &std::fclose);
    if (!fp) throw FormatError("cannot open " + path.string() + " for writing");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, nullptr);
        throw FormatError("libpng initialisation failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw FormatError("libpng failed while writing " + path.string());
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(w), static_cast<png_uint_32>(h), 8,
                 PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (std::size_t y = 0; y < h; ++y) png_write_row(png, rgb.data() + y * w * 3);
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

}  // namespace sspsr
