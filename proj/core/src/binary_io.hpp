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

// Little-endian byte buffers shared by the cube and checkpoint formats.

#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include "sspsr/cube_io.hpp"

namespace sspsr::detail {

template <typename U>
U to_little(U v) {
    static_assert(std::is_unsigned_v<U>);
    if constexpr (std::endian::native == std::endian::big) {
        U r = 0;
        for (std::size_t i = 0; i < sizeof(U); ++i) {
            r = static_cast<U>((r << 8) | (v & 0xff));
            v = static_cast<U>(v >> 8);
        }
        return r;
    }
    return v;
}

class ByteWriter {
public:
    void bytes(const void* p, std::size_t n) {
        const auto* b = static_cast<const std::uint8_t*>(p);
        buf_.insert(buf_.end(), b, b + n);
    }
    void u32(std::uint32_t v) {
        v = to_little(v);
        bytes(&v, 4);
    }
    void f32(float f) { u32(std::bit_cast<std::uint32_t>(f)); }
    void f64(double d) {
        auto v = to_little(std::bit_cast<std::uint64_t>(d));
        bytes(&v, 8);
    }
    std::vector<std::uint8_t>& buffer() { return buf_; }

private:
    std::vector<std::uint8_t> buf_;
};

class ByteReader {
public:
    ByteReader(const std::vector<std::uint8_t>& buf, std::string origin)
        : buf_(buf), origin_(std::move(origin)) {}

    void bytes(void* p, std::size_t n, const char* what) {
        need(n, what);
        std::memcpy(p, buf_.data() + pos_, n);
        pos_ += n;
    }
    std::uint32_t u32(const char* what) {
        std::uint32_t v;
        bytes(&v, 4, what);
        return to_little(v);
    }
    float f32(const char* what) { return std::bit_cast<float>(u32(what)); }
    double f64(const char* what) {
        std::uint64_t v;
        bytes(&v, 8, what);
        return std::bit_cast<double>(to_little(v));
    }
    std::size_t position() const { return pos_; }
    std::size_t remaining() const { return buf_.size() - pos_; }
    const std::string& origin() const { return origin_; }

    void need(std::size_t n, const char* what) const {
        if (remaining() < n) {
            throw FormatError(origin_ + ": truncated while reading " + what + " at byte " +
                              std::to_string(pos_) + " (need " + std::to_string(n) + ", have " +
                              std::to_string(remaining()) + ")");
        }
    }

private:
    const std::vector<std::uint8_t>& buf_;
    std::string origin_;
    std::size_t pos_ = 0;
};

}  // namespace sspsr::detail
