#pragma once

#include <cctype>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bpc/io_util.hpp"
#include "bpc/types.hpp"

// Netpbm I/O. Binary images travel as PBM (P1 plain / P4 raw), grayscale as
// 8-bit PGM (P2 plain / P5 raw) with value v read as v/255. PBM's "1 = black"
// matches the bit convention in BinaryImage, so bits pass through unchanged.

namespace bpc {

namespace detail {

class PnmParser {
  public:
    PnmParser(std::string_view data, const std::string& path)
        : data_(data), path_(path) {}

    std::string magic() {
        if (data_.size() < 2 || data_[0] != 'P')
            fail("not a PBM/PGM file (missing P? magic)");
        std::string m{data_.substr(0, 2)};
        pos_ = 2;
        return m;
    }

    // Header tokens are separated by whitespace; '#' starts a comment that
    // runs to end of line.
    int header_int(const char* what) {
        skip_space_and_comments();
        if (pos_ >= data_.size() || !std::isdigit(static_cast<unsigned char>(data_[pos_])))
            fail(std::string("expected ") + what);
        long v = 0;
        while (pos_ < data_.size() && std::isdigit(static_cast<unsigned char>(data_[pos_]))) {
            v = v * 10 + (data_[pos_] - '0');
            if (v > 1'000'000'000) fail(std::string(what) + " out of range");
            ++pos_;
        }
        return static_cast<int>(v);
    }

    // Raw formats: exactly one whitespace byte separates the header from the
    // pixel data.
    void expect_single_space() {
        if (pos_ >= data_.size() ||
            !std::isspace(static_cast<unsigned char>(data_[pos_])))
            fail("raster must follow a single whitespace byte");
        ++pos_;
    }

    std::string_view rest() const { return data_.substr(pos_); }

    void skip_space_and_comments() {
        while (pos_ < data_.size()) {
            const char c = data_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else if (c == '#') {
                while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    [[noreturn]] void fail(const std::string& why) const {
        throw std::runtime_error(path_ + ": " + why);
    }

    std::string_view data_;
    std::string path_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline BinaryImage decode_pbm(std::string_view data, const std::string& path) {
    detail::PnmParser p(data, path);
    const std::string magic = p.magic();
    if (magic != "P1" && magic != "P4") p.fail("expected P1 or P4, got " + magic);
    const int w = p.header_int("width");
    const int h = p.header_int("height");
    if (w <= 0 || h <= 0) p.fail("non-positive dimensions");
    std::vector<std::uint8_t> bits;
    bits.reserve(static_cast<std::size_t>(w) * h);
    if (magic == "P1") {
        for (std::size_t need = static_cast<std::size_t>(w) * h; bits.size() < need;) {
            p.skip_space_and_comments();
            auto r = p.rest();
            if (r.empty()) p.fail("truncated raster");
            if (r[0] != '0' && r[0] != '1') p.fail("P1 raster digit must be 0 or 1");
            bits.push_back(static_cast<std::uint8_t>(r[0] - '0'));
            ++p.pos_;
        }
    } else {
        p.expect_single_space();
        auto r = p.rest();
        const std::size_t row_bytes = (static_cast<std::size_t>(w) + 7) / 8;
        if (r.size() < row_bytes * h) p.fail("truncated raster");
        for (int y = 0; y < h; ++y) {
            const auto* row = reinterpret_cast<const std::uint8_t*>(r.data()) + row_bytes * y;
            for (int x = 0; x < w; ++x)
                bits.push_back((row[x / 8] >> (7 - x % 8)) & 1u);
        }
    }
    return BinaryImage(w, h, std::move(bits));
}

inline BinaryImage read_pbm(const std::string& path) {
    return decode_pbm(read_file(path), path);
}

inline std::string encode_pbm(const BinaryImage& im, bool raw = true) {
    std::string out;
    if (raw) {
        out = "P4\n" + std::to_string(im.width) + " " + std::to_string(im.height) + "\n";
        const std::size_t row_bytes = (static_cast<std::size_t>(im.width) + 7) / 8;
        for (int y = 0; y < im.height; ++y) {
            std::string row(row_bytes, '\0');
            for (int x = 0; x < im.width; ++x)
                if (im.at(x, y))
                    row[x / 8] |= static_cast<char>(0x80u >> (x % 8));
            out += row;
        }
    } else {
        out = "P1\n" + std::to_string(im.width) + " " + std::to_string(im.height) + "\n";
        for (int y = 0; y < im.height; ++y) {
            for (int x = 0; x < im.width; ++x) {
                out += im.at(x, y) ? '1' : '0';
                out += (x + 1 == im.width) ? '\n' : ' ';
            }
        }
    }
    return out;
}

inline void write_pbm(const BinaryImage& im, const std::string& path, bool raw = true) {
    write_file_atomic(path, encode_pbm(im, raw));
}

inline GrayImage decode_pgm(std::string_view data, const std::string& path) {
    detail::PnmParser p(data, path);
    const std::string magic = p.magic();
    if (magic != "P2" && magic != "P5") p.fail("expected P2 or P5, got " + magic);
    const int w = p.header_int("width");
    const int h = p.header_int("height");
    const int maxval = p.header_int("maxval");
    if (w <= 0 || h <= 0) p.fail("non-positive dimensions");
    if (maxval <= 0 || maxval > 255) p.fail("unsupported maxval " + std::to_string(maxval));
    const std::size_t n = static_cast<std::size_t>(w) * h;
    std::vector<double> px;
    px.reserve(n);
    if (magic == "P2") {
        for (std::size_t i = 0; i < n; ++i) {
            const int v = p.header_int("pixel");
            if (v > maxval) p.fail("pixel exceeds maxval");
            px.push_back(static_cast<double>(v) / maxval);
        }
    } else {
        p.expect_single_space();
        auto r = p.rest();
        if (r.size() < n) p.fail("truncated raster");
        for (std::size_t i = 0; i < n; ++i) {
            const auto v = static_cast<std::uint8_t>(r[i]);
            if (v > maxval) p.fail("pixel exceeds maxval");
            px.push_back(static_cast<double>(v) / maxval);
        }
    }
    return GrayImage(w, h, std::move(px));
}

inline GrayImage read_pgm(const std::string& path) {
    return decode_pgm(read_file(path), path);
}

inline std::string encode_pgm(const GrayImage& im) {
    std::string out = "P5\n" + std::to_string(im.width) + " " +
                      std::to_string(im.height) + "\n255\n";
    out.reserve(out.size() + im.pixels.size());
    for (double v : im.pixels)
        out += static_cast<char>(static_cast<int>(v * 255.0 + 0.5));
    return out;
}

inline void write_pgm(const GrayImage& im, const std::string& path) {
    write_file_atomic(path, encode_pgm(im));
}

// Ink (bit 1) is dark: intensity 0. Background is white: intensity 1.
inline GrayImage to_gray(const BinaryImage& im) {
    std::vector<double> px(im.bits.size());
    for (std::size_t i = 0; i < px.size(); ++i)
        px[i] = im.bits[i] ? 0.0 : 1.0;
    return GrayImage(im.width, im.height, std::move(px));
}

// Reads a probe capture regardless of container: PGM stays gray, PBM is
// promoted to the two-level gray image it represents.
inline GrayImage read_gray_any(const std::string& path) {
    const std::string data = read_file(path);
    if (data.size() >= 2 && data[0] == 'P' && (data[1] == '1' || data[1] == '4'))
        return to_gray(decode_pbm(data, path));
    return decode_pgm(data, path);
}

}  // namespace bpc
