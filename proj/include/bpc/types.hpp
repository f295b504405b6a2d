#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bpc {

// Identifier of a binary pattern channel: the h*h template neighborhood read
// row-major, top-left pixel in the most significant bit. Valid range [0, M).
using PatternId = std::uint32_t;

// Everything is validated twice on purpose: validate_* functions report the
// first violated invariant as a string (empty optional means ok) so callers
// can check untrusted data without exceptions, and the constructors call the
// same functions and throw std::invalid_argument. Past construction the
// invariants hold.

struct ModelConfig {
    int h = 3;                 // template side length, odd, 1 <= h <= 5
    double prob_floor = 1e-6;  // clamp for estimated probabilities, in (0, 0.5)

    ModelConfig() = default;
    ModelConfig(int h_, double prob_floor_) : h(h_), prob_floor(prob_floor_) {
        if (auto err = validate(*this)) throw std::invalid_argument(*err);
    }

    // Number of channels, M = 2^(h*h).
    std::uint32_t num_patterns() const {
        return std::uint32_t{1} << (h * h);
    }
    // Border width excluded from channel extraction.
    int margin() const { return h / 2; }

    friend bool operator==(const ModelConfig& a, const ModelConfig& b) {
        return a.h == b.h && a.prob_floor == b.prob_floor;
    }
    friend bool operator!=(const ModelConfig& a, const ModelConfig& b) {
        return !(a == b);
    }

    static std::optional<std::string> validate(const ModelConfig& c) {
        if (c.h < 1 || c.h % 2 == 0)
            return "ModelConfig: h must be a positive odd integer, got " +
                   std::to_string(c.h);
        if (c.h > 5)
            return "ModelConfig: h > 5 is unsupported (2^(h*h) channels would "
                   "not be addressable), got " + std::to_string(c.h);
        if (!(c.prob_floor > 0.0) || !(c.prob_floor < 0.5))
            return "ModelConfig: prob_floor must lie in (0, 0.5), got " +
                   std::to_string(c.prob_floor);
        return std::nullopt;
    }
};

inline std::optional<std::string> validate(const ModelConfig& c) {
    return ModelConfig::validate(c);
}

// Row-major bit raster; 1 = printed (black), 0 = background (white).
struct BinaryImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;  // size width*height, values 0 or 1

    BinaryImage() = default;
    BinaryImage(int w, int h, std::vector<std::uint8_t> b)
        : width(w), height(h), bits(std::move(b)) {
        if (auto err = validate(*this)) throw std::invalid_argument(*err);
    }
    static BinaryImage filled(int w, int h, std::uint8_t value) {
        return BinaryImage(w, h,
                           std::vector<std::uint8_t>(
                               static_cast<std::size_t>(w) * static_cast<std::size_t>(h), value));
    }

    std::uint8_t at(int x, int y) const {
        return bits[static_cast<std::size_t>(y) * width + x];
    }
    std::uint8_t& at(int x, int y) {
        return bits[static_cast<std::size_t>(y) * width + x];
    }

    friend bool operator==(const BinaryImage& a, const BinaryImage& b) {
        return a.width == b.width && a.height == b.height && a.bits == b.bits;
    }

    static std::optional<std::string> validate(const BinaryImage& im) {
        if (im.width <= 0 || im.height <= 0)
            return "BinaryImage: dimensions must be positive, got " +
                   std::to_string(im.width) + "x" + std::to_string(im.height);
        const std::size_t want =
            static_cast<std::size_t>(im.width) * static_cast<std::size_t>(im.height);
        if (im.bits.size() != want)
            return "BinaryImage: bit buffer holds " + std::to_string(im.bits.size()) +
                   " entries, expected " + std::to_string(want);
        for (std::size_t i = 0; i < im.bits.size(); ++i)
            if (im.bits[i] > 1)
                return "BinaryImage: bit " + std::to_string(i) + " has value " +
                       std::to_string(int(im.bits[i])) + ", expected 0 or 1";
        return std::nullopt;
    }
};

inline std::optional<std::string> validate(const BinaryImage& im) {
    return BinaryImage::validate(im);
}

// Row-major grayscale raster with intensities in [0, 1].
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<double> pixels;  // size width*height

    GrayImage() = default;
    GrayImage(int w, int h, std::vector<double> p)
        : width(w), height(h), pixels(std::move(p)) {
        if (auto err = validate(*this)) throw std::invalid_argument(*err);
    }

    double at(int x, int y) const {
        return pixels[static_cast<std::size_t>(y) * width + x];
    }
    double& at(int x, int y) {
        return pixels[static_cast<std::size_t>(y) * width + x];
    }

    static std::optional<std::string> validate(const GrayImage& im) {
        if (im.width <= 0 || im.height <= 0)
            return "GrayImage: dimensions must be positive, got " +
                   std::to_string(im.width) + "x" + std::to_string(im.height);
        const std::size_t want =
            static_cast<std::size_t>(im.width) * static_cast<std::size_t>(im.height);
        if (im.pixels.size() != want)
            return "GrayImage: pixel buffer holds " + std::to_string(im.pixels.size()) +
                   " entries, expected " + std::to_string(want);
        for (std::size_t i = 0; i < im.pixels.size(); ++i) {
            const double v = im.pixels[i];
            if (!(v >= 0.0 && v <= 1.0))
                return "GrayImage: pixel " + std::to_string(i) + " has value " +
                       std::to_string(v) + ", expected [0, 1]";
        }
        return std::nullopt;
    }
};

inline std::optional<std::string> validate(const GrayImage& im) {
    return GrayImage::validate(im);
}

}  // namespace bpc
