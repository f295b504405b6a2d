#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bpc/image_io.hpp"
#include "bpc/types.hpp"

// Capture preprocessing: histogram matching against a reference capture, Otsu
// binarization, and the file-to-domain ingestion used on real datasets.
// Everything is quantized to 256 uniform bins.

namespace bpc {

constexpr int kHistogramBins = 256;

struct PreprocessSpec {
    GrayImage reference;
};

namespace detail {

inline int gray_bin(double v) {
    const int b = static_cast<int>(v * kHistogramBins);
    return b > kHistogramBins - 1 ? kHistogramBins - 1 : b;
}

inline std::array<std::uint64_t, kHistogramBins> histogram(const GrayImage& im) {
    std::array<std::uint64_t, kHistogramBins> h{};
    for (double v : im.pixels) ++h[gray_bin(v)];
    return h;
}

}  // namespace detail

// Monotone CDF matching: each probe bin maps to the lowest reference bin whose
// CDF reaches the probe bin's CDF (the discrete inverse-CDF), and bin r is
// emitted as the intensity r/255. A constant probe has a degenerate CDF and is
// returned unchanged, with an explanation in *warning if provided.
inline GrayImage histogram_match(const GrayImage& probe, const GrayImage& reference,
                                 std::string* warning = nullptr) {
    if (auto err = GrayImage::validate(probe)) throw std::invalid_argument(*err);
    if (auto err = GrayImage::validate(reference)) throw std::invalid_argument(*err);
    const auto hp = detail::histogram(probe);
    const auto hr = detail::histogram(reference);

    int populated = 0;
    for (auto c : hp) populated += c > 0;
    if (populated <= 1) {
        if (warning)
            *warning = "histogram_match: probe is constant at bin resolution; returned unchanged";
        return probe;
    }

    const double np = static_cast<double>(probe.pixels.size());
    const double nr = static_cast<double>(reference.pixels.size());
    std::array<double, kHistogramBins> cdf_p{}, cdf_r{};
    double accp = 0.0, accr = 0.0;
    for (int b = 0; b < kHistogramBins; ++b) {
        accp += static_cast<double>(hp[b]) / np;
        accr += static_cast<double>(hr[b]) / nr;
        cdf_p[b] = accp;
        cdf_r[b] = accr;
    }
    std::array<double, kHistogramBins> lut{};
    int r = 0;
    for (int b = 0; b < kHistogramBins; ++b) {
        while (r < kHistogramBins - 1 && cdf_r[r] < cdf_p[b]) ++r;
        lut[b] = static_cast<double>(r) / (kHistogramBins - 1);
    }
    std::vector<double> out(probe.pixels.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = lut[detail::gray_bin(probe.pixels[i])];
    return GrayImage(probe.width, probe.height, std::move(out));
}

struct OtsuResult {
    BinaryImage image;
    double threshold = 0.0;
};

// Between-class variance over the 256-bin histogram is A(t)^2 / (N^2 B(t))
// with A = sum0*N - S*cnt0 and B = cnt0*(N - cnt0), all integers, so the
// argmax (ties to the lowest t) is decided in exact arithmetic up to ~7e5
// pixels and in long double beyond. The returned threshold is the upper edge
// (t+1)/256 of the winning bin; pixels above it become 0 (white), the rest 1.
inline OtsuResult otsu_binarize(const GrayImage& image) {
    if (auto err = GrayImage::validate(image)) throw std::invalid_argument(*err);
    const auto h = detail::histogram(image);
    const std::uint64_t N = image.pixels.size();
    std::uint64_t S = 0;
    for (int b = 0; b < kHistogramBins; ++b) S += h[b] * static_cast<std::uint64_t>(b);

    const bool exact = N <= 700000;
    int best_t = -1;
    unsigned __int128 best_a = 0;
    unsigned __int128 best_b = 1;
    long double best_f = 0.0L;
    std::uint64_t cnt0 = 0, sum0 = 0;
    for (int t = 0; t < kHistogramBins - 1; ++t) {
        cnt0 += h[t];
        sum0 += h[t] * static_cast<std::uint64_t>(t);
        if (cnt0 == 0 || cnt0 == N) continue;
        const __int128 signed_a =
            static_cast<__int128>(sum0) * N - static_cast<__int128>(S) * cnt0;
        const unsigned __int128 a =
            static_cast<unsigned __int128>(signed_a < 0 ? -signed_a : signed_a);
        const unsigned __int128 b =
            static_cast<unsigned __int128>(cnt0) * (N - cnt0);
        if (exact) {
            // a^2/b > best_a^2/best_b  <=>  a^2*best_b > best_a^2*b
            if (a > 0 && a * a * best_b > best_a * best_a * b) {
                best_t = t;
                best_a = a;
                best_b = b;
            }
        } else {
            const long double f = static_cast<long double>(a) * static_cast<long double>(a) /
                                  static_cast<long double>(b);
            if (f > best_f) {
                best_f = f;
                best_t = t;
            }
        }
    }
    if (best_t < 0)
        throw std::invalid_argument("otsu_binarize: image is constant at bin resolution, no valid split");

    OtsuResult res;
    res.threshold = static_cast<double>(best_t + 1) / kHistogramBins;
    std::vector<std::uint8_t> bits(image.pixels.size());
    for (std::size_t i = 0; i < bits.size(); ++i)
        bits[i] = image.pixels[i] > res.threshold ? 0u : 1u;
    res.image = BinaryImage(image.width, image.height, std::move(bits));
    return res;
}

struct IngestResult {
    BinaryImage tmpl;
    BinaryImage probe;
    double otsu_threshold = 0.0;   // 0 when the probe skipped binarization
    std::optional<std::string> warning;
};

// Template loads as binary; the probe capture is histogram-matched to the
// reference and Otsu-binarized. A probe that is already two-level {0, 1}
// (a simulated PBM) needs no correction and passes through as-is.
inline IngestResult ingest_triple(const std::string& template_path,
                                  const std::string& probe_path,
                                  const PreprocessSpec& spec) {
    IngestResult out;
    out.tmpl = read_pbm(template_path);
    const GrayImage gray = read_gray_any(probe_path);
    if (gray.width != out.tmpl.width || gray.height != out.tmpl.height)
        throw std::runtime_error(
            "ingest_triple: " + template_path + " is " + std::to_string(out.tmpl.width) +
            "x" + std::to_string(out.tmpl.height) + " but " + probe_path + " is " +
            std::to_string(gray.width) + "x" + std::to_string(gray.height));
    bool binary = true;
    for (double v : gray.pixels)
        if (v != 0.0 && v != 1.0) {
            binary = false;
            break;
        }
    if (binary) {
        std::vector<std::uint8_t> bits(gray.pixels.size());
        for (std::size_t i = 0; i < bits.size(); ++i)
            bits[i] = gray.pixels[i] == 0.0 ? 1u : 0u;
        out.probe = BinaryImage(gray.width, gray.height, std::move(bits));
        return out;
    }
    std::string warn;
    const GrayImage matched = histogram_match(gray, spec.reference, &warn);
    if (!warn.empty()) out.warning = warn;
    auto otsu = otsu_binarize(matched);
    out.probe = std::move(otsu.image);
    out.otsu_threshold = otsu.threshold;
    return out;
}

}  // namespace bpc
