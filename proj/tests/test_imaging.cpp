#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "bpc/imaging.hpp"
#include "bpc/rng.hpp"
#include "oracle.hpp"
#include "test_util.hpp"

using bpc::BinaryImage;
using bpc::GrayImage;

namespace {

GrayImage random_gray(int w, int h, std::uint64_t seed) {
    bpc::Philox4x32 g(seed, 0);
    std::vector<double> px(static_cast<std::size_t>(w) * h);
    for (auto& v : px) v = g.next_double();
    return GrayImage(w, h, std::move(px));
}

std::array<std::uint64_t, 256> histogram_of(const GrayImage& im) {
    std::array<std::uint64_t, 256> h{};
    for (double v : im.pixels) {
        int b = static_cast<int>(v * 256);
        if (b > 255) b = 255;
        ++h[b];
    }
    return h;
}

}  // namespace

TEST_CASE("matching an image to itself reproduces it on the 255-level grid") {
    std::vector<double> px;
    for (int i = 0; i < 64; ++i) px.push_back((i * 4 % 256) / 255.0);
    const GrayImage im(8, 8, px);
    const GrayImage out = bpc::histogram_match(im, im);
    REQUIRE(out.pixels.size() == im.pixels.size());
    for (std::size_t i = 0; i < out.pixels.size(); ++i)
        CHECK(std::abs(out.pixels[i] - im.pixels[i]) <= 1.0 / 255.0 + 1e-12);
}

TEST_CASE("matching a shifted image recovers the reference bins exactly") {
    // The probe is the reference shifted up by 0.2: same bin ordering, same
    // counts, so the inverse-CDF map lands every pixel back on its source bin.
    std::vector<double> ref_px, probe_px;
    const double levels[3] = {0.1, 0.3, 0.6};
    for (int i = 0; i < 90; ++i) {
        const double v = levels[i % 3];
        ref_px.push_back(v);
        probe_px.push_back(v + 0.2);
    }
    const GrayImage ref(9, 10, ref_px), probe(9, 10, probe_px);
    const GrayImage out = bpc::histogram_match(probe, ref);
    CHECK(histogram_of(out) == histogram_of(ref));
    for (std::size_t i = 0; i < out.pixels.size(); ++i) {
        const int want = static_cast<int>(ref.pixels[i] * 256);
        CHECK(out.pixels[i] == Catch::Approx(want / 255.0).margin(1e-12));
    }
}

TEST_CASE("two-level probes map onto the reference extremes") {
    std::vector<double> probe_px, ref_px;
    for (int i = 0; i < 50; ++i) {
        probe_px.push_back(i % 2 ? 0.2 : 0.8);
        ref_px.push_back(i % 2 ? 0.0 : 1.0);
    }
    const GrayImage out =
        bpc::histogram_match(GrayImage(10, 5, probe_px), GrayImage(10, 5, ref_px));
    for (std::size_t i = 0; i < out.pixels.size(); ++i)
        CHECK(out.pixels[i] == (i % 2 ? 0.0 : 1.0));
}

TEST_CASE("histogram matching is idempotent at bin resolution") {
    const GrayImage probe = random_gray(16, 16, 11);
    const GrayImage ref = random_gray(16, 16, 12);
    const GrayImage once = bpc::histogram_match(probe, ref);
    const GrayImage twice = bpc::histogram_match(once, ref);
    CHECK(histogram_of(once) == histogram_of(twice));
    CHECK(once.pixels == twice.pixels);
}

TEST_CASE("constant probes come back unchanged with a warning") {
    const GrayImage flat(4, 4, std::vector<double>(16, 0.37));
    std::string warning;
    const GrayImage out = bpc::histogram_match(flat, random_gray(4, 4, 13), &warning);
    CHECK(out.pixels == flat.pixels);
    CHECK_FALSE(warning.empty());
}

TEST_CASE("otsu threshold equals the exact brute-force argmax on random images") {
    for (int trial = 0; trial < 50; ++trial) {
        const GrayImage im = random_gray(8, 8, 1000 + trial);
        const auto res = bpc::otsu_binarize(im);
        const int best = oracle::otsu_best_bin(histogram_of(im));
        REQUIRE(best >= 0);
        CHECK(res.threshold == static_cast<double>(best + 1) / 256.0);
    }
}

TEST_CASE("otsu splits bimodal images at the gap regardless of proportions") {
    std::vector<double> half;
    for (int i = 0; i < 100; ++i) half.push_back(i < 50 ? 0.1 : 0.9);
    const auto even = bpc::otsu_binarize(GrayImage(10, 10, half));
    CHECK(even.threshold > 0.1);
    CHECK(even.threshold < 0.9);
    for (std::size_t i = 0; i < half.size(); ++i)
        CHECK(even.image.bits[i] == (half[i] < 0.5 ? 1 : 0));  // dark pixels become 1

    std::vector<double> skewed;
    for (int i = 0; i < 100; ++i) skewed.push_back(i < 90 ? 0.1 : 0.9);
    const auto res = bpc::otsu_binarize(GrayImage(10, 10, skewed));
    CHECK(res.threshold > 0.1);
    CHECK(res.threshold < 0.9);
    int dark = 0;
    for (auto b : res.image.bits) dark += b;
    CHECK(dark == 90);
}

TEST_CASE("otsu rejects images that are constant at bin resolution") {
    CHECK_THROWS_AS(bpc::otsu_binarize(GrayImage(3, 3, std::vector<double>(9, 0.5))),
                    std::invalid_argument);
}

TEST_CASE("otsu and the oracle agree on the large-image fallback path") {
    // Above the exact-arithmetic pixel bound the argmax runs in long double.
    const GrayImage im = random_gray(900, 900, 77);
    const auto res = bpc::otsu_binarize(im);
    const int best = oracle::otsu_best_bin(histogram_of(im));
    CHECK(res.threshold == static_cast<double>(best + 1) / 256.0);
}

TEST_CASE("ingest passes simulated binary probes through untouched") {
    testutil::TempDir tmp;
    bpc::Philox4x32 g(5, 1);
    std::vector<std::uint8_t> tbits(64), pbits(64);
    for (auto& b : tbits) b = static_cast<std::uint8_t>(g.next_u32() & 1u);
    for (auto& b : pbits) b = static_cast<std::uint8_t>(g.next_u32() & 1u);
    const BinaryImage tmpl(8, 8, tbits), probe(8, 8, pbits);
    bpc::write_pbm(tmpl, tmp.file("t.pbm"));
    bpc::write_pbm(probe, tmp.file("p.pbm"));

    bpc::PreprocessSpec spec{bpc::to_gray(tmpl)};
    const auto res = bpc::ingest_triple(tmp.file("t.pbm"), tmp.file("p.pbm"), spec);
    CHECK(res.tmpl == tmpl);
    CHECK(res.probe == probe);
    CHECK(res.otsu_threshold == 0.0);
    CHECK_FALSE(res.warning.has_value());
}

TEST_CASE("ingest binarizes gray captures against the reference") {
    testutil::TempDir tmp;
    const BinaryImage tmpl(8, 8, std::vector<std::uint8_t>(64, 0));
    bpc::write_pbm(tmpl, tmp.file("t.pbm"));

    // Ink pixels photograph dark (0.2), background light (0.8).
    std::vector<double> captured(64, 0.8);
    for (int i = 0; i < 24; ++i) captured[i] = 0.2;
    bpc::write_pgm(GrayImage(8, 8, captured), tmp.file("p.pgm"));

    std::vector<double> ref_px(64, 1.0);
    for (int i = 0; i < 24; ++i) ref_px[i] = 0.0;
    bpc::PreprocessSpec spec{GrayImage(8, 8, ref_px)};

    const auto res = bpc::ingest_triple(tmp.file("t.pbm"), tmp.file("p.pgm"), spec);
    CHECK(res.otsu_threshold > 0.0);
    int dark = 0;
    for (auto b : res.probe.bits) dark += b;
    CHECK(dark == 24);
    for (int i = 0; i < 24; ++i) CHECK(res.probe.bits[i] == 1);
}

TEST_CASE("ingest names both sizes on a dimension mismatch and both paths") {
    testutil::TempDir tmp;
    bpc::write_pbm(BinaryImage(4, 4, std::vector<std::uint8_t>(16, 0)), tmp.file("t.pbm"));
    bpc::write_pbm(BinaryImage(5, 4, std::vector<std::uint8_t>(20, 0)), tmp.file("p.pbm"));
    bpc::PreprocessSpec spec{GrayImage(4, 4, std::vector<double>(16, 0.5))};
    CHECK_THROWS_WITH(bpc::ingest_triple(tmp.file("t.pbm"), tmp.file("p.pbm"), spec),
                      Catch::Matchers::ContainsSubstring("4x4") &&
                          Catch::Matchers::ContainsSubstring("5x4"));

    CHECK_THROWS_WITH(bpc::ingest_triple(tmp.file("missing.pbm"), tmp.file("p.pbm"), spec),
                      Catch::Matchers::ContainsSubstring("missing.pbm"));
}
