#include <doctest.h>

#include "camo/descriptor.hpp"
#include "camo/rng.hpp"
#include "oracles.hpp"

using namespace camo;

namespace {

const PatternProbs kH{1, 0, 0};
const PatternProbs kV{0, 1, 0};
const PatternProbs kM{0, 0, 1};

// Block means of a 16x16 block are multiples of 1/256, so every sum below
// stays exact in double precision.
ColorField random_field(Rng& rng, GridTopology g) {
    ColorField f(g);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = static_cast<double>(rng.next() % (255 * 256 + 1)) / 256.0;
    return f;
}

std::vector<double> as_vector(const ColorField& f) { return {f.values().begin(), f.values().end()}; }

}  // namespace

TEST_CASE("pattern class names") {
    CHECK(to_string(PatternClass::Horizontal) == "Horizontal");
    CHECK(parse_pattern_class("Vertical") == PatternClass::Vertical);
    CHECK(parse_pattern_class("mottled") == PatternClass::Mottled);
    CHECK_FALSE(parse_pattern_class("Diagonal").has_value());
}

TEST_CASE("second derivative examples") {
    CHECK(second_derivatives({100, 100, 100, 100, 100}) == DescriptorResult{0, 0});
    // self, top, right, bottom, left
    CHECK(second_derivatives({255, 0, 255, 0, 255}) == DescriptorResult{0, -510});
    CHECK(second_derivatives({0, 0, 255, 0, 255}) == DescriptorResult{510, 0});
}

TEST_CASE("classification examples") {
    CHECK(classify_local({0, -510}, 64) == kH);
    CHECK(classify_local({510, 0}, 64) == kV);
    CHECK(classify_local({0, 0}, 0) == kM);
    CHECK(classify_local({0, 0}, 64) == kM);
    CHECK(classify_local({100, 90}, 20) == kM);
    // The inequalities are strict.
    CHECK(classify_local({0, 64}, 64) == kM);
    CHECK(classify_local({0, 64.5}, 64) == kH);
}

TEST_CASE("constant field is mottled everywhere") {
    GridTopology g(8, 8);
    auto p = local_patterns(ColorField(g, 77.0));
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(p[i] == kM);
}

TEST_CASE("half black, half white field") {
    GridTopology g(8, 8);
    ColorField f(g, 0.0);
    for (int r = 4; r < 8; ++r)
        for (int c = 0; c < 8; ++c) f.at({r, c}) = 255.0;
    auto p = local_patterns(f);
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c) CHECK(p.at({r, c}) == ((r == 3 || r == 4) ? kH : kM));

    auto t = local_patterns(f.transposed());
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c) CHECK(t.at({r, c}) == ((c == 3 || c == 4) ? kV : kM));
}

TEST_CASE("boundary reflection at corners") {
    GridTopology g(3, 3);
    ColorField f(g, 0.0);
    f.at({0, 1}) = 200.0;
    const auto n = gather_neighbor_colors(f, {0, 0});
    CHECK(n.top == 0.0);  // reflected to (1,0)
    CHECK(n.left == 200.0);  // reflected to (0,1)
    CHECK(n.right == 200.0);
    CHECK(second_derivatives(n) == DescriptorResult{400.0, 0.0});
}

TEST_CASE("local_patterns matches the direct formula on random fields") {
    Rng rng(2024);
    for (int trial = 0; trial < 1000; ++trial) {
        const int rows = 3 + static_cast<int>(rng.next() % 8);
        const int cols = 3 + static_cast<int>(rng.next() % 8);
        GridTopology g(rows, cols);
        auto f = random_field(rng, g);
        const double t = static_cast<double>(rng.next() % 128);
        auto p = local_patterns(f, t);
        auto v = as_vector(f);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) {
                const int want = oracle::classify(v, rows, cols, r, c, t);
                CHECK(p.at({r, c}) == (want == 0 ? kH : want == 1 ? kV : kM));
            }
    }
}

TEST_CASE("transpose symmetry, offset invariance, one-hot output") {
    Rng rng(99);
    for (int trial = 0; trial < 1000; ++trial) {
        GridTopology g(8, 8);
        auto f = random_field(rng, g);
        auto p = local_patterns(f);

        auto pt = local_patterns(f.transposed());
        for (int r = 0; r < 8; ++r)
            for (int c = 0; c < 8; ++c) {
                const auto a = p.at({r, c});
                const auto b = pt.at({c, r});
                CHECK(a.h == b.v);
                CHECK(a.v == b.h);
                CHECK(a.m == b.m);
            }

        const double shift = static_cast<double>(rng.next() % 512) - 256.0;
        ColorField shifted = f;
        for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] += shift;
        CHECK(local_patterns(shifted) == p);
        for (std::size_t i = 0; i < f.size(); ++i) {
            const Cell cell = g.cell(i);
            CHECK(second_derivatives(gather_neighbor_colors(shifted, cell)) ==
                  second_derivatives(gather_neighbor_colors(f, cell)));
            const auto& q = p[i];
            CHECK(q.h + q.v + q.m == 1.0);
            CHECK(((q.h == 1.0) + (q.v == 1.0) + (q.m == 1.0)) == 1);
        }
    }
}
