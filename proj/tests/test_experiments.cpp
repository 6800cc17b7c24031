#include <doctest.h>

#include <cmath>
#include <sstream>

#include "camo/experiments.hpp"
#include "camo/rng.hpp"
#include "camo/synthetic.hpp"

using namespace camo;
using namespace camo::experiments;

namespace {

BinaryField random_field(Rng& rng, GridTopology g) {
    BinaryField f(g);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = rng.bernoulli(0.5) ? 1 : 0;
    return f;
}

BinaryField stripes_h(GridTopology g) {
    BinaryField f(g);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = g.cell(i).row % 2 == 0;
    return f;
}

}  // namespace

TEST_CASE("pixel_difference examples") {
    GridTopology g(8, 8);
    Rng rng(1);
    auto a = random_field(rng, g);
    CHECK(pixel_difference(a, a) == 0);
    auto comp = a;
    for (std::size_t i = 0; i < comp.size(); ++i) comp[i] ^= 1;
    CHECK(pixel_difference(a, comp) == 64);
    CHECK_THROWS_AS(pixel_difference(a, BinaryField(GridTopology(8, 9))), std::invalid_argument);
}

TEST_CASE("pixel_difference is a metric") {
    GridTopology g(8, 8);
    Rng rng(2);
    for (int trial = 0; trial < 2000; ++trial) {
        auto a = random_field(rng, g), b = random_field(rng, g), c = random_field(rng, g);
        if (trial % 5 == 0) b = a;
        CHECK(pixel_difference(a, b) == pixel_difference(b, a));
        CHECK((pixel_difference(a, b) == 0) == (a == b));
        CHECK(pixel_difference(a, c) <= pixel_difference(a, b) + pixel_difference(b, c));
    }
}

TEST_CASE("random baseline is 32 cells") {
    GridTopology g(8, 8);
    Rng rng(3);
    const auto fixed = stripes_h(g);
    double sum = 0.0;
    for (int trial = 0; trial < 10000; ++trial) sum += pixel_difference(random_field(rng, g), fixed);
    CHECK(std::abs(sum / 10000.0 - 32.0) < 0.5);
}

TEST_CASE("orientation scores") {
    GridTopology g(8, 8);
    auto s = orientation_score(stripes_h(g));
    CHECK(s.horizontal == 1.0);
    CHECK(s.vertical == 0.0);
    auto t = orientation_score(stripes_h(g).transposed());
    CHECK(t.horizontal == 0.0);
    CHECK(t.vertical == 1.0);
    for (std::uint8_t v : {0, 1}) {
        auto u = orientation_score(BinaryField(g, v));
        CHECK(u.horizontal == 0.0);
        CHECK(u.vertical == 0.0);
    }

    Rng rng(4);
    for (int trial = 0; trial < 500; ++trial) {
        GridTopology r(3 + static_cast<int>(rng.next() % 8), 3 + static_cast<int>(rng.next() % 8));
        auto f = random_field(rng, r);
        auto a = orientation_score(f);
        auto b = orientation_score(f.transposed());
        CHECK(a.horizontal == b.vertical);
        CHECK(a.vertical == b.horizontal);
    }

    std::vector<bool> mask(64, false);
    mask[0] = true;
    auto one = orientation_score(stripes_h(g), mask);
    CHECK(one.horizontal == 1.0);
    auto none = orientation_score(stripes_h(g), std::vector<bool>(64, false));
    CHECK(none.horizontal == 0.0);
    CHECK_THROWS_AS(orientation_score(stripes_h(g), std::vector<bool>(3, true)), std::invalid_argument);
}

TEST_CASE("noise mode names") {
    CHECK(to_string(NoiseMode::MeasOnly) == "meas-only");
    CHECK(parse_noise_mode("comm-only") == NoiseMode::CommOnly);
    CHECK(parse_noise_mode("both") == NoiseMode::Both);
    CHECK_FALSE(parse_noise_mode("everything").has_value());
}

TEST_CASE("default rho grid") {
    auto rhos = default_rho_grid();
    REQUIRE(rhos.size() == 11);
    CHECK(rhos.front() == 0.0);
    CHECK(rhos.back() == doctest::Approx(0.5));
}

TEST_CASE("error_sweep") {
    const auto img = *synth::named("stripes_v_wide");
    GridTopology g(8, 8);
    swarm::SimConfig base;
    base.noise.seed = 11;
    const std::vector<double> rhos{0.0, 0.2, 1.0};
    const std::vector<NoiseMode> modes{NoiseMode::MeasOnly, NoiseMode::CommOnly, NoiseMode::Both};
    auto rows = error_sweep(img, g, rhos, modes, 4, base, 1);
    REQUIRE(rows.size() == 9);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        CHECK(rows[k].mode == modes[k / 3]);
        CHECK(rows[k].rho == rhos[k % 3]);
        CHECK(rows[k].trials == 4);
        if (rows[k].rho == 0.0) {
            CHECK(rows[k].mean_diff == 0.0);
            CHECK(rows[k].stddev_diff == 0.0);
        }
    }
    // rho = 1 on both channels is far from the clean result.
    CHECK(rows[8].mean_diff >= rows[6].mean_diff + 20);

    auto threaded = error_sweep(img, g, rhos, modes, 4, base, 4);
    CHECK(sweep_to_csv(threaded) == sweep_to_csv(rows));

    CHECK_THROWS_AS(error_sweep(img, g, rhos, modes, 0, base), std::invalid_argument);
    const std::vector<double> bad{1.5};
    CHECK_THROWS_AS(error_sweep(img, g, bad, modes, 1, base), std::invalid_argument);
}

TEST_CASE("sweep trial seeds are independent of the rest of the sweep") {
    const auto img = *synth::named("stripes_v_wide");
    GridTopology g(8, 8);
    swarm::SimConfig base;
    const std::vector<double> one{0.3};
    const std::vector<double> two{0.3, 0.4};
    const std::vector<NoiseMode> both{NoiseMode::Both};
    auto a = error_sweep(img, g, one, both, 3, base);
    auto b = error_sweep(img, g, two, both, 3, base);
    CHECK(a[0].mean_diff == b[0].mean_diff);
}

TEST_CASE("sweep CSV") {
    std::vector<SweepRow> rows{{NoiseMode::Both, 0.15, 10, 3.5, 1.25}, {NoiseMode::MeasOnly, 0.0, 10, 0.0, 0.0}};
    std::istringstream in(sweep_to_csv(rows));
    std::string line;
    std::getline(in, line);
    CHECK(line == "mode,rho,trials,mean_diff,stddev_diff");
    std::getline(in, line);
    CHECK(line == "both,0.15,10,3.5,1.25");
    std::getline(in, line);
    CHECK(line == "meas-only,0,10,0,0");
}
