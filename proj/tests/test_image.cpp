#include <doctest.h>

#include <filesystem>
#include <string>

#include "camo/image.hpp"
#include "camo/rng.hpp"

using namespace camo;

namespace {

PgmError::Kind kind_of(std::string_view text) {
    try {
        parse_pgm(text);
    } catch (const PgmError& e) {
        return e.kind();
    }
    FAIL("expected PgmError");
    return PgmError::Kind::MalformedHeader;
}

std::string p5(int w, int h, std::size_t payload) {
    std::string s = "P5\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
    s.append(payload, '\x40');
    return s;
}

Image random_image(Rng& rng, int w, int h) {
    Image img(w, h);
    for (auto& p : img.pixels) p = static_cast<std::uint8_t>(rng.next() & 0xff);
    return img;
}

}  // namespace

TEST_CASE("minimal ASCII PGM") {
    auto img = parse_pgm("P2 2 2 255\n0 255 255 0\n");
    CHECK(img.width == 2);
    CHECK(img.height == 2);
    CHECK(img.pixels == std::vector<std::uint8_t>{0, 255, 255, 0});
}

TEST_CASE("comments in the header are skipped") {
    auto img = parse_pgm("P2\n# made by hand\n3 1 # width height\n# max\n9\n1 2 9\n");
    CHECK(img.pixels == std::vector<std::uint8_t>{1, 2, 9});
}

TEST_CASE("binary PGM size arithmetic") {
    auto img = parse_pgm(p5(128, 128, 16384));
    CHECK(img.pixels.size() == 16384);
    CHECK(img.at(127, 127) == 0x40);
}

TEST_CASE("PGM errors") {
    CHECK(kind_of(p5(128, 128, 100)) == PgmError::Kind::Truncated);
    CHECK(kind_of("P2 2 2 255\n0 1 2\n") == PgmError::Kind::Truncated);
    CHECK(kind_of("P2 2 2 65535\n0 1 2 3\n") == PgmError::Kind::MaxvalTooLarge);
    CHECK(kind_of("P6 2 2 255\n") == PgmError::Kind::MalformedHeader);
    CHECK(kind_of("P2 x 2 255\n") == PgmError::Kind::MalformedHeader);
    CHECK(kind_of("P2 0 2 255\n") == PgmError::Kind::MalformedHeader);
    CHECK(kind_of("") == PgmError::Kind::MalformedHeader);
    CHECK(kind_of("P2 2 1 9\n3 10\n") == PgmError::Kind::BadPixel);
    CHECK(kind_of("P2 2 1 9\n3 z\n") == PgmError::Kind::BadPixel);
}

TEST_CASE("PGM round trip on random images, both encodings") {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const int w = 1 + static_cast<int>(rng.next() % 40);
        const int h = 1 + static_cast<int>(rng.next() % 40);
        const Image img = random_image(rng, w, h);
        auto bytes = write_pgm(img);
        CHECK(parse_pgm(bytes) == img);

        std::string ascii = "P2\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
        for (auto p : img.pixels) ascii += std::to_string(p) + (rng.bernoulli(0.1) ? "\n" : " ");
        const Image from_ascii = parse_pgm(ascii);
        CHECK(from_ascii == img);
        CHECK(parse_pgm(write_pgm(from_ascii)) == img);
    }
}

TEST_CASE("field export") {
    GridTopology g(3, 4);
    BinaryField on(g, 1);
    auto bytes = parse_pgm(write_pgm(on));
    CHECK(bytes.width == 4);
    CHECK(bytes.height == 3);
    for (auto p : bytes.pixels) CHECK(p == 255);

    ColorField c(g, 0.0);
    c[0] = 127.5;
    c[1] = 127.49;
    c[2] = -3.0;
    c[3] = 300.0;
    c[4] = 0.5;
    auto img = parse_pgm(write_pgm(c));
    CHECK(img.pixels[0] == 128);
    CHECK(img.pixels[1] == 127);
    CHECK(img.pixels[2] == 0);
    CHECK(img.pixels[3] == 255);
    CHECK(img.pixels[4] == 1);
}

TEST_CASE("block_downsample examples") {
    GridTopology g(8, 8);
    auto flat = block_downsample(Image(128, 128, 200), g);
    for (std::size_t i = 0; i < flat.size(); ++i) CHECK(flat[i] == 200.0);

    Image halves(128, 128, 0);
    for (int y = 64; y < 128; ++y)
        for (int x = 0; x < 128; ++x) halves.at(x, y) = 255;
    auto f = block_downsample(halves, g);
    for (int r = 0; r < 8; ++r)
        for (int col = 0; col < 8; ++col) CHECK(f.at({r, col}) == (r < 4 ? 0.0 : 255.0));

    Image half_block(16, 16, 0);
    for (int i = 0; i < 128; ++i) half_block.pixels[static_cast<std::size_t>(i) * 2] = 255;
    GridTopology one(3, 3);
    Image tile(48, 48, 0);
    for (int y = 0; y < 16; ++y)
        for (int x = 0; x < 16; ++x) tile.at(x, y) = half_block.at(x, y);
    CHECK(block_downsample(tile, one).at({0, 0}) == 127.5);
}

TEST_CASE("block_downsample rejects indivisible images") {
    CHECK_THROWS_AS(block_downsample(Image(100, 128), GridTopology(8, 8)), std::invalid_argument);
    CHECK_THROWS_AS(block_downsample(Image(4, 4), GridTopology(8, 8)), std::invalid_argument);
}

TEST_CASE("block_downsample preserves the mean") {
    Rng rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const int rows = 3 + static_cast<int>(rng.next() % 6);
        const int cols = 3 + static_cast<int>(rng.next() % 6);
        const int bw = 1 + static_cast<int>(rng.next() % 9);
        const int bh = 1 + static_cast<int>(rng.next() % 9);
        const Image img = random_image(rng, cols * bw, rows * bh);
        double image_mean = 0;
        for (auto p : img.pixels) image_mean += p;
        image_mean /= static_cast<double>(img.pixels.size());
        auto f = block_downsample(img, GridTopology(rows, cols));
        double field_mean = 0;
        for (std::size_t i = 0; i < f.size(); ++i) field_mean += f[i];
        field_mean /= static_cast<double>(f.size());
        CHECK(field_mean == doctest::Approx(image_mean).epsilon(1e-12));
        CHECK(std::abs(field_mean - image_mean) < 1e-9);
    }
}

TEST_CASE("binarize threshold and monotonicity") {
    GridTopology g(3, 3);
    ColorField f(g, 0.0);
    f[0] = 126.9;
    f[1] = 127.0;
    f[2] = 255.0;
    auto b = binarize(f);
    CHECK(b[0] == 0);
    CHECK(b[1] == 1);
    CHECK(b[2] == 1);
    for (std::size_t i = 3; i < b.size(); ++i) CHECK(b[i] == 0);

    Rng rng(3);
    for (int trial = 0; trial < 1000; ++trial) {
        ColorField x(g);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.uniform() * 255.0;
        auto before = binarize(x);
        const std::size_t k = rng.next() % x.size();
        x[k] += rng.uniform() * 100.0;
        auto after = binarize(x);
        for (std::size_t i = 0; i < x.size(); ++i) CHECK(after[i] >= before[i]);
    }
}

TEST_CASE("binarize on half black, half white blocks") {
    Image halves(128, 128, 0);
    for (int y = 64; y < 128; ++y)
        for (int x = 0; x < 128; ++x) halves.at(x, y) = 255;
    auto b = binarize(block_downsample(halves, GridTopology(8, 8)));
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c) CHECK(b.at({r, c}) == (r >= 4 ? 1 : 0));
}

TEST_CASE("field_from_image and transpose") {
    Image img(3, 4);
    for (std::size_t i = 0; i < img.pixels.size(); ++i) img.pixels[i] = static_cast<std::uint8_t>(i);
    GridTopology g(4, 3);
    auto f = field_from_image(img, g);
    CHECK(f.at({2, 1}) == 7.0);
    auto t = f.transposed();
    CHECK(t.grid().rows() == 3);
    CHECK(t.at({1, 2}) == 7.0);
    CHECK(t.transposed() == f);
    CHECK_THROWS_AS(field_from_image(img, GridTopology(3, 3)), std::invalid_argument);
}

TEST_CASE("file I/O") {
    const auto dir = std::filesystem::temp_directory_path() / "camo_test_image";
    std::filesystem::create_directories(dir);
    const auto path = (dir / "x.pgm").string();
    Image img(5, 3, 17);
    write_file(path, write_pgm(img));
    CHECK(read_pgm_file(path) == img);
    CHECK_THROWS_AS(read_pgm_file((dir / "absent.pgm").string()), std::runtime_error);
    std::filesystem::remove_all(dir);
}
