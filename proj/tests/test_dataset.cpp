#include <doctest.h>

#include <cmath>
#include <cstddef>

#include "advlab/dataset.hpp"
#include "advlab/errors.hpp"

using namespace advlab;

TEST_CASE("dataset generation is bit-identical per seed") {
    LabeledDataset a = generate_shapes_dataset(4, 3, 16, 42);
    LabeledDataset b = generate_shapes_dataset(4, 3, 16, 42);
    LabeledDataset c = generate_shapes_dataset(4, 3, 16, 43);
    REQUIRE(a.size() == 12);
    REQUIRE(b.size() == 12);
    bool same = true, diff = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        same = same && a.images[i].pixels == b.images[i].pixels;
        diff = diff || a.images[i].pixels != c.images[i].pixels;
    }
    CHECK(same);
    CHECK(diff);
}

TEST_CASE("dataset layout is class-major with the bundled names") {
    LabeledDataset data = generate_shapes_dataset(10, 2, 16, 7);
    CHECK(data.size() == 20);
    CHECK(data.seed == 7);
    CHECK(data.class_names == glyph_class_names());
    for (std::size_t i = 0; i < data.size(); ++i) {
        CHECK(data.labels[i] == i / 2);
        CHECK(data.images[i].height == 16);
        CHECK(data.images[i].width == 16);
        for (double p : data.images[i].pixels) {
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
        }
    }
}

TEST_CASE("glyph families are visually distinct in the noise-free limit") {
    // Same seed, different classes: the painted masks must differ pairwise
    // (otherwise two classes would be indistinguishable by construction).
    LabeledDataset data = generate_shapes_dataset(10, 1, 16, 99);
    for (std::size_t a = 0; a < 10; ++a) {
        for (std::size_t b = a + 1; b < 10; ++b) {
            std::size_t differing = 0;
            for (std::size_t p = 0; p < 256; ++p) {
                if (std::fabs(data.images[a].pixels[p] - data.images[b].pixels[p]) > 0.25) {
                    ++differing;
                }
            }
            CHECK(differing > 4);
        }
    }
}

TEST_CASE("dataset argument validation") {
    CHECK(generate_shapes_dataset(3, 0, 16, 1).size() == 0);
    CHECK_THROWS_AS(generate_shapes_dataset(11, 1, 16, 1), value_error);
    CHECK_THROWS_AS(generate_shapes_dataset(0, 1, 16, 1), value_error);
    CHECK_THROWS_AS(generate_shapes_dataset(3, 1, 7, 1), value_error);
}
