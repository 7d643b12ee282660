#include "advlab/dataset.hpp"

#include <cmath>
#include <sstream>

#include "advlab/errors.hpp"
#include "advlab/rng.hpp"

namespace advlab {

const std::vector<std::string>& glyph_class_names() {
    static const std::vector<std::string> names = {
        "square", "circle", "cross", "triangle", "ring",
        "hbars", "vbars", "diamond", "xcross", "frame",
    };
    return names;
}

namespace {

bool inside_glyph(std::size_t cls, double dy, double dx, double r) {
    const double ay = std::fabs(dy), ax = std::fabs(dx);
    switch (cls) {
        case 0: return std::max(ay, ax) <= r;                          // square
        case 1: return dy * dy + dx * dx <= r * r;                     // circle
        case 2: return (ay <= r / 3.0 && ax <= r) || (ax <= r / 3.0 && ay <= r);  // cross
        case 3: return dy >= -r && dy <= r && ax <= (dy + r) / 2.0;    // triangle
        case 4: {                                                      // ring
            const double d2 = dy * dy + dx * dx;
            return d2 <= r * r && d2 >= (r / 2.0) * (r / 2.0);
        }
        case 5:                                                        // hbars
            return std::max(ay, ax) <= r &&
                   static_cast<int>(std::floor((dy + r) / (r / 1.5))) % 2 == 0;
        case 6:                                                        // vbars
            return std::max(ay, ax) <= r &&
                   static_cast<int>(std::floor((dx + r) / (r / 1.5))) % 2 == 0;
        case 7: return ay + ax <= r;                                   // diamond
        case 8: return std::fabs(ay - ax) <= r / 3.0 && std::max(ay, ax) <= r;  // xcross
        case 9: return std::max(ay, ax) <= r && std::max(ay, ax) >= r / 2.0;    // frame
        default: return false;
    }
}

}  // namespace

LabeledDataset generate_shapes_dataset(std::size_t num_classes, std::size_t per_class,
                                       std::size_t size, std::uint64_t seed) {
    if (num_classes > glyph_class_names().size()) {
        std::ostringstream os;
        os << "at most " << glyph_class_names().size() << " classes available, asked for "
           << num_classes;
        throw value_error(os.str());
    }
    if (num_classes == 0) throw value_error("num_classes must be >= 1");
    if (size < 8) throw value_error("image side must be >= 8");

    LabeledDataset data;
    data.seed = seed;
    data.class_names.assign(glyph_class_names().begin(),
                            glyph_class_names().begin() + static_cast<std::ptrdiff_t>(num_classes));

    Rng rng = subrng(seed, "dataset");
    const double side = static_cast<double>(size);
    const double center = (side - 1.0) / 2.0;

    for (std::size_t cls = 0; cls < num_classes; ++cls) {
        for (std::size_t sample = 0; sample < per_class; ++sample) {
            // Fixed draw order per sample keeps the stream aligned across
            // glyph families: jitter y, jitter x, radius, fg, bg, then noise.
            const double cy = center + rng.uniform(-0.08 * side, 0.08 * side);
            const double cx = center + rng.uniform(-0.08 * side, 0.08 * side);
            const double r = side * rng.uniform(0.26, 0.36);
            const double fg = rng.uniform(0.7, 1.0);
            const double bg = rng.uniform(0.0, 0.12);

            Image img(size, size, 0.0);
            for (std::size_t row = 0; row < size; ++row) {
                for (std::size_t col = 0; col < size; ++col) {
                    const double dy = static_cast<double>(row) - cy;
                    const double dx = static_cast<double>(col) - cx;
                    const double base = inside_glyph(cls, dy, dx, r) ? fg : bg;
                    img.at(row, col) = clip01(base + rng.normal(0.0, 0.05));
                }
            }
            data.images.push_back(std::move(img));
            data.labels.push_back(cls);
        }
    }
    return data;
}

}  // namespace advlab
