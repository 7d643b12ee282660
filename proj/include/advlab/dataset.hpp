#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "advlab/image.hpp"

namespace advlab {

/// Seeded synthetic classification data. Regeneration from the same seed is
/// bit-identical.
struct LabeledDataset {
    std::vector<Image> images;
    std::vector<std::size_t> labels;
    std::vector<std::string> class_names;
    std::uint64_t seed = 0;

    std::size_t size() const { return images.size(); }
};

/// The ten glyph families, in class order.
const std::vector<std::string>& glyph_class_names();

/// Grayscale glyphs (one family per class) with seeded jitter in position
/// and scale, additive N(0, 0.05) pixel noise, clipped to [0,1]. Samples are
/// generated class-major from the "dataset" substream of `seed`.
LabeledDataset generate_shapes_dataset(std::size_t num_classes, std::size_t per_class,
                                       std::size_t size, std::uint64_t seed);

}  // namespace advlab
