#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "advlab/image.hpp"

namespace advlab {

enum class TransformKind { crop, magnify, rotate, brightness };

std::string to_string(TransformKind kind);
TransformKind transform_kind_from_string(std::string_view name);

/// A sweep axis: which transform, and the ordered magnitudes to walk. The
/// grid starts at the identity magnitude and is strictly increasing in
/// |magnitude| so "first failure" is well defined.
struct TransformSpec {
    TransformKind kind = TransformKind::crop;
    std::vector<double> grid;
};

/// k=0 / factor 1 / 0 degrees / factor 1.
double identity_magnitude(TransformKind kind);

/// The grids the bundled experiments sweep.
std::vector<double> default_grid(TransformKind kind);

/// Grid invariants plus per-kind magnitude validity. Throws validation_error.
void validate(const TransformSpec& spec);

/// Remove whole rows/columns from the stated sides. No interpolation: every
/// output pixel equals an input pixel.
Image crop(const Image& img, int top, int bottom, int left, int right);

/// Remove k single lines cycling bottom, right, top, left (k=1 drops just the
/// bottom row; k=2 the bottom row and right column; ...).
Image crop_by(const Image& img, int k);

/// Zoom into the real-valued center window of side (dim-1)/factor and
/// resample back to the original dims. factor=1 returns a bit-exact copy.
Image magnify(const Image& img, double factor);

/// Rotate about the exact center ((H-1)/2, (W-1)/2); positive degrees turn
/// clockwise. Inverse-mapped bilinear with edge replication; 0 degrees is a
/// bit-exact copy and multiples of 90 on square images are exact pixel
/// permutations.
Image rotate(const Image& img, double degrees);

/// Per pixel min(1, factor * p). "+50% exposure" is factor 1.5.
Image brightness(const Image& img, double factor);

/// Endpoint-aligned bilinear resample onto an h x w lattice. Same dims is a
/// bit-exact copy; a target dim of 1 samples the source center line.
Image resize_to(const Image& img, std::size_t h, std::size_t w);

struct Dims {
    std::size_t height = 0;
    std::size_t width = 0;
};

/// Dispatch one magnitude of one kind. Crop magnitudes must be integral;
/// when resize_hint is given, cropped images are resized back to those dims
/// so they can re-enter a fixed-input model.
Image apply(TransformKind kind, double magnitude, const Image& img,
            std::optional<Dims> resize_hint = std::nullopt);

}  // namespace advlab
