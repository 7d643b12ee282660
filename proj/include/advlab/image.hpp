#pragma once

#include <cstddef>
#include <vector>

#include "advlab/tensor.hpp"

namespace advlab {

/// Channel-major ([C][H][W]) image, values in [0,1] by convention (ops that
/// can leave the range clip explicitly). C is 1 or 3; the bundled datasets
/// and models are all single-channel, so the two-argument accessors read and
/// write channel 0.
struct Image {
    std::size_t channels = 1;
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<double> pixels;

    Image() = default;
    Image(std::size_t h, std::size_t w, double fill = 0.0);
    Image(std::size_t h, std::size_t w, std::vector<double> values);
    Image(std::size_t c, std::size_t h, std::size_t w, double fill);
    Image(std::size_t c, std::size_t h, std::size_t w, std::vector<double> values);

    double& at(std::size_t c, std::size_t r, std::size_t col) {
        return pixels[(c * height + r) * width + col];
    }
    double at(std::size_t c, std::size_t r, std::size_t col) const {
        return pixels[(c * height + r) * width + col];
    }
    double& at(std::size_t r, std::size_t c) { return pixels[r * width + c]; }
    double at(std::size_t r, std::size_t c) const { return pixels[r * width + c]; }
};

/// Bilinear read of one channel at real-valued (row, col) with edge
/// replication: coordinates are clamped to [0, H-1] x [0, W-1] before
/// interpolation.
double bilinear_sample(const Image& img, double row, double col, std::size_t channel = 0);

/// Image <-> [C,H,W] tensor.
Tensor to_tensor(const Image& img);
Image from_tensor(const Tensor& t);

double clip01(double v);
void clip01_inplace(Image& img);
void clip01_inplace(Tensor& t);

}  // namespace advlab
