#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace advlab {

/// Numeric mode for the heavy kernels. float64 is the reference mode and is
/// required for gradient checks; float32 trades accuracy for speed by
/// accumulating in single precision (storage stays double either way).
enum class Precision { float64, float32 };

Precision precision();
void set_precision(Precision p);

/// Dense row-major array of doubles.
struct Tensor {
    std::vector<std::size_t> shape;
    std::vector<double> data;

    Tensor() = default;
    explicit Tensor(std::vector<std::size_t> extents, double fill = 0.0);
    Tensor(std::vector<std::size_t> extents, std::vector<double> values);

    std::size_t numel() const;
    std::size_t rank() const { return shape.size(); }

    double& at2(std::size_t i, std::size_t j) { return data[i * shape[1] + j]; }
    double at2(std::size_t i, std::size_t j) const { return data[i * shape[1] + j]; }

    bool same_shape(const Tensor& other) const { return shape == other.shape; }
    bool all_finite() const;
    std::string shape_str() const;
};

inline constexpr double kCrossEntropyFloor = 1e-12;

/// [m,k] x [k,n] -> [m,n]. Throws dimension_error naming both shapes on
/// mismatch.
Tensor matmul(const Tensor& a, const Tensor& b);

/// Cross-correlation (no kernel flip) of input [C_in,H,W] with kernel
/// [C_out,C_in,kH,kW], zero padding. Output [C_out,H',W'] with
/// H' = floor((H + 2 pad - kH)/stride) + 1.
Tensor conv2d(const Tensor& input, const Tensor& kernel, int stride, int pad);

Tensor relu(const Tensor& t);

/// Stable softmax over a rank-1 tensor: max-subtracted, sums to one,
/// argmax-preserving.
Tensor softmax(const Tensor& logits);

/// -log(max(probs[label], 1e-12)). probs must be rank-1.
double cross_entropy(const Tensor& probs, std::size_t label);

/// Top-k (index, value) pairs in descending value order; ties broken by the
/// lower index.
std::vector<std::pair<std::size_t, double>> argmax_topk(const Tensor& t, std::size_t k);

}  // namespace advlab
