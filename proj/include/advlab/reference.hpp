#pragma once

#include "advlab/tensor.hpp"

// Naive serial implementations kept deliberately independent of the kernels
// in kernels.hpp. Tests pin the fast path against these, and the benchmark
// tool uses them as the baseline. Double precision only.

namespace advlab::reference {

Tensor matmul_ref(const Tensor& a, const Tensor& b);
Tensor conv2d_ref(const Tensor& input, const Tensor& kernel, int stride, int pad);

}  // namespace advlab::reference
