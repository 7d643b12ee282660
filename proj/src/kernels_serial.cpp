#include "advlab/reference.hpp"

#include <cstddef>

#include "advlab/errors.hpp"

namespace advlab::reference {

Tensor matmul_ref(const Tensor& a, const Tensor& b) {
    if (a.rank() != 2 || b.rank() != 2 || a.shape[1] != b.shape[0]) {
        throw dimension_error("matmul_ref shape mismatch: " + a.shape_str() + " x " + b.shape_str());
    }
    const std::size_t m = a.shape[0], k = a.shape[1], n = b.shape[1];
    Tensor c({m, n});
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t t = 0; t < k; ++t) acc += a.data[i * k + t] * b.data[t * n + j];
            c.data[i * n + j] = acc;
        }
    }
    return c;
}

Tensor conv2d_ref(const Tensor& input, const Tensor& kernel, int stride, int pad) {
    if (input.rank() != 3 || kernel.rank() != 4 || kernel.shape[1] != input.shape[0]) {
        throw dimension_error("conv2d_ref shape mismatch: " + input.shape_str() + " with " + kernel.shape_str());
    }
    const std::ptrdiff_t cin = static_cast<std::ptrdiff_t>(input.shape[0]);
    const std::ptrdiff_t h = static_cast<std::ptrdiff_t>(input.shape[1]);
    const std::ptrdiff_t w = static_cast<std::ptrdiff_t>(input.shape[2]);
    const std::ptrdiff_t cout = static_cast<std::ptrdiff_t>(kernel.shape[0]);
    const std::ptrdiff_t kh = static_cast<std::ptrdiff_t>(kernel.shape[2]);
    const std::ptrdiff_t kw = static_cast<std::ptrdiff_t>(kernel.shape[3]);
    const std::ptrdiff_t ho = (h + 2 * pad - kh) / stride + 1;
    const std::ptrdiff_t wo = (w + 2 * pad - kw) / stride + 1;
    if (ho < 1 || wo < 1) {
        throw dimension_error("conv2d_ref kernel does not fit input " + input.shape_str());
    }
    Tensor out({static_cast<std::size_t>(cout), static_cast<std::size_t>(ho), static_cast<std::size_t>(wo)});
    for (std::ptrdiff_t co = 0; co < cout; ++co) {
        for (std::ptrdiff_t oy = 0; oy < ho; ++oy) {
            for (std::ptrdiff_t ox = 0; ox < wo; ++ox) {
                double acc = 0.0;
                for (std::ptrdiff_t ci = 0; ci < cin; ++ci) {
                    for (std::ptrdiff_t ky = 0; ky < kh; ++ky) {
                        for (std::ptrdiff_t kx = 0; kx < kw; ++kx) {
                            const std::ptrdiff_t iy = oy * stride - pad + ky;
                            const std::ptrdiff_t ix = ox * stride - pad + kx;
                            if (iy < 0 || iy >= h || ix < 0 || ix >= w) continue;
                            acc += input.data[(ci * h + iy) * w + ix] *
                                   kernel.data[((co * cin + ci) * kh + ky) * kw + kx];
                        }
                    }
                }
                out.data[(co * ho + oy) * wo + ox] = acc;
            }
        }
    }
    return out;
}

}  // namespace advlab::reference
