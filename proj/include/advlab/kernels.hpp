#pragma once

#include <cstddef>

#include "advlab/threading.hpp"

// Hot loops, templated on the accumulator type (double in float64 mode, float
// in float32 mode). Storage is double on both sides; only the accumulation
// and intermediate products are done in T.
//
// Every parallel loop assigns whole output elements to threads and each
// element is accumulated in a fixed serial order, so results are bit-identical
// for any --jobs value. The `if` clause keeps tiny problems serial.

namespace advlab::kernels {

inline constexpr std::size_t kParallelThreshold = 1u << 14;

/// c[m,n] = a[m,k] * b[k,n]
template <typename T>
void matmul(const double* a, const double* b, double* c,
            std::size_t m, std::size_t k, std::size_t n) {
    const std::ptrdiff_t mm = static_cast<std::ptrdiff_t>(m);
    const bool big = m * k * n > kParallelThreshold;
#pragma omp parallel for num_threads(max_jobs()) if (max_jobs() > 1 && big)
    for (std::ptrdiff_t i = 0; i < mm; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            T acc = T(0);
            for (std::size_t t = 0; t < k; ++t) {
                acc += static_cast<T>(a[i * k + t]) * static_cast<T>(b[t * n + j]);
            }
            c[i * n + j] = static_cast<double>(acc);
        }
    }
}

/// out[co,ho,wo] = cross-correlation of in[ci,h,w] with ker[co,ci,kh,kw],
/// zero padding `pad`, stride `stride`.
template <typename T>
void conv2d_forward(const double* in, const double* ker, double* out,
                    std::size_t cin, std::size_t h, std::size_t w,
                    std::size_t cout, std::size_t kh, std::size_t kw,
                    int stride, int pad,
                    std::size_t ho, std::size_t wo) {
    const std::ptrdiff_t total = static_cast<std::ptrdiff_t>(cout * ho * wo);
    const bool big = static_cast<std::size_t>(total) * cin * kh * kw > kParallelThreshold;
#pragma omp parallel for num_threads(max_jobs()) if (max_jobs() > 1 && big)
    for (std::ptrdiff_t idx = 0; idx < total; ++idx) {
        const std::size_t co = static_cast<std::size_t>(idx) / (ho * wo);
        const std::size_t oy = (static_cast<std::size_t>(idx) / wo) % ho;
        const std::size_t ox = static_cast<std::size_t>(idx) % wo;
        T acc = T(0);
        for (std::size_t ci = 0; ci < cin; ++ci) {
            for (std::size_t ky = 0; ky < kh; ++ky) {
                const std::ptrdiff_t iy =
                    static_cast<std::ptrdiff_t>(oy) * stride - pad + static_cast<std::ptrdiff_t>(ky);
                if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(h)) continue;
                for (std::size_t kx = 0; kx < kw; ++kx) {
                    const std::ptrdiff_t ix =
                        static_cast<std::ptrdiff_t>(ox) * stride - pad + static_cast<std::ptrdiff_t>(kx);
                    if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(w)) continue;
                    acc += static_cast<T>(in[(ci * h + iy) * w + ix]) *
                           static_cast<T>(ker[((co * cin + ci) * kh + ky) * kw + kx]);
                }
            }
        }
        out[idx] = static_cast<double>(acc);
    }
}

/// din[ci,h,w] from dout[co,ho,wo]: gather form, each input pixel sums the
/// output positions its value fed, so no thread ever writes a shared cell.
template <typename T>
void conv2d_backward_input(const double* dout, const double* ker, double* din,
                           std::size_t cin, std::size_t h, std::size_t w,
                           std::size_t cout, std::size_t kh, std::size_t kw,
                           int stride, int pad,
                           std::size_t ho, std::size_t wo) {
    const std::ptrdiff_t total = static_cast<std::ptrdiff_t>(cin * h * w);
    const bool big = static_cast<std::size_t>(total) * cout * kh * kw > kParallelThreshold;
#pragma omp parallel for num_threads(max_jobs()) if (max_jobs() > 1 && big)
    for (std::ptrdiff_t idx = 0; idx < total; ++idx) {
        const std::size_t ci = static_cast<std::size_t>(idx) / (h * w);
        const std::size_t iy = (static_cast<std::size_t>(idx) / w) % h;
        const std::size_t ix = static_cast<std::size_t>(idx) % w;
        T acc = T(0);
        for (std::size_t ky = 0; ky < kh; ++ky) {
            const std::ptrdiff_t ty = static_cast<std::ptrdiff_t>(iy) + pad - static_cast<std::ptrdiff_t>(ky);
            if (ty < 0 || ty % stride != 0) continue;
            const std::ptrdiff_t oy = ty / stride;
            if (oy >= static_cast<std::ptrdiff_t>(ho)) continue;
            for (std::size_t kx = 0; kx < kw; ++kx) {
                const std::ptrdiff_t tx =
                    static_cast<std::ptrdiff_t>(ix) + pad - static_cast<std::ptrdiff_t>(kx);
                if (tx < 0 || tx % stride != 0) continue;
                const std::ptrdiff_t ox = tx / stride;
                if (ox >= static_cast<std::ptrdiff_t>(wo)) continue;
                for (std::size_t co = 0; co < cout; ++co) {
                    acc += static_cast<T>(dout[(co * ho + oy) * wo + ox]) *
                           static_cast<T>(ker[((co * cin + ci) * kh + ky) * kw + kx]);
                }
            }
        }
        din[idx] = static_cast<double>(acc);
    }
}

/// dker[co,ci,kh,kw] from dout[co,ho,wo] and in[ci,h,w]; one weight per
/// element, accumulated serially.
template <typename T>
void conv2d_backward_weights(const double* dout, const double* in, double* dker,
                             std::size_t cin, std::size_t h, std::size_t w,
                             std::size_t cout, std::size_t kh, std::size_t kw,
                             int stride, int pad,
                             std::size_t ho, std::size_t wo) {
    const std::ptrdiff_t total = static_cast<std::ptrdiff_t>(cout * cin * kh * kw);
    const bool big = static_cast<std::size_t>(total) * ho * wo > kParallelThreshold;
#pragma omp parallel for num_threads(max_jobs()) if (max_jobs() > 1 && big)
    for (std::ptrdiff_t idx = 0; idx < total; ++idx) {
        const std::size_t co = static_cast<std::size_t>(idx) / (cin * kh * kw);
        const std::size_t ci = (static_cast<std::size_t>(idx) / (kh * kw)) % cin;
        const std::size_t ky = (static_cast<std::size_t>(idx) / kw) % kh;
        const std::size_t kx = static_cast<std::size_t>(idx) % kw;
        T acc = T(0);
        for (std::size_t oy = 0; oy < ho; ++oy) {
            const std::ptrdiff_t iy =
                static_cast<std::ptrdiff_t>(oy) * stride - pad + static_cast<std::ptrdiff_t>(ky);
            if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(h)) continue;
            for (std::size_t ox = 0; ox < wo; ++ox) {
                const std::ptrdiff_t ix =
                    static_cast<std::ptrdiff_t>(ox) * stride - pad + static_cast<std::ptrdiff_t>(kx);
                if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(w)) continue;
                acc += static_cast<T>(dout[(co * ho + oy) * wo + ox]) *
                       static_cast<T>(in[(ci * h + iy) * w + ix]);
            }
        }
        dker[idx] = static_cast<double>(acc);
    }
}

}  // namespace advlab::kernels
