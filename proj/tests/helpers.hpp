#pragma once

#include <cstddef>
#include <vector>

#include "advlab/image.hpp"
#include "advlab/model.hpp"
#include "advlab/rng.hpp"
#include "advlab/tensor.hpp"

namespace advlab::testing {

inline Image random_image01(Rng& rng, std::size_t h, std::size_t w) {
    Image img(h, w, 0.0);
    for (double& p : img.pixels) p = rng.uniform01();
    return img;
}

inline Tensor random_uniform(Rng& rng, std::vector<std::size_t> shape, double lo, double hi) {
    Tensor t(std::move(shape));
    for (double& v : t.data) v = rng.uniform(lo, hi);
    return t;
}

/// Small randomized layer stacks for gradient checks: at most five layers,
/// inputs up to 1x16x16, randomized hidden sizes and class counts. Conv
/// variants use 3x3 kernels with padding 1 so every input pixel reaches the
/// output regardless of stride.
inline Model random_small_model(Rng& rng, std::size_t h, std::size_t w) {
    const std::size_t classes = 3 + rng.index(8);
    Model m;
    m.name = "random";
    m.input_shape = {1, h, w};
    m.num_classes = classes;

    auto dense = [&](std::size_t out, std::size_t in) {
        return Layer::dense(random_uniform(rng, {out, in}, -0.5, 0.5),
                            random_uniform(rng, {out}, -0.1, 0.1));
    };
    auto conv = [&](std::size_t cout, std::size_t cin, int stride) {
        return Layer::conv(random_uniform(rng, {cout, cin, 3, 3}, -0.5, 0.5),
                           random_uniform(rng, {cout}, -0.1, 0.1), stride, 1);
    };

    switch (rng.index(4)) {
        case 0: {  // flatten dense relu dense
            const std::size_t hidden = 8 + rng.index(25);
            m.layers.push_back(Layer::flatten());
            m.layers.push_back(dense(hidden, h * w));
            m.layers.push_back(Layer::relu());
            m.layers.push_back(dense(classes, hidden));
            break;
        }
        case 1: {  // conv relu flatten dense
            const std::size_t ch = 2 + rng.index(5);
            const int stride = 1 + static_cast<int>(rng.index(2));
            m.layers.push_back(conv(ch, 1, stride));
            m.layers.push_back(Layer::relu());
            m.layers.push_back(Layer::flatten());
            const std::size_t oh = (h + 2 - 3) / stride + 1;
            const std::size_t ow = (w + 2 - 3) / stride + 1;
            m.layers.push_back(dense(classes, ch * oh * ow));
            break;
        }
        case 2: {  // conv flatten dense (no kink anywhere)
            const std::size_t ch = 2 + rng.index(4);
            m.layers.push_back(conv(ch, 1, 2));
            m.layers.push_back(Layer::flatten());
            const std::size_t oh = (h + 2 - 3) / 2 + 1;
            const std::size_t ow = (w + 2 - 3) / 2 + 1;
            m.layers.push_back(dense(classes, ch * oh * ow));
            break;
        }
        default: {  // flatten dense (affine)
            m.layers.push_back(Layer::flatten());
            m.layers.push_back(dense(classes, h * w));
            break;
        }
    }
    validate(m);
    return m;
}

/// Worst guarded relative disagreement between two gradient tensors.
inline double max_relative_error(const Tensor& a, const Tensor& b, double floor = 1e-8) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        const double denom = std::max({std::fabs(a.data[i]), std::fabs(b.data[i]), floor});
        worst = std::max(worst, std::fabs(a.data[i] - b.data[i]) / denom);
    }
    return worst;
}

}  // namespace advlab::testing
