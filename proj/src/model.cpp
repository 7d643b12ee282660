#include "advlab/model.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "advlab/errors.hpp"
#include "advlab/kernels.hpp"
#include "advlab/rng.hpp"

namespace advlab {

std::string to_string(LayerKind kind) {
    switch (kind) {
        case LayerKind::dense: return "dense";
        case LayerKind::conv2d: return "conv2d";
        case LayerKind::relu: return "relu";
        case LayerKind::flatten: return "flatten";
    }
    throw value_error("unknown layer kind");
}

LayerKind layer_kind_from_string(std::string_view name) {
    if (name == "dense") return LayerKind::dense;
    if (name == "conv2d") return LayerKind::conv2d;
    if (name == "relu") return LayerKind::relu;
    if (name == "flatten") return LayerKind::flatten;
    throw value_error("unknown layer kind '" + std::string(name) + "'");
}

Layer Layer::dense(Tensor w, Tensor b) {
    Layer l;
    l.kind = LayerKind::dense;
    l.weights = std::move(w);
    l.bias = std::move(b);
    return l;
}

Layer Layer::conv(Tensor kernel, Tensor b, int stride, int pad) {
    Layer l;
    l.kind = LayerKind::conv2d;
    l.weights = std::move(kernel);
    l.bias = std::move(b);
    l.stride = stride;
    l.pad = pad;
    return l;
}

Layer Layer::relu() {
    Layer l;
    l.kind = LayerKind::relu;
    return l;
}

Layer Layer::flatten() {
    Layer l;
    l.kind = LayerKind::flatten;
    return l;
}

namespace {

[[noreturn]] void layer_fail(std::size_t index, LayerKind kind, const std::string& what) {
    std::ostringstream os;
    os << "layer " << index << " (" << to_string(kind) << "): " << what;
    throw validation_error(os.str());
}

std::vector<std::size_t> conv_output_shape(const std::vector<std::size_t>& in, const Layer& l,
                                           std::size_t index) {
    const std::size_t cout = l.weights.shape[0], kh = l.weights.shape[2], kw = l.weights.shape[3];
    if (l.stride < 1) layer_fail(index, l.kind, "stride must be >= 1");
    if (l.pad < 0) layer_fail(index, l.kind, "pad must be >= 0");
    const std::ptrdiff_t h = static_cast<std::ptrdiff_t>(in[1]) + 2 * l.pad -
                             static_cast<std::ptrdiff_t>(kh);
    const std::ptrdiff_t w = static_cast<std::ptrdiff_t>(in[2]) + 2 * l.pad -
                             static_cast<std::ptrdiff_t>(kw);
    if (h < 0 || w < 0) layer_fail(index, l.kind, "kernel does not fit the padded input");
    return {cout, static_cast<std::size_t>(h / l.stride + 1), static_cast<std::size_t>(w / l.stride + 1)};
}

std::string shape_text(const std::vector<std::size_t>& shape) {
    return Tensor(shape, 0.0).shape_str();
}

}  // namespace

void validate(const Model& m) {
    if (m.name.empty()) throw validation_error("model name must not be empty");
    if (m.num_classes < 1) throw validation_error("model num_classes must be >= 1");
    if (m.input_shape.size() != 3) {
        throw validation_error("model input_shape must be [C,H,W]");
    }
    for (std::size_t e : m.input_shape) {
        if (e == 0) throw validation_error("model input_shape extents must be positive");
    }

    std::vector<std::size_t> cur = m.input_shape;
    for (std::size_t i = 0; i < m.layers.size(); ++i) {
        const Layer& l = m.layers[i];
        switch (l.kind) {
            case LayerKind::dense: {
                if (cur.size() != 1) layer_fail(i, l.kind, "needs a flat input, have " + shape_text(cur));
                if (l.weights.rank() != 2) layer_fail(i, l.kind, "weights must be rank-2 [out,in]");
                if (l.weights.shape[1] != cur[0]) {
                    std::ostringstream os;
                    os << "weights expect " << l.weights.shape[1] << " inputs, have " << cur[0];
                    layer_fail(i, l.kind, os.str());
                }
                if (l.bias.rank() != 1 || l.bias.shape[0] != l.weights.shape[0]) {
                    std::ostringstream os;
                    os << "bias length " << (l.bias.rank() == 1 ? l.bias.shape[0] : 0)
                       << " != out units " << l.weights.shape[0];
                    layer_fail(i, l.kind, os.str());
                }
                cur = {l.weights.shape[0]};
                break;
            }
            case LayerKind::conv2d: {
                if (cur.size() != 3) layer_fail(i, l.kind, "needs a [C,H,W] input, have " + shape_text(cur));
                if (l.weights.rank() != 4) layer_fail(i, l.kind, "kernel must be rank-4 [C_out,C_in,kH,kW]");
                if (l.weights.shape[1] != cur[0]) {
                    std::ostringstream os;
                    os << "kernel expects " << l.weights.shape[1] << " input channels, have " << cur[0];
                    layer_fail(i, l.kind, os.str());
                }
                if (l.bias.rank() != 1 || l.bias.shape[0] != l.weights.shape[0]) {
                    std::ostringstream os;
                    os << "bias length " << (l.bias.rank() == 1 ? l.bias.shape[0] : 0)
                       << " != out channels " << l.weights.shape[0];
                    layer_fail(i, l.kind, os.str());
                }
                cur = conv_output_shape(cur, l, i);
                break;
            }
            case LayerKind::relu:
                if (!l.weights.data.empty() || !l.bias.data.empty()) {
                    layer_fail(i, l.kind, "carries parameters it cannot use");
                }
                break;
            case LayerKind::flatten: {
                if (!l.weights.data.empty() || !l.bias.data.empty()) {
                    layer_fail(i, l.kind, "carries parameters it cannot use");
                }
                if (cur.size() != 3) layer_fail(i, l.kind, "needs a [C,H,W] input, have " + shape_text(cur));
                cur = {cur[0] * cur[1] * cur[2]};
                break;
            }
        }
    }
    if (cur.size() != 1 || cur[0] != m.num_classes) {
        std::ostringstream os;
        os << "layer stack ends with shape " << shape_text(cur) << ", expected ["
           << m.num_classes << "] logits";
        throw validation_error(os.str());
    }
}

namespace {

Tensor transpose2d(const Tensor& t) {
    Tensor out({t.shape[1], t.shape[0]});
    for (std::size_t i = 0; i < t.shape[0]; ++i)
        for (std::size_t j = 0; j < t.shape[1]; ++j) out.data[j * t.shape[0] + i] = t.data[i * t.shape[1] + j];
    return out;
}

Tensor matmul_shaped(const Tensor& a, const Tensor& b, std::vector<std::size_t> out_shape) {
    Tensor c = matmul(a, b);
    c.shape = std::move(out_shape);
    return c;
}

Tensor dense_forward(const Layer& l, const Tensor& x) {
    // x is rank-1 [in]; weights [out,in].
    Tensor col({x.shape[0], 1}, x.data);
    Tensor y = matmul_shaped(l.weights, col, {l.weights.shape[0]});
    for (std::size_t i = 0; i < y.data.size(); ++i) y.data[i] += l.bias.data[i];
    return y;
}

Tensor conv_forward(const Layer& l, const Tensor& x) {
    Tensor y = conv2d(x, l.weights, l.stride, l.pad);
    const std::size_t plane = y.shape[1] * y.shape[2];
    for (std::size_t c = 0; c < y.shape[0]; ++c) {
        for (std::size_t p = 0; p < plane; ++p) y.data[c * plane + p] += l.bias.data[c];
    }
    return y;
}

struct Trace {
    std::vector<Tensor> inputs;  // activation entering each layer
    Tensor logits;
};

Trace run_forward(const Model& m, const Tensor& x) {
    if (x.shape != m.input_shape) {
        throw dimension_error("model '" + m.name + "' expects input " +
                              Tensor(m.input_shape, 0.0).shape_str() + ", got " + x.shape_str());
    }
    Trace trace;
    trace.inputs.reserve(m.layers.size());
    Tensor cur = x;
    for (const Layer& l : m.layers) {
        trace.inputs.push_back(cur);
        switch (l.kind) {
            case LayerKind::dense: cur = dense_forward(l, cur); break;
            case LayerKind::conv2d: cur = conv_forward(l, cur); break;
            case LayerKind::relu: cur = relu(cur); break;
            case LayerKind::flatten: cur.shape = {cur.numel()}; break;
        }
    }
    trace.logits = std::move(cur);
    return trace;
}

Tensor conv_backward_input(const Layer& l, const Tensor& x, const Tensor& dy) {
    const std::size_t cin = x.shape[0], h = x.shape[1], w = x.shape[2];
    const std::size_t cout = l.weights.shape[0], kh = l.weights.shape[2], kw = l.weights.shape[3];
    Tensor dx({cin, h, w});
    if (precision() == Precision::float32) {
        kernels::conv2d_backward_input<float>(dy.data.data(), l.weights.data.data(), dx.data.data(),
                                              cin, h, w, cout, kh, kw, l.stride, l.pad,
                                              dy.shape[1], dy.shape[2]);
    } else {
        kernels::conv2d_backward_input<double>(dy.data.data(), l.weights.data.data(), dx.data.data(),
                                               cin, h, w, cout, kh, kw, l.stride, l.pad,
                                               dy.shape[1], dy.shape[2]);
    }
    return dx;
}

Tensor conv_backward_weights(const Layer& l, const Tensor& x, const Tensor& dy) {
    const std::size_t cin = x.shape[0], h = x.shape[1], w = x.shape[2];
    const std::size_t cout = l.weights.shape[0], kh = l.weights.shape[2], kw = l.weights.shape[3];
    Tensor dk({cout, cin, kh, kw});
    if (precision() == Precision::float32) {
        kernels::conv2d_backward_weights<float>(dy.data.data(), x.data.data(), dk.data.data(),
                                                cin, h, w, cout, kh, kw, l.stride, l.pad,
                                                dy.shape[1], dy.shape[2]);
    } else {
        kernels::conv2d_backward_weights<double>(dy.data.data(), x.data.data(), dk.data.data(),
                                                 cin, h, w, cout, kh, kw, l.stride, l.pad,
                                                 dy.shape[1], dy.shape[2]);
    }
    return dk;
}

struct Backward {
    Tensor input_grad;
    std::vector<Tensor> weight_grads;
    std::vector<Tensor> bias_grads;
};

/// Reverse pass from a d loss / d logits seed. Forward shapes are replayed
/// from the trace; dy changes rank at flatten exactly as the activations did.
Backward run_backward(const Model& m, const Trace& trace, const Tensor& dlogits,
                      bool want_params) {
    Backward out;
    if (want_params) {
        out.weight_grads.resize(m.layers.size());
        out.bias_grads.resize(m.layers.size());
    }
    Tensor dy = dlogits;
    for (std::size_t ri = m.layers.size(); ri-- > 0;) {
        const Layer& l = m.layers[ri];
        const Tensor& x = trace.inputs[ri];
        switch (l.kind) {
            case LayerKind::dense: {
                if (want_params) {
                    Tensor dy_col({dy.numel(), 1}, dy.data);
                    Tensor x_row({1, x.numel()}, x.data);
                    out.weight_grads[ri] = matmul(dy_col, x_row);
                    out.bias_grads[ri] = dy;
                }
                Tensor dy_col({dy.numel(), 1}, dy.data);
                dy = matmul_shaped(transpose2d(l.weights), dy_col, {x.numel()});
                break;
            }
            case LayerKind::conv2d: {
                if (want_params) {
                    out.weight_grads[ri] = conv_backward_weights(l, x, dy);
                    Tensor db({l.bias.shape[0]});
                    const std::size_t plane = dy.shape[1] * dy.shape[2];
                    for (std::size_t c = 0; c < dy.shape[0]; ++c) {
                        double acc = 0.0;
                        for (std::size_t p = 0; p < plane; ++p) acc += dy.data[c * plane + p];
                        db.data[c] = acc;
                    }
                    out.bias_grads[ri] = std::move(db);
                }
                dy = conv_backward_input(l, x, dy);
                break;
            }
            case LayerKind::relu: {
                Tensor dx = dy;
                for (std::size_t i = 0; i < dx.data.size(); ++i) {
                    if (x.data[i] <= 0.0) dx.data[i] = 0.0;
                }
                dy = std::move(dx);
                break;
            }
            case LayerKind::flatten: {
                dy.shape = x.shape;
                break;
            }
        }
    }
    out.input_grad = std::move(dy);
    return out;
}

Prediction prediction_from_logits(Tensor logits) {
    Prediction p;
    p.probs = softmax(logits);
    p.logits = std::move(logits);
    auto top = argmax_topk(p.probs, 1);
    p.predicted = top[0].first;
    p.confidence = top[0].second;
    return p;
}

/// d loss / d logits for softmax cross-entropy. Zero when the probability
/// floor clamps (the loss is locally flat there).
Tensor loss_seed(const Tensor& probs, std::size_t label) {
    Tensor seed({probs.numel()}, 0.0);
    if (probs.data[label] > kCrossEntropyFloor) {
        seed.data = probs.data;
        seed.data[label] -= 1.0;
    }
    return seed;
}

}  // namespace

Prediction forward(const Model& m, const Tensor& x) {
    return prediction_from_logits(run_forward(m, x).logits);
}

Prediction forward(const Model& m, const Image& img) { return forward(m, to_tensor(img)); }

LossGrad loss_and_input_gradient(const Model& m, const Tensor& x, std::size_t label) {
    Trace trace = run_forward(m, x);
    Tensor probs = softmax(trace.logits);
    if (label >= probs.numel()) {
        std::ostringstream os;
        os << "label " << label << " out of range for " << probs.numel() << " classes";
        throw index_error(os.str());
    }
    LossGrad lg;
    lg.loss = cross_entropy(probs, label);
    lg.grad = run_backward(m, trace, loss_seed(probs, label), false).input_grad;
    return lg;
}

LossGrad loss_and_input_gradient(const Model& m, const Image& img, std::size_t label) {
    return loss_and_input_gradient(m, to_tensor(img), label);
}

Tensor input_gradient_from_logit_seed(const Model& m, const Tensor& x, const Tensor& dlogits) {
    Trace trace = run_forward(m, x);
    if (dlogits.shape != trace.logits.shape) {
        throw dimension_error("logit seed shape " + dlogits.shape_str() + " != logits shape " +
                              trace.logits.shape_str());
    }
    return run_backward(m, trace, dlogits, false).input_grad;
}

Tensor finite_difference_gradient(const Model& m, const Image& img, std::size_t label, double h) {
    if (!(h > 0.0)) throw value_error("finite difference step must be > 0");
    Tensor x = to_tensor(img);
    if (label >= m.num_classes) {
        std::ostringstream os;
        os << "label " << label << " out of range for " << m.num_classes << " classes";
        throw index_error(os.str());
    }
    Tensor grad(x.shape, 0.0);
    for (std::size_t i = 0; i < x.data.size(); ++i) {
        const double saved = x.data[i];
        x.data[i] = saved + h;
        const double up = cross_entropy(softmax(run_forward(m, x).logits), label);
        x.data[i] = saved - h;
        const double down = cross_entropy(softmax(run_forward(m, x).logits), label);
        x.data[i] = saved;
        grad.data[i] = (up - down) / (2.0 * h);
    }
    return grad;
}

std::size_t least_likely_class(const Model& m, const Tensor& x) {
    Prediction p = forward(m, x);
    std::size_t best = 0;
    for (std::size_t i = 1; i < p.probs.numel(); ++i) {
        if (p.probs.data[i] < p.probs.data[best]) best = i;
    }
    return best;
}

std::size_t least_likely_class(const Model& m, const Image& img) {
    return least_likely_class(m, to_tensor(img));
}

ParamGrads loss_and_param_gradients(const Model& m, const Tensor& x, std::size_t label) {
    Trace trace = run_forward(m, x);
    Tensor probs = softmax(trace.logits);
    if (label >= probs.numel()) {
        std::ostringstream os;
        os << "label " << label << " out of range for " << probs.numel() << " classes";
        throw index_error(os.str());
    }
    Backward back = run_backward(m, trace, loss_seed(probs, label), true);
    ParamGrads pg;
    pg.loss = cross_entropy(probs, label);
    pg.weights = std::move(back.weight_grads);
    pg.bias = std::move(back.bias_grads);
    return pg;
}

const std::vector<std::string>& architecture_names() {
    static const std::vector<std::string> names = {"cnn-a", "cnn-b", "mlp-c"};
    return names;
}

namespace {

Tensor glorot(Rng& rng, std::vector<std::size_t> shape, std::size_t fan_in, std::size_t fan_out) {
    const double s = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    Tensor t(std::move(shape));
    for (double& v : t.data) v = rng.uniform(-s, s);
    return t;
}

Layer init_conv(Rng& rng, std::size_t cout, std::size_t cin, std::size_t k, int stride, int pad) {
    Tensor kernel = glorot(rng, {cout, cin, k, k}, cin * k * k, cout * k * k);
    return Layer::conv(std::move(kernel), Tensor({cout}, 0.0), stride, pad);
}

Layer init_dense(Rng& rng, std::size_t out, std::size_t in) {
    Tensor w = glorot(rng, {out, in}, in, out);
    return Layer::dense(std::move(w), Tensor({out}, 0.0));
}

}  // namespace

Model make_architecture(std::string_view arch, std::uint64_t seed) {
    Rng rng = subrng(seed, "init");
    Model m;
    m.name = std::string(arch);
    m.input_shape = {1, 16, 16};
    m.num_classes = 10;
    if (arch == "cnn-a") {
        m.layers.push_back(init_conv(rng, 8, 1, 3, 1, 1));
        m.layers.push_back(Layer::relu());
        m.layers.push_back(init_conv(rng, 8, 8, 3, 2, 1));
        m.layers.push_back(Layer::relu());
        m.layers.push_back(Layer::flatten());
        m.layers.push_back(init_dense(rng, 10, 512));
    } else if (arch == "cnn-b") {
        m.layers.push_back(init_conv(rng, 6, 1, 5, 2, 2));
        m.layers.push_back(Layer::relu());
        m.layers.push_back(Layer::flatten());
        m.layers.push_back(init_dense(rng, 48, 384));
        m.layers.push_back(Layer::relu());
        m.layers.push_back(init_dense(rng, 10, 48));
    } else if (arch == "mlp-c") {
        m.layers.push_back(Layer::flatten());
        m.layers.push_back(init_dense(rng, 64, 256));
        m.layers.push_back(Layer::relu());
        m.layers.push_back(init_dense(rng, 32, 64));
        m.layers.push_back(Layer::relu());
        m.layers.push_back(init_dense(rng, 10, 32));
    } else {
        throw value_error("unknown architecture '" + std::string(arch) +
                          "' (expected cnn-a, cnn-b, or mlp-c)");
    }
    validate(m);
    return m;
}

}  // namespace advlab
