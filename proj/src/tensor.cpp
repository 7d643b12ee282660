#include "advlab/tensor.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>

#include "advlab/errors.hpp"
#include "advlab/kernels.hpp"

namespace advlab {

namespace {
std::atomic<Precision> g_precision{Precision::float64};

std::size_t shape_numel(const std::vector<std::size_t>& shape) {
    std::size_t n = 1;
    for (std::size_t e : shape) n *= e;
    return shape.empty() ? 0 : n;
}
}  // namespace

Precision precision() { return g_precision.load(); }
void set_precision(Precision p) { g_precision.store(p); }

Tensor::Tensor(std::vector<std::size_t> extents, double fill)
    : shape(std::move(extents)), data(shape_numel(shape), fill) {
    for (std::size_t e : shape) {
        if (e == 0) throw dimension_error("tensor extents must be positive, got shape " + shape_str());
    }
}

Tensor::Tensor(std::vector<std::size_t> extents, std::vector<double> values)
    : shape(std::move(extents)), data(std::move(values)) {
    if (data.size() != shape_numel(shape)) {
        std::ostringstream os;
        os << "tensor shape " << shape_str() << " needs " << shape_numel(shape)
           << " values, got " << data.size();
        throw dimension_error(os.str());
    }
}

std::size_t Tensor::numel() const { return data.size(); }

bool Tensor::all_finite() const {
    return std::all_of(data.begin(), data.end(), [](double v) { return std::isfinite(v); });
}

std::string Tensor::shape_str() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) os << ',';
        os << shape[i];
    }
    os << ']';
    return os.str();
}

Tensor matmul(const Tensor& a, const Tensor& b) {
    if (a.rank() != 2 || b.rank() != 2) {
        throw dimension_error("matmul needs rank-2 operands, got " + a.shape_str() + " and " + b.shape_str());
    }
    if (a.shape[1] != b.shape[0]) {
        throw dimension_error("matmul inner dimensions disagree: " + a.shape_str() + " x " + b.shape_str());
    }
    Tensor c({a.shape[0], b.shape[1]});
    if (precision() == Precision::float32) {
        kernels::matmul<float>(a.data.data(), b.data.data(), c.data.data(),
                               a.shape[0], a.shape[1], b.shape[1]);
    } else {
        kernels::matmul<double>(a.data.data(), b.data.data(), c.data.data(),
                                a.shape[0], a.shape[1], b.shape[1]);
    }
    return c;
}

Tensor conv2d(const Tensor& input, const Tensor& kernel, int stride, int pad) {
    if (input.rank() != 3 || kernel.rank() != 4) {
        throw dimension_error("conv2d needs input [C_in,H,W] and kernel [C_out,C_in,kH,kW], got " +
                              input.shape_str() + " and " + kernel.shape_str());
    }
    if (stride < 1) throw value_error("conv2d stride must be >= 1");
    if (pad < 0) throw value_error("conv2d pad must be >= 0");
    const std::size_t cin = input.shape[0], h = input.shape[1], w = input.shape[2];
    const std::size_t cout = kernel.shape[0], kh = kernel.shape[2], kw = kernel.shape[3];
    if (kernel.shape[1] != cin) {
        throw dimension_error("conv2d channel mismatch: input " + input.shape_str() +
                              " vs kernel " + kernel.shape_str());
    }
    const std::ptrdiff_t ho_s = (static_cast<std::ptrdiff_t>(h) + 2 * pad - static_cast<std::ptrdiff_t>(kh)) / stride + 1;
    const std::ptrdiff_t wo_s = (static_cast<std::ptrdiff_t>(w) + 2 * pad - static_cast<std::ptrdiff_t>(kw)) / stride + 1;
    if (static_cast<std::ptrdiff_t>(h) + 2 * pad < static_cast<std::ptrdiff_t>(kh) ||
        static_cast<std::ptrdiff_t>(w) + 2 * pad < static_cast<std::ptrdiff_t>(kw) ||
        ho_s < 1 || wo_s < 1) {
        throw dimension_error("conv2d kernel " + kernel.shape_str() + " does not fit input " +
                              input.shape_str() + " with the given stride/pad");
    }
    const std::size_t ho = static_cast<std::size_t>(ho_s), wo = static_cast<std::size_t>(wo_s);
    Tensor out({cout, ho, wo});
    if (precision() == Precision::float32) {
        kernels::conv2d_forward<float>(input.data.data(), kernel.data.data(), out.data.data(),
                                       cin, h, w, cout, kh, kw, stride, pad, ho, wo);
    } else {
        kernels::conv2d_forward<double>(input.data.data(), kernel.data.data(), out.data.data(),
                                        cin, h, w, cout, kh, kw, stride, pad, ho, wo);
    }
    return out;
}

Tensor relu(const Tensor& t) {
    Tensor out = t;
    for (double& v : out.data) v = v > 0.0 ? v : 0.0;
    return out;
}

Tensor softmax(const Tensor& logits) {
    if (logits.rank() != 1) throw dimension_error("softmax needs a rank-1 tensor, got " + logits.shape_str());
    if (logits.data.empty()) throw dimension_error("softmax needs at least one logit");
    const double m = *std::max_element(logits.data.begin(), logits.data.end());
    Tensor out = logits;
    double sum = 0.0;
    for (double& v : out.data) {
        v = std::exp(v - m);
        sum += v;
    }
    for (double& v : out.data) v /= sum;
    return out;
}

double cross_entropy(const Tensor& probs, std::size_t label) {
    if (probs.rank() != 1) throw dimension_error("cross_entropy needs a rank-1 tensor, got " + probs.shape_str());
    if (label >= probs.data.size()) {
        std::ostringstream os;
        os << "cross_entropy label " << label << " out of range for " << probs.data.size() << " classes";
        throw index_error(os.str());
    }
    return -std::log(std::max(probs.data[label], kCrossEntropyFloor));
}

std::vector<std::pair<std::size_t, double>> argmax_topk(const Tensor& t, std::size_t k) {
    if (t.rank() != 1) throw dimension_error("argmax_topk needs a rank-1 tensor, got " + t.shape_str());
    if (k == 0 || k > t.data.size()) {
        std::ostringstream os;
        os << "argmax_topk k=" << k << " out of range for " << t.data.size() << " entries";
        throw index_error(os.str());
    }
    std::vector<std::pair<std::size_t, double>> order(t.data.size());
    for (std::size_t i = 0; i < t.data.size(); ++i) order[i] = {i, t.data[i]};
    std::stable_sort(order.begin(), order.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    order.resize(k);
    return order;
}

}  // namespace advlab
