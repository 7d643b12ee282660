#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "advlab/image.hpp"
#include "advlab/tensor.hpp"

namespace advlab {

enum class LayerKind { dense, conv2d, relu, flatten };

std::string to_string(LayerKind kind);
LayerKind layer_kind_from_string(std::string_view name);

struct Layer {
    LayerKind kind = LayerKind::relu;
    Tensor weights;  // dense: [out,in]; conv2d: [C_out,C_in,kH,kW]; empty otherwise
    Tensor bias;     // dense: [out]; conv2d: [C_out]; empty otherwise
    int stride = 1;  // conv2d only
    int pad = 0;     // conv2d only

    static Layer dense(Tensor w, Tensor b);
    static Layer conv(Tensor kernel, Tensor b, int stride, int pad);
    static Layer relu();
    static Layer flatten();
};

/// Feed-forward layer stack producing class logits. Models are immutable in
/// use: forward and the gradient ops never modify them. Callers run
/// validate() once after construction or loading; forward only re-checks the
/// input shape.
struct Model {
    std::string name;
    std::vector<std::size_t> input_shape;  // [C,H,W]
    std::size_t num_classes = 0;
    std::vector<Layer> layers;
};

/// Walks the shape composition and parameter consistency of every layer.
/// Throws validation_error naming the offending layer index.
void validate(const Model& m);

struct Prediction {
    Tensor logits;  // rank-1 [num_classes]
    Tensor probs;
    std::size_t predicted = 0;
    double confidence = 0.0;
};

Prediction forward(const Model& m, const Tensor& x);
Prediction forward(const Model& m, const Image& img);

struct LossGrad {
    double loss = 0.0;
    Tensor grad;  // d loss / d input, input shape
};

/// Softmax cross-entropy against `label` and its exact reverse-mode input
/// gradient. When the 1e-12 probability floor clamps, the loss is locally
/// constant and the gradient is exactly zero.
LossGrad loss_and_input_gradient(const Model& m, const Tensor& x, std::size_t label);
LossGrad loss_and_input_gradient(const Model& m, const Image& img, std::size_t label);

/// d(dlogits . logits(x)) / dx: backpropagates an arbitrary seed through the
/// stack. The loss gradient, the DeepFool hyperplane normals (seed e_k -
/// e_c), and the C&W hinge gradient are all instances of this.
Tensor input_gradient_from_logit_seed(const Model& m, const Tensor& x, const Tensor& dlogits);

/// Central differences (L(x+h e_i) - L(x-h e_i)) / 2h per pixel, no
/// clipping. Independent oracle for the analytic gradient.
Tensor finite_difference_gradient(const Model& m, const Image& img, std::size_t label, double h);

/// argmin over probs, ties to the lowest index.
std::size_t least_likely_class(const Model& m, const Image& img);
std::size_t least_likely_class(const Model& m, const Tensor& x);

/// Loss plus gradients with respect to every weight and bias, for training.
struct ParamGrads {
    double loss = 0.0;
    std::vector<Tensor> weights;  // aligned with model.layers; empty for relu/flatten
    std::vector<Tensor> bias;
};
ParamGrads loss_and_param_gradients(const Model& m, const Tensor& x, std::size_t label);

/// The bundled architectures: "cnn-a" (2 conv + 1 dense), "cnn-b" (1 conv +
/// 2 dense), "mlp-c" (3 dense); all take [1,16,16] inputs and emit 10
/// classes.
const std::vector<std::string>& architecture_names();

/// Fresh seeded initialization of a named architecture: weights uniform in
/// (-s, s) with s = sqrt(6 / (fan_in + fan_out)), biases zero.
Model make_architecture(std::string_view arch, std::uint64_t seed);

}  // namespace advlab
