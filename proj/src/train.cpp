#include "advlab/train.hpp"

#include <numeric>
#include <sstream>

#include "advlab/errors.hpp"
#include "advlab/rng.hpp"

namespace advlab {

TrainResult train_sgd(const Model& m, const LabeledDataset& data, std::size_t epochs, double lr,
                      std::size_t batch, std::uint64_t seed) {
    validate(m);
    if (data.size() == 0) throw value_error("cannot train on an empty dataset");
    if (data.labels.size() != data.images.size()) {
        throw value_error("dataset images and labels disagree in length");
    }
    for (std::size_t label : data.labels) {
        if (label >= m.num_classes) {
            std::ostringstream os;
            os << "dataset label " << label << " out of range for " << m.num_classes << " classes";
            throw index_error(os.str());
        }
    }
    if (!(lr > 0.0)) throw value_error("learning rate must be > 0");
    if (batch == 0) throw value_error("batch size must be >= 1");

    TrainResult result;
    result.model = m;
    Model& net = result.model;

    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), 0);

    for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
        Rng shuffle_rng = subrng(seed, "shuffle", epoch);
        shuffle_rng.shuffle(order);

        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size(); start += batch) {
            const std::size_t end = std::min(start + batch, order.size());
            const double scale = lr / static_cast<double>(end - start);

            std::vector<Tensor> wsum(net.layers.size());
            std::vector<Tensor> bsum(net.layers.size());
            for (std::size_t i = start; i < end; ++i) {
                const std::size_t idx = order[i];
                ParamGrads g = loss_and_param_gradients(net, to_tensor(data.images[idx]),
                                                        data.labels[idx]);
                epoch_loss += g.loss;
                for (std::size_t li = 0; li < net.layers.size(); ++li) {
                    if (g.weights[li].data.empty()) continue;
                    if (wsum[li].data.empty()) {
                        wsum[li] = std::move(g.weights[li]);
                        bsum[li] = std::move(g.bias[li]);
                    } else {
                        for (std::size_t k = 0; k < wsum[li].data.size(); ++k)
                            wsum[li].data[k] += g.weights[li].data[k];
                        for (std::size_t k = 0; k < bsum[li].data.size(); ++k)
                            bsum[li].data[k] += g.bias[li].data[k];
                    }
                }
            }
            for (std::size_t li = 0; li < net.layers.size(); ++li) {
                if (wsum[li].data.empty()) continue;
                for (std::size_t k = 0; k < wsum[li].data.size(); ++k)
                    net.layers[li].weights.data[k] -= scale * wsum[li].data[k];
                for (std::size_t k = 0; k < bsum[li].data.size(); ++k)
                    net.layers[li].bias.data[k] -= scale * bsum[li].data[k];
            }
        }
        result.epoch_losses.push_back(epoch_loss / static_cast<double>(data.size()));
    }
    return result;
}

double accuracy(const Model& m, const LabeledDataset& data) {
    if (data.size() == 0) throw value_error("accuracy needs a nonempty dataset");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (forward(m, data.images[i]).predicted == data.labels[i]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(data.size());
}

}  // namespace advlab
