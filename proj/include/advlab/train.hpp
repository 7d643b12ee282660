#pragma once

#include <cstdint>
#include <vector>

#include "advlab/dataset.hpp"
#include "advlab/model.hpp"

namespace advlab {

struct TrainResult {
    Model model;
    std::vector<double> epoch_losses;  // mean training loss per epoch
};

/// Minibatch SGD with a seeded per-epoch shuffle. Deterministic: the same
/// (model, data, flags, seed) always yields the same weights. The input
/// model is untouched; epochs=0 returns it as-is.
TrainResult train_sgd(const Model& m, const LabeledDataset& data, std::size_t epochs, double lr,
                      std::size_t batch, std::uint64_t seed);

/// Fraction of samples the model labels correctly.
double accuracy(const Model& m, const LabeledDataset& data);

}  // namespace advlab
