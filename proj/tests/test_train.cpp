#include <doctest.h>

#include <cstddef>

#include "advlab/errors.hpp"
#include "advlab/model.hpp"
#include "advlab/rng.hpp"
#include "advlab/train.hpp"

using namespace advlab;

namespace {

/// Two linearly separable blobs: class 0 dark, class 1 bright.
LabeledDataset blob_data(std::size_t per_class, std::uint64_t seed) {
    Rng rng(seed);
    LabeledDataset data;
    data.seed = seed;
    data.class_names = {"dark", "bright"};
    for (std::size_t cls = 0; cls < 2; ++cls) {
        for (std::size_t i = 0; i < per_class; ++i) {
            const double base = cls == 0 ? 0.2 : 0.8;
            Image img(8, 8, 0.0);
            for (double& p : img.pixels) p = base + rng.uniform(-0.1, 0.1);
            data.images.push_back(std::move(img));
            data.labels.push_back(cls);
        }
    }
    return data;
}

Model logistic_model(std::uint64_t seed) {
    Rng rng(seed);
    Model m;
    m.name = "logistic";
    m.input_shape = {1, 8, 8};
    m.num_classes = 2;
    Tensor w({2, 64});
    for (double& v : w.data) v = rng.uniform(-0.1, 0.1);
    m.layers.push_back(Layer::flatten());
    m.layers.push_back(Layer::dense(std::move(w), Tensor({2}, 0.0)));
    validate(m);
    return m;
}

}  // namespace

TEST_CASE("zero epochs return the initialization untouched") {
    LabeledDataset data = blob_data(5, 1);
    Model m = logistic_model(2);
    TrainResult r = train_sgd(m, data, 0, 0.1, 4, 3);
    CHECK(r.epoch_losses.empty());
    for (std::size_t i = 0; i < m.layers.size(); ++i) {
        CHECK(r.model.layers[i].weights.data == m.layers[i].weights.data);
        CHECK(r.model.layers[i].bias.data == m.layers[i].bias.data);
    }
}

TEST_CASE("separable blobs train to perfect accuracy") {
    LabeledDataset data = blob_data(20, 11);
    Model m = logistic_model(12);
    TrainResult r = train_sgd(m, data, 60, 0.5, 8, 13);
    CHECK(accuracy(r.model, data) == 1.0);
    REQUIRE(r.epoch_losses.size() == 60);
    CHECK(r.epoch_losses.back() < r.epoch_losses.front());
}

TEST_CASE("training is deterministic in the seed") {
    LabeledDataset data = blob_data(10, 21);
    Model m = logistic_model(22);
    TrainResult a = train_sgd(m, data, 5, 0.3, 4, 23);
    TrainResult b = train_sgd(m, data, 5, 0.3, 4, 23);
    TrainResult c = train_sgd(m, data, 5, 0.3, 4, 24);
    CHECK(a.model.layers[1].weights.data == b.model.layers[1].weights.data);
    CHECK(a.epoch_losses == b.epoch_losses);
    CHECK(a.model.layers[1].weights.data != c.model.layers[1].weights.data);
}

TEST_CASE("trainer argument validation") {
    LabeledDataset data = blob_data(4, 31);
    Model m = logistic_model(32);
    LabeledDataset empty;
    CHECK_THROWS_AS(train_sgd(m, empty, 1, 0.1, 4, 1), value_error);
    CHECK_THROWS_AS(train_sgd(m, data, 1, 0.0, 4, 1), value_error);
    CHECK_THROWS_AS(train_sgd(m, data, 1, 0.1, 0, 1), value_error);

    LabeledDataset bad = data;
    bad.labels[0] = 9;
    CHECK_THROWS_AS(train_sgd(m, bad, 1, 0.1, 4, 1), index_error);
}
