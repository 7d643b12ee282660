#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "advlab/attacks.hpp"
#include "advlab/dataset.hpp"
#include "advlab/image.hpp"
#include "advlab/model.hpp"

namespace advlab {

/// Fool rates of adversarial images generated on each source model when
/// evaluated on every model. fool_rate uses the untargeted property (label
/// differs from the true class); targeted_fool_rate tracks the driven target
/// and stays empty when the attack kind drives none.
struct TransferMatrix {
    std::vector<std::string> source_models;
    std::vector<std::string> eval_models;
    std::vector<std::vector<double>> fool_rate;
    std::vector<std::vector<double>> targeted_fool_rate;
    std::size_t sample_count = 0;
    AttackConfig attack;
    std::uint64_t seed = 0;
};

/// One sampled image attacked on one source model: everything a matrix
/// entry aggregates, so entries can be recomputed from persisted records.
struct TransferRecord {
    std::size_t image_index = 0;  // index into the dataset it was sampled from
    std::size_t true_label = 0;
    std::string source_model;
    bool attack_success = false;
    std::size_t adversarial_label_on_source = 0;
    std::optional<std::size_t> target_used;
    std::vector<std::size_t> eval_labels;  // aligned with eval_models
    std::vector<bool> eval_fooled;         // untargeted property per eval model
};

struct TransferRun {
    TransferMatrix matrix;
    std::vector<TransferRecord> records;  // source-major, sample order within
};

/// Samples n images in a seeded shuffled order, keeping only images every
/// model classifies correctly before attack (and, for target-driven kinds,
/// images whose true label is not the configured target). Each source model
/// then attacks every sampled image and every model evaluates the results.
TransferRun transfer_matrix(const std::vector<Model>& models, const LabeledDataset& data,
                            const AttackConfig& attack, std::size_t n, std::uint64_t seed);

/// TransferMatrix fool rates as CSV: header = eval model names, one row per
/// source model.
std::string to_csv(const TransferMatrix& matrix);

struct MultiStageEval {
    std::size_t label = 0;
    double confidence = 0.0;
    bool fooled = false;
};

struct MultiAttackResult {
    std::vector<std::string> chain;
    Image final_image;
    std::vector<MultiStageEval> per_model;
    bool fools_all = false;
    double linf_from_original = 0.0;
    double l2_from_original = 0.0;
    std::vector<double> per_stage_epsilons;
};

/// Stage i attacks chain[i] starting from the previous stage's output (stage
/// 0 starts from the clean image). Every model then evaluates the final
/// image: a target-driven stage counts as fooled when the final label equals
/// its target, any other stage when the label differs from that model's
/// prediction on the clean image. Norms are measured from the clean image.
MultiAttackResult sequential_multi_attack(const std::vector<Model>& chain, const Image& image,
                                          const std::vector<AttackConfig>& per_stage);

}  // namespace advlab
