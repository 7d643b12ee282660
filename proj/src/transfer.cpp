#include "advlab/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "advlab/errors.hpp"
#include "advlab/rng.hpp"

namespace advlab {

namespace {

void check_same_geometry(const std::vector<Model>& models) {
    if (models.empty()) throw value_error("at least one model is required");
    for (std::size_t i = 1; i < models.size(); ++i) {
        if (models[i].input_shape != models[0].input_shape)
            throw value_error("model '" + models[i].name + "' input shape " +
                              std::to_string(models[i].input_shape[1]) + "x" +
                              std::to_string(models[i].input_shape[2]) +
                              " differs from model '" + models[0].name + "'");
        if (models[i].num_classes != models[0].num_classes)
            throw value_error("model '" + models[i].name + "' class count differs from '" +
                              models[0].name + "'");
    }
}

}  // namespace

TransferRun transfer_matrix(const std::vector<Model>& models, const LabeledDataset& data,
                            const AttackConfig& attack, std::size_t n, std::uint64_t seed) {
    check_same_geometry(models);
    if (n == 0) throw value_error("sample count must be >= 1");
    if (n > data.size())
        throw value_error("sample count " + std::to_string(n) + " exceeds dataset size " +
                          std::to_string(data.size()));
    validate(attack, models[0].num_classes);

    // Seeded shuffled scan for images every model gets right before attack.
    // Images already labeled as a configured target would be degenerate
    // inputs for target-driven kinds, so they are skipped too.
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), 0);
    Rng sampler = subrng(seed, "transfer-sample");
    sampler.shuffle(order);

    std::vector<std::size_t> picked;
    picked.reserve(n);
    for (std::size_t idx : order) {
        if (picked.size() == n) break;
        if (is_targeted(attack.kind) && data.labels[idx] == *attack.target) continue;
        bool all_correct = true;
        for (const Model& m : models) {
            if (forward(m, data.images[idx]).predicted != data.labels[idx]) {
                all_correct = false;
                break;
            }
        }
        if (all_correct) picked.push_back(idx);
    }
    if (picked.size() < n)
        throw value_error("only " + std::to_string(picked.size()) + " of the requested " +
                          std::to_string(n) + " commonly-correct images are available");

    TransferRun run;
    run.matrix.sample_count = n;
    run.matrix.attack = attack;
    run.matrix.seed = seed;
    for (const Model& m : models) {
        run.matrix.source_models.push_back(m.name);
        run.matrix.eval_models.push_back(m.name);
    }

    const std::size_t k = models.size();
    run.matrix.fool_rate.assign(k, std::vector<double>(k, 0.0));
    std::vector<std::vector<double>> targeted_rate(k, std::vector<double>(k, 0.0));
    bool any_target_used = false;

    for (std::size_t si = 0; si < k; ++si) {
        for (std::size_t idx : picked) {
            AttackResult result = run_attack(models[si], data.images[idx], attack);
            TransferRecord rec;
            rec.image_index = idx;
            rec.true_label = data.labels[idx];
            rec.source_model = models[si].name;
            rec.attack_success = result.success;
            rec.adversarial_label_on_source = result.adversarial_label;
            rec.target_used = result.target_used;
            if (result.target_used.has_value()) any_target_used = true;
            for (std::size_t ei = 0; ei < k; ++ei) {
                const std::size_t label = forward(models[ei], result.adversarial).predicted;
                const bool fooled = label != rec.true_label;
                rec.eval_labels.push_back(label);
                rec.eval_fooled.push_back(fooled);
                if (fooled) run.matrix.fool_rate[si][ei] += 1.0;
                if (rec.target_used.has_value() && label == *rec.target_used)
                    targeted_rate[si][ei] += 1.0;
            }
            run.records.push_back(std::move(rec));
        }
    }

    const double denom = static_cast<double>(n);
    for (std::size_t si = 0; si < k; ++si)
        for (std::size_t ei = 0; ei < k; ++ei) {
            run.matrix.fool_rate[si][ei] /= denom;
            targeted_rate[si][ei] /= denom;
        }
    if (any_target_used) run.matrix.targeted_fool_rate = std::move(targeted_rate);
    return run;
}

std::string to_csv(const TransferMatrix& matrix) {
    std::ostringstream out;
    out << "source";
    for (const std::string& name : matrix.eval_models) out << "," << name;
    out << "\n";
    out.precision(9);
    for (std::size_t si = 0; si < matrix.source_models.size(); ++si) {
        out << matrix.source_models[si];
        for (double rate : matrix.fool_rate[si]) out << "," << rate;
        out << "\n";
    }
    return out.str();
}

MultiAttackResult sequential_multi_attack(const std::vector<Model>& chain, const Image& image,
                                          const std::vector<AttackConfig>& per_stage) {
    if (chain.size() < 2) throw value_error("attack chain needs at least two models");
    if (chain.size() != per_stage.size())
        throw value_error("chain has " + std::to_string(chain.size()) + " models but " +
                          std::to_string(per_stage.size()) + " stage configs");
    check_same_geometry(chain);

    MultiAttackResult out;
    for (const Model& m : chain) out.chain.push_back(m.name);
    for (const AttackConfig& c : per_stage) out.per_stage_epsilons.push_back(c.epsilon);

    // Each model's verdict on the untouched image anchors the untargeted
    // property for its stage.
    std::vector<std::size_t> clean_labels;
    clean_labels.reserve(chain.size());
    for (const Model& m : chain) clean_labels.push_back(forward(m, image).predicted);

    Image cur = image;
    std::vector<std::optional<std::size_t>> stage_targets(chain.size());
    for (std::size_t i = 0; i < chain.size(); ++i) {
        AttackResult stage = run_attack(chain[i], cur, per_stage[i]);
        stage_targets[i] = stage.target_used;
        cur = stage.adversarial;
    }
    out.final_image = std::move(cur);

    out.fools_all = true;
    for (std::size_t i = 0; i < chain.size(); ++i) {
        Prediction p = forward(chain[i], out.final_image);
        MultiStageEval eval;
        eval.label = p.predicted;
        eval.confidence = p.confidence;
        eval.fooled = stage_targets[i].has_value() ? p.predicted == *stage_targets[i]
                                                   : p.predicted != clean_labels[i];
        out.fools_all = out.fools_all && eval.fooled;
        out.per_model.push_back(eval);
    }

    double linf = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < image.pixels.size(); ++i) {
        const double d = out.final_image.pixels[i] - image.pixels[i];
        linf = std::max(linf, std::fabs(d));
        sq += d * d;
    }
    out.linf_from_original = linf;
    out.l2_from_original = std::sqrt(sq);
    return out;
}

}  // namespace advlab
