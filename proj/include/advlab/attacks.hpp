#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "advlab/image.hpp"
#include "advlab/model.hpp"
#include "advlab/tensor.hpp"

namespace advlab {

enum class AttackKind { fgsm, fgsm_targeted, bim, illc, deepfool, cw_l2 };

std::string to_string(AttackKind kind);
AttackKind attack_kind_from_string(std::string_view name);

/// Kinds whose target class is caller-supplied. illc is not among them: it
/// derives its own target (the least-likely class of the original image).
bool is_targeted(AttackKind kind);

struct AttackConfig {
    AttackKind kind = AttackKind::fgsm;
    double epsilon = 0.3;
    double alpha = 0.03;
    std::size_t iterations = 20;
    std::optional<std::size_t> target;
    double overshoot = 0.02;
    double c = 1.0;
    double kappa = 0.0;
    std::size_t binary_search_steps = 5;
    std::uint64_t seed = 42;  // reserved; every bundled attack is deterministic without it
};

/// Bundled defaults per kind (epsilon 0.3 throughout; deepfool runs 50
/// iterations, bim/illc 20 with alpha = epsilon/10; cw_l2 does 5 rounds of
/// 200 steps at step size 0.01 starting from c = 1).
AttackConfig default_config(AttackKind kind);

/// Field ranges plus kind/target consistency. Out-of-range targets are
/// index errors; everything else is a value error.
void validate(const AttackConfig& config, std::size_t num_classes);

struct AttackResult {
    Image original;
    Image adversarial;
    Tensor perturbation;  // adversarial - original, signed
    std::size_t original_label = 0;
    double original_conf = 0.0;
    std::size_t adversarial_label = 0;
    double adversarial_conf = 0.0;
    bool success = false;
    double linf_norm = 0.0;
    double l2_norm = 0.0;
    std::size_t iterations_used = 0;
    /// The class the attack actually drove toward: the configured target for
    /// fgsm_targeted/cw_l2, the derived least-likely class for illc, absent
    /// for the untargeted kinds. Makes the success flag re-derivable from
    /// the stored labels alone.
    std::optional<std::size_t> target_used;
    AttackConfig attack;
};

AttackResult fgsm(const Model& m, const Image& image, const AttackConfig& config);
AttackResult fgsm_targeted(const Model& m, const Image& image, const AttackConfig& config);
AttackResult bim(const Model& m, const Image& image, const AttackConfig& config);
AttackResult illc(const Model& m, const Image& image, const AttackConfig& config);
AttackResult deepfool(const Model& m, const Image& image, const AttackConfig& config);
AttackResult cw_l2(const Model& m, const Image& image, const AttackConfig& config);

/// Dispatch on config.kind.
AttackResult run_attack(const Model& m, const Image& image, const AttackConfig& config);

/// The raw DeepFool iteration on an unconstrained tensor: accumulates
/// minimal linearized hyperplane projections, checking the label at the
/// overshot working point x + (1+overshoot) * total_step. No clipping, so
/// the pre-overshoot norm is directly comparable to closed-form projection
/// distances on affine models.
struct DeepFoolCore {
    Tensor total_step;
    double pre_overshoot_l2 = 0.0;
    std::size_t iterations_used = 0;
    bool label_changed = false;
    std::size_t final_label = 0;
};

DeepFoolCore deepfool_core(const Model& m, const Tensor& x, std::size_t iterations,
                           double overshoot);

}  // namespace advlab
