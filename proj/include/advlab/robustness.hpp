#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "advlab/attacks.hpp"
#include "advlab/image.hpp"
#include "advlab/model.hpp"
#include "advlab/transforms.hpp"

namespace advlab {

/// The predicate a transformed adversarial image must keep satisfying:
/// targeted mode holds when the model's argmax equals the stored class,
/// untargeted mode when it differs from it.
struct AdversarialProperty {
    enum class Mode { targeted, untargeted };
    Mode mode = Mode::untargeted;
    std::size_t class_index = 0;

    static AdversarialProperty targeted(std::size_t target) {
        return {Mode::targeted, target};
    }
    static AdversarialProperty untargeted(std::size_t original) {
        return {Mode::untargeted, original};
    }
};

bool holds(const AdversarialProperty& property, const Model& m, const Image& img);
bool holds(const AdversarialProperty& property, std::size_t label);

/// The property a successful result was built to satisfy: the driven class
/// for target-driven kinds, otherwise "anything but the original label".
AdversarialProperty property_for(const AttackResult& result);

struct ThresholdRow {
    double magnitude = 0.0;
    std::size_t label = 0;
    double confidence = 0.0;
    bool retained = false;
};

struct ThresholdReport {
    std::string image_id;
    AttackConfig attack;
    TransformKind kind = TransformKind::crop;
    std::vector<ThresholdRow> rows;
    std::optional<double> threshold;  // first grid magnitude that loses the property
    std::vector<double> confidence_trajectory;
};

/// The grid walk underneath sweep, factored over a classification hook so
/// stub classifiers with analytically known step behavior can exercise the
/// exact threshold bookkeeping. classify(m) returns (label, confidence) for
/// the image transformed at magnitude m.
struct SweepOutcome {
    std::vector<ThresholdRow> rows;
    std::optional<double> threshold;
};
SweepOutcome sweep_grid(const std::vector<double>& grid,
                        const std::function<std::pair<std::size_t, double>(double)>& classify,
                        const AdversarialProperty& property);

/// Walks spec.grid over the adversarial image of a successful result,
/// classifying each transformed image (cropped ones are resized back to the
/// model's input dims) and recording where the property is first lost.
ThresholdReport sweep(const Model& m, const AttackResult& result, const TransformSpec& spec,
                      const AdversarialProperty& property, std::string image_id = "");

/// Bisection on a retained/lost bracket: keeps [lo, hi] with retained(lo)
/// and !retained(hi), halving for `steps` iterations, and returns the final
/// bracket midpoint.
double bisect_boundary(double lo, double hi, std::size_t steps,
                       const std::function<bool(double)>& retained_at);

/// Continuous-magnitude refinement of a sweep threshold. The returned value
/// brackets the first property loss seeded by [lo, hi]; nothing global is
/// claimed when retention is non-monotone past hi. crop has no continuous
/// magnitude and is rejected.
double refine_threshold(const Model& m, const AttackResult& result, TransformKind kind,
                        double lo, double hi, std::size_t steps,
                        const AdversarialProperty& property);

struct DetectionProxyReport {
    std::size_t window = 0;
    std::size_t stride = 1;
    std::vector<std::size_t> window_labels_original;
    std::vector<std::size_t> window_labels_adversarial;
    std::size_t whole_label_original = 0;
    std::size_t whole_label_adversarial = 0;
    std::size_t majority_label_original = 0;
    std::size_t majority_label_adversarial = 0;
    double window_agreement_rate = 0.0;
};

/// Slides a window x window crop over both images at identical positions,
/// classifying each crop after resizing it to the model's input dims. The
/// majority votes break ties toward the lower class index.
DetectionProxyReport detector_proxy(const Model& m, const Image& original,
                                    const Image& adversarial, std::size_t window,
                                    std::size_t stride);

}  // namespace advlab
