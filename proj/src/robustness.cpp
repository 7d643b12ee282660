#include "advlab/robustness.hpp"

#include <algorithm>
#include <cmath>

#include "advlab/errors.hpp"

namespace advlab {

namespace {

Image classify_sized(const Model& m, const Image& img, Prediction& out) {
    Image sized = img;
    const std::size_t mh = m.input_shape[1];
    const std::size_t mw = m.input_shape[2];
    if (img.height != mh || img.width != mw) sized = resize_to(img, mh, mw);
    out = forward(m, sized);
    return sized;
}

std::size_t majority_label(const std::vector<std::size_t>& labels, std::size_t num_classes) {
    std::vector<std::size_t> counts(num_classes, 0);
    for (std::size_t l : labels) ++counts[l];
    std::size_t best = 0;
    for (std::size_t k = 1; k < num_classes; ++k)
        if (counts[k] > counts[best]) best = k;  // ties keep the lower index
    return best;
}

}  // namespace

bool holds(const AdversarialProperty& property, std::size_t label) {
    return property.mode == AdversarialProperty::Mode::targeted
               ? label == property.class_index
               : label != property.class_index;
}

bool holds(const AdversarialProperty& property, const Model& m, const Image& img) {
    Prediction p;
    classify_sized(m, img, p);
    return holds(property, p.predicted);
}

AdversarialProperty property_for(const AttackResult& result) {
    if (result.target_used.has_value())
        return AdversarialProperty::targeted(*result.target_used);
    return AdversarialProperty::untargeted(result.original_label);
}

SweepOutcome sweep_grid(const std::vector<double>& grid,
                        const std::function<std::pair<std::size_t, double>(double)>& classify,
                        const AdversarialProperty& property) {
    SweepOutcome out;
    out.rows.reserve(grid.size());
    for (double magnitude : grid) {
        const auto [label, confidence] = classify(magnitude);
        const bool retained = holds(property, label);
        out.rows.push_back({magnitude, label, confidence, retained});
        if (!retained && !out.threshold.has_value()) out.threshold = magnitude;
    }
    return out;
}

ThresholdReport sweep(const Model& m, const AttackResult& result, const TransformSpec& spec,
                      const AdversarialProperty& property, std::string image_id) {
    if (!result.success)
        throw value_error("sweep requires a successful attack result (nothing to lose)");
    validate(spec);
    if (!holds(property, m, result.adversarial))
        throw value_error("property does not hold on the untransformed adversarial image");

    const Dims hint{m.input_shape[1], m.input_shape[2]};
    SweepOutcome outcome = sweep_grid(
        spec.grid,
        [&](double magnitude) {
            Image transformed = apply(spec.kind, magnitude, result.adversarial, hint);
            Prediction p;
            classify_sized(m, transformed, p);
            return std::pair<std::size_t, double>(p.predicted, p.confidence);
        },
        property);

    ThresholdReport report;
    report.image_id = std::move(image_id);
    report.attack = result.attack;
    report.kind = spec.kind;
    report.rows = std::move(outcome.rows);
    report.threshold = outcome.threshold;
    report.confidence_trajectory.reserve(report.rows.size());
    for (const ThresholdRow& row : report.rows)
        report.confidence_trajectory.push_back(row.confidence);
    return report;
}

double bisect_boundary(double lo, double hi, std::size_t steps,
                       const std::function<bool(double)>& retained_at) {
    if (!(lo < hi)) throw value_error("bisection bracket requires lo < hi");
    if (!retained_at(lo)) throw value_error("property already lost at the low bracket");
    if (retained_at(hi)) throw value_error("property still retained at the high bracket");
    for (std::size_t i = 0; i < steps; ++i) {
        const double mid = (lo + hi) / 2.0;
        if (retained_at(mid))
            lo = mid;
        else
            hi = mid;
    }
    return (lo + hi) / 2.0;
}

double refine_threshold(const Model& m, const AttackResult& result, TransformKind kind,
                        double lo, double hi, std::size_t steps,
                        const AdversarialProperty& property) {
    if (kind == TransformKind::crop)
        throw value_error("crop has no continuous magnitude to refine");
    const Dims hint{m.input_shape[1], m.input_shape[2]};
    return bisect_boundary(lo, hi, steps, [&](double magnitude) {
        Image transformed = apply(kind, magnitude, result.adversarial, hint);
        return holds(property, m, transformed);
    });
}

DetectionProxyReport detector_proxy(const Model& m, const Image& original,
                                    const Image& adversarial, std::size_t window,
                                    std::size_t stride) {
    if (original.height != adversarial.height || original.width != adversarial.width ||
        original.channels != adversarial.channels)
        throw value_error("detector_proxy images must share dimensions");
    if (window == 0) throw value_error("window must be >= 1");
    if (window > std::min(original.height, original.width))
        throw value_error("window " + std::to_string(window) + " exceeds image dims " +
                          std::to_string(original.height) + "x" + std::to_string(original.width));
    if (stride == 0) throw value_error("stride must be >= 1");

    DetectionProxyReport report;
    report.window = window;
    report.stride = stride;

    auto classify_window = [&](const Image& img, std::size_t top, std::size_t left) {
        Image patch = crop(img, static_cast<int>(top),
                           static_cast<int>(img.height - top - window), static_cast<int>(left),
                           static_cast<int>(img.width - left - window));
        Prediction p;
        classify_sized(m, patch, p);
        return p.predicted;
    };

    std::size_t agree = 0;
    for (std::size_t top = 0; top + window <= original.height; top += stride) {
        for (std::size_t left = 0; left + window <= original.width; left += stride) {
            const std::size_t lo = classify_window(original, top, left);
            const std::size_t la = classify_window(adversarial, top, left);
            report.window_labels_original.push_back(lo);
            report.window_labels_adversarial.push_back(la);
            if (lo == la) ++agree;
        }
    }

    Prediction po, pa;
    classify_sized(m, original, po);
    classify_sized(m, adversarial, pa);
    report.whole_label_original = po.predicted;
    report.whole_label_adversarial = pa.predicted;
    report.majority_label_original = majority_label(report.window_labels_original, m.num_classes);
    report.majority_label_adversarial =
        majority_label(report.window_labels_adversarial, m.num_classes);
    report.window_agreement_rate =
        static_cast<double>(agree) / static_cast<double>(report.window_labels_original.size());
    return report;
}

}  // namespace advlab
