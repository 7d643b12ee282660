#include <cmath>
#include <optional>
#include <vector>

#include "advlab/attacks.hpp"
#include "advlab/errors.hpp"
#include "advlab/robustness.hpp"
#include "advlab/rng.hpp"
#include "advlab/transforms.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace advlab;
using namespace advlab::testing;

namespace {

// Class-0 logit 0, class-1 logit 3a - 4b + 1.5 over pixels (a, b). Predicts
// 1 at (0.5, 0.5); FGSM at eps 0.3 lands on (0.2, 0.8) which it labels 0;
// brightening that point flips it back at factor 25/6 exactly.
Model boundary_model() {
    Model m;
    m.name = "boundary";
    m.input_shape = {1, 1, 2};
    m.num_classes = 2;
    m.layers.push_back(Layer::flatten());
    m.layers.push_back(
        Layer::dense(Tensor({2, 2}, {0.0, 0.0, 3.0, -4.0}), Tensor({2}, {0.0, 1.5})));
    validate(m);
    return m;
}

AttackResult boundary_adversarial(const Model& m) {
    AttackConfig c = default_config(AttackKind::fgsm);
    c.epsilon = 0.3;
    return fgsm(m, Image(1, 2, {0.5, 0.5}), c);
}

}  // namespace

TEST_CASE("property predicates follow their definitions") {
    Model m = boundary_model();
    Image img(1, 2, {0.5, 0.5});  // labeled 1
    CHECK(holds(AdversarialProperty::targeted(1), m, img));
    CHECK_FALSE(holds(AdversarialProperty::targeted(0), m, img));
    CHECK_FALSE(holds(AdversarialProperty::untargeted(1), m, img));
    CHECK(holds(AdversarialProperty::untargeted(0), m, img));
}

TEST_CASE("property_for mirrors the attack's driving class") {
    Model m = boundary_model();
    AttackResult r = boundary_adversarial(m);
    AdversarialProperty p = property_for(r);
    CHECK(p.mode == AdversarialProperty::Mode::untargeted);
    CHECK(p.class_index == r.original_label);

    AttackConfig ct = default_config(AttackKind::fgsm_targeted);
    ct.epsilon = 0.3;
    ct.target = 0;
    AttackResult rt = fgsm_targeted(m, Image(1, 2, {0.5, 0.5}), ct);
    AdversarialProperty pt = property_for(rt);
    CHECK(pt.mode == AdversarialProperty::Mode::targeted);
    CHECK(pt.class_index == 0);
}

TEST_CASE("sweep_grid walks the stub step function exactly") {
    // Retained iff magnitude < 3 over grid 0..10: threshold 3, rows 0..2
    // retained.
    std::vector<double> grid;
    for (int g = 0; g <= 10; ++g) grid.push_back(g);
    AdversarialProperty prop = AdversarialProperty::untargeted(0);
    SweepOutcome out = sweep_grid(
        grid,
        [](double m) { return std::pair<std::size_t, double>(m < 3.0 ? 1 : 0, 0.5); }, prop);
    REQUIRE(out.rows.size() == 11);
    REQUIRE(out.threshold.has_value());
    CHECK(*out.threshold == 3.0);
    for (std::size_t i = 0; i < out.rows.size(); ++i) {
        CHECK(out.rows[i].magnitude == grid[i]);
        CHECK(out.rows[i].retained == (i < 3));
    }
}

TEST_CASE("sweep_grid threshold equals brute force on randomized stubs") {
    Rng rng(1111);
    std::vector<double> grid;
    for (int g = 0; g <= 10; ++g) grid.push_back(g);
    AdversarialProperty prop = AdversarialProperty::untargeted(0);
    for (int rep = 0; rep < 60; ++rep) {
        std::vector<bool> retained(grid.size());
        retained[0] = true;
        for (std::size_t i = 1; i < grid.size(); ++i) retained[i] = rng.uniform01() < 0.55;

        SweepOutcome out = sweep_grid(
            grid,
            [&](double m) {
                const std::size_t idx = static_cast<std::size_t>(m);
                return std::pair<std::size_t, double>(retained[idx] ? 1 : 0, 0.25);
            },
            prop);

        std::optional<double> expected;
        for (std::size_t i = 0; i < grid.size(); ++i)
            if (!retained[i]) {
                expected = grid[i];
                break;
            }
        CHECK(out.threshold == expected);
        for (std::size_t i = 0; i < grid.size(); ++i)
            CHECK(out.rows[i].retained == retained[i]);
    }
}

TEST_CASE("sweep finds the analytic brightness threshold") {
    Model m = boundary_model();
    AttackResult r = boundary_adversarial(m);
    REQUIRE(r.success);

    TransformSpec spec;
    spec.kind = TransformKind::brightness;
    spec.grid = {1.0, 2.0, 4.0, 4.5, 5.0};  // property flips at 25/6 ~ 4.167
    ThresholdReport report = sweep(m, r, spec, property_for(r), "pair-0");

    REQUIRE(report.rows.size() == 5);
    CHECK(report.image_id == "pair-0");
    CHECK(report.kind == TransformKind::brightness);
    CHECK(report.rows[0].retained);
    CHECK(report.rows[0].label == r.adversarial_label);
    CHECK(report.rows[1].retained);
    CHECK(report.rows[2].retained);
    CHECK_FALSE(report.rows[3].retained);
    CHECK_FALSE(report.rows[4].retained);
    REQUIRE(report.threshold.has_value());
    CHECK(*report.threshold == 4.5);
    REQUIRE(report.confidence_trajectory.size() == 5);
    for (std::size_t i = 0; i < 5; ++i)
        CHECK(report.confidence_trajectory[i] == report.rows[i].confidence);
}

TEST_CASE("sweep with an identity-only grid reports no threshold") {
    Model m = boundary_model();
    AttackResult r = boundary_adversarial(m);
    TransformSpec spec;
    spec.kind = TransformKind::brightness;
    spec.grid = {1.0};
    ThresholdReport report = sweep(m, r, spec, property_for(r));
    CHECK(report.rows.size() == 1);
    CHECK(report.rows[0].retained);
    CHECK_FALSE(report.threshold.has_value());
}

TEST_CASE("sweep rejects unsuccessful results") {
    Model m = boundary_model();
    AttackConfig c = default_config(AttackKind::fgsm);
    c.epsilon = 0.0;
    AttackResult r = fgsm(m, Image(1, 2, {0.5, 0.5}), c);
    REQUIRE_FALSE(r.success);
    TransformSpec spec;
    spec.kind = TransformKind::brightness;
    spec.grid = {1.0, 1.5};
    CHECK_THROWS_AS((void)sweep(m, r, spec, property_for(r)), value_error);
}

TEST_CASE("sweep resizes cropped images back through the model") {
    Rng rng(1212);
    for (int rep = 0; rep < 12; ++rep) {
        Model m = random_small_model(rng, 8, 8);
        Image img = random_image01(rng, 8, 8);
        AttackConfig c = default_config(AttackKind::fgsm);
        AttackResult r = fgsm(m, img, c);
        if (!r.success) continue;

        TransformSpec spec;
        spec.kind = TransformKind::crop;
        spec.grid = {0, 1, 2, 3, 4};
        ThresholdReport report = sweep(m, r, spec, property_for(r));
        REQUIRE(report.rows.size() == 5);
        CHECK(report.rows[0].retained);
        CHECK(report.rows[0].label == r.adversarial_label);
        if (report.threshold.has_value()) {
            bool seen = false;
            for (const ThresholdRow& row : report.rows) {
                if (row.magnitude == *report.threshold) {
                    CHECK_FALSE(row.retained);
                    seen = true;
                    break;
                }
                CHECK(row.retained);
            }
            CHECK(seen);
        } else {
            for (const ThresholdRow& row : report.rows) CHECK(row.retained);
        }
        return;  // one successful sweep is enough
    }
    FAIL("no successful fgsm result found to sweep");
}

TEST_CASE("bisect_boundary recovers an analytic step within bracket width") {
    const double found =
        bisect_boundary(0.0, 5.0, 20, [](double magnitude) { return magnitude < 2.5; });
    CHECK(std::fabs(found - 2.5) <= 5.0 * std::pow(0.5, 20));
}

TEST_CASE("bisect_boundary validates its bracket") {
    auto never = [](double) { return false; };
    auto always = [](double) { return true; };
    CHECK_THROWS_AS((void)bisect_boundary(0.0, 1.0, 4, never), value_error);
    CHECK_THROWS_AS((void)bisect_boundary(0.0, 1.0, 4, always), value_error);
    CHECK_THROWS_AS((void)bisect_boundary(1.0, 1.0, 4, always), value_error);
}

TEST_CASE("refine_threshold pins the brightness boundary at 25/6") {
    Model m = boundary_model();
    AttackResult r = boundary_adversarial(m);
    REQUIRE(r.success);
    const double refined =
        refine_threshold(m, r, TransformKind::brightness, 1.0, 5.0, 20, property_for(r));
    CHECK(std::fabs(refined - 25.0 / 6.0) <= 4.0 * std::pow(0.5, 20) + 1e-12);
}

TEST_CASE("refine_threshold rejects crop and broken brackets") {
    Model m = boundary_model();
    AttackResult r = boundary_adversarial(m);
    CHECK_THROWS_AS(
        (void)refine_threshold(m, r, TransformKind::crop, 0.0, 4.0, 8, property_for(r)),
        value_error);
    // Property still retained at brightness 2, so [1, 2] is not a bracket.
    CHECK_THROWS_AS(
        (void)refine_threshold(m, r, TransformKind::brightness, 1.0, 2.0, 8, property_for(r)),
        value_error);
}

TEST_CASE("detector_proxy of an image against itself agrees everywhere") {
    Rng rng(1313);
    Model m = random_small_model(rng, 8, 8);
    Image img = random_image01(rng, 8, 8);
    DetectionProxyReport rep = detector_proxy(m, img, img, 4, 2);
    CHECK(rep.window_agreement_rate == 1.0);
    CHECK(rep.majority_label_original == rep.majority_label_adversarial);
    CHECK(rep.window_labels_original == rep.window_labels_adversarial);
    CHECK(rep.window_labels_original.size() == 9);  // ((8-4)/2+1)^2
}

TEST_CASE("detector_proxy with a full-image window reduces to whole-image labels") {
    Rng rng(1414);
    Model m = random_small_model(rng, 8, 8);
    Image a = random_image01(rng, 8, 8);
    Image b = random_image01(rng, 8, 8);
    DetectionProxyReport rep = detector_proxy(m, a, b, 8, 1);
    REQUIRE(rep.window_labels_original.size() == 1);
    CHECK(rep.window_labels_original[0] == rep.whole_label_original);
    CHECK(rep.window_labels_adversarial[0] == rep.whole_label_adversarial);
    CHECK((rep.window_agreement_rate == 1.0) ==
          (rep.whole_label_original == rep.whole_label_adversarial));
}

TEST_CASE("detector_proxy agreement is symmetric in its image arguments") {
    Rng rng(1515);
    Model m = random_small_model(rng, 8, 8);
    Image a = random_image01(rng, 8, 8);
    Image b = random_image01(rng, 8, 8);
    DetectionProxyReport ab = detector_proxy(m, a, b, 5, 1);
    DetectionProxyReport ba = detector_proxy(m, b, a, 5, 1);
    CHECK(ab.window_agreement_rate == ba.window_agreement_rate);
    CHECK(ab.majority_label_original == ba.majority_label_adversarial);
}

TEST_CASE("detector_proxy validates window and stride") {
    Rng rng(1616);
    Model m = random_small_model(rng, 8, 8);
    Image img = random_image01(rng, 8, 8);
    CHECK_THROWS_AS((void)detector_proxy(m, img, img, 9, 1), value_error);
    CHECK_THROWS_AS((void)detector_proxy(m, img, img, 0, 1), value_error);
    CHECK_THROWS_AS((void)detector_proxy(m, img, img, 4, 0), value_error);
    Image other(9, 9, 0.5);
    CHECK_THROWS_AS((void)detector_proxy(m, img, other, 4, 1), value_error);
}
