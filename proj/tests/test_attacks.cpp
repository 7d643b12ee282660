#include <cmath>
#include <limits>
#include <vector>

#include "advlab/attacks.hpp"
#include "advlab/errors.hpp"
#include "advlab/model.hpp"
#include "advlab/rng.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace advlab;
using namespace advlab::testing;

namespace {

// Two-class softmax over a 1x1x2 input: class-0 logit fixed at 0, class-1
// logit w.x + b. A positive bias keeps the prediction at class 1 around
// (0.5, 0.5) even though w.x is negative there.
Model logistic_model(double w0, double w1, double b1) {
    Model m;
    m.name = "logistic";
    m.input_shape = {1, 1, 2};
    m.num_classes = 2;
    m.layers.push_back(Layer::flatten());
    m.layers.push_back(Layer::dense(Tensor({2, 2}, {0.0, 0.0, w0, w1}), Tensor({2}, {0.0, b1})));
    validate(m);
    return m;
}

Model zero_weight_model(std::size_t classes, std::size_t h, std::size_t w) {
    Model m;
    m.name = "zero";
    m.input_shape = {1, h, w};
    m.num_classes = classes;
    m.layers.push_back(Layer::flatten());
    m.layers.push_back(Layer::dense(Tensor({classes, h * w}, 0.0), Tensor({classes}, 0.0)));
    validate(m);
    return m;
}

Model affine_model(Rng& rng, std::size_t classes, std::size_t dim) {
    Model m;
    m.name = "affine";
    m.input_shape = {1, 1, dim};
    m.num_classes = classes;
    m.layers.push_back(Layer::flatten());
    m.layers.push_back(Layer::dense(random_uniform(rng, {classes, dim}, -1.0, 1.0),
                                    random_uniform(rng, {classes}, -0.5, 0.5)));
    validate(m);
    return m;
}

// Minimum distance from x to any decision boundary of an affine classifier:
// min over k != c of |z_k - z_c| / ||W_k - W_c||.
double affine_min_boundary_distance(const Model& m, const Tensor& x) {
    Prediction p = forward(m, x);
    const Tensor& w = m.layers[1].weights;
    const std::size_t classes = m.num_classes;
    const std::size_t dim = x.numel();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < classes; ++k) {
        if (k == p.predicted) continue;
        double norm2 = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
            const double d = w.at2(k, j) - w.at2(p.predicted, j);
            norm2 += d * d;
        }
        if (norm2 == 0.0) continue;
        const double gap = std::fabs(p.logits.data[k] - p.logits.data[p.predicted]);
        best = std::min(best, gap / std::sqrt(norm2));
    }
    return best;
}

double recomputed_linf(const AttackResult& r) {
    double worst = 0.0;
    for (std::size_t i = 0; i < r.adversarial.pixels.size(); ++i)
        worst = std::max(worst, std::fabs(r.adversarial.pixels[i] - r.original.pixels[i]));
    return worst;
}

}  // namespace

TEST_CASE("attack kind names round-trip") {
    for (AttackKind k : {AttackKind::fgsm, AttackKind::fgsm_targeted, AttackKind::bim,
                         AttackKind::illc, AttackKind::deepfool, AttackKind::cw_l2})
        CHECK(attack_kind_from_string(to_string(k)) == k);
    CHECK_THROWS_AS((void)attack_kind_from_string("gradient_descent"), value_error);
}

TEST_CASE("default configs carry the bundled hyperparameters") {
    AttackConfig f = default_config(AttackKind::fgsm);
    CHECK(f.epsilon == 0.3);
    CHECK(f.alpha == 0.03);
    AttackConfig b = default_config(AttackKind::bim);
    CHECK(b.iterations == 20);
    AttackConfig d = default_config(AttackKind::deepfool);
    CHECK(d.iterations == 50);
    CHECK(d.overshoot == 0.02);
    AttackConfig c = default_config(AttackKind::cw_l2);
    CHECK(c.iterations == 200);
    CHECK(c.c == 1.0);
    CHECK(c.kappa == 0.0);
    CHECK(c.binary_search_steps == 5);
}

TEST_CASE("config validation rejects out-of-range fields") {
    const std::size_t classes = 10;
    AttackConfig c = default_config(AttackKind::fgsm);
    c.epsilon = -0.1;
    CHECK_THROWS_AS(validate(c, classes), value_error);
    c.epsilon = 1.5;
    CHECK_THROWS_AS(validate(c, classes), value_error);
    c = default_config(AttackKind::fgsm);
    c.iterations = 0;
    CHECK_THROWS_AS(validate(c, classes), value_error);
    c = default_config(AttackKind::bim);
    c.alpha = 0.4;  // exceeds epsilon 0.3
    CHECK_THROWS_AS(validate(c, classes), value_error);
    c = default_config(AttackKind::cw_l2);
    c.target = 3;
    c.c = 0.0;
    CHECK_THROWS_AS(validate(c, classes), value_error);
    c = default_config(AttackKind::cw_l2);
    c.target = 3;
    c.kappa = -1.0;
    CHECK_THROWS_AS(validate(c, classes), value_error);
    c = default_config(AttackKind::cw_l2);
    c.target = 3;
    c.binary_search_steps = 0;
    CHECK_THROWS_AS(validate(c, classes), value_error);
}

TEST_CASE("target presence must match the attack kind") {
    AttackConfig c = default_config(AttackKind::fgsm);
    c.target = 1;
    CHECK_THROWS_AS(validate(c, 10), value_error);
    c = default_config(AttackKind::illc);
    c.target = 1;
    CHECK_THROWS_AS(validate(c, 10), value_error);
    c = default_config(AttackKind::fgsm_targeted);
    CHECK_THROWS_AS(validate(c, 10), value_error);
    c.target = 10;
    CHECK_THROWS_AS(validate(c, 10), index_error);
    c.target = 9;
    CHECK_NOTHROW(validate(c, 10));
}

TEST_CASE("fgsm on the logistic example moves (0.5,0.5) to (0.4,0.6)") {
    // Class-1 row (3,-4), bias 1 on class 1 so the prediction is class 1.
    // The input gradient for label 1 is (sigma(z)-1)*(3,-4), so the signed
    // step is (-eps, +eps).
    Model m = logistic_model(3.0, -4.0, 1.0);
    Image img(1, 2, {0.5, 0.5});
    CHECK(forward(m, img).predicted == 1);

    AttackConfig c = default_config(AttackKind::fgsm);
    c.epsilon = 0.1;
    AttackResult r = fgsm(m, img, c);
    CHECK(r.adversarial.pixels[0] == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(r.adversarial.pixels[1] == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(r.original_label == 1);
    CHECK(r.iterations_used == 1);
    CHECK(r.linf_norm == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("fgsm with zero budget returns the image bit-identically") {
    Rng rng(101);
    for (int rep = 0; rep < 5; ++rep) {
        Model m = random_small_model(rng, 8, 8);
        Image img = random_image01(rng, 8, 8);
        AttackConfig c = default_config(AttackKind::fgsm);
        c.epsilon = 0.0;
        AttackResult r = fgsm(m, img, c);
        CHECK(r.adversarial.pixels == img.pixels);
        CHECK_FALSE(r.success);
        CHECK(r.linf_norm == 0.0);
        CHECK(r.l2_norm == 0.0);
    }
}

TEST_CASE("fgsm respects the budget and the unit interval") {
    Rng rng(202);
    for (int rep = 0; rep < 10; ++rep) {
        Model m = random_small_model(rng, 8, 8);
        Image img = random_image01(rng, 8, 8);
        AttackConfig c = default_config(AttackKind::fgsm);
        c.epsilon = 0.05 + 0.3 * rng.uniform01();
        AttackResult r = fgsm(m, img, c);
        CHECK(r.linf_norm <= c.epsilon + 1e-9);
        for (double p : r.adversarial.pixels) {
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
        }
        CHECK(r.linf_norm == doctest::Approx(recomputed_linf(r)).epsilon(1e-12));
    }
}

TEST_CASE("two-class targeted fgsm reproduces the untargeted direction") {
    Model m = logistic_model(3.0, -4.0, 1.0);
    Image img(1, 2, {0.5, 0.5});
    AttackConfig cu = default_config(AttackKind::fgsm);
    cu.epsilon = 0.1;
    AttackResult untargeted = fgsm(m, img, cu);

    AttackConfig ct = default_config(AttackKind::fgsm_targeted);
    ct.kind = AttackKind::fgsm_targeted;
    ct.epsilon = 0.1;
    ct.target = 0;  // the other class
    AttackResult targeted = fgsm_targeted(m, img, ct);

    CHECK(targeted.perturbation.data == untargeted.perturbation.data);
    CHECK(targeted.adversarial.pixels == untargeted.adversarial.pixels);
}

TEST_CASE("fgsm_targeted rejects bad targets") {
    Model m = logistic_model(3.0, -4.0, 1.0);
    Image img(1, 2, {0.5, 0.5});
    AttackConfig c = default_config(AttackKind::fgsm_targeted);
    c.target = 2;
    CHECK_THROWS_AS((void)fgsm_targeted(m, img, c), index_error);
    c.target = 1;  // current prediction
    CHECK_THROWS_AS((void)fgsm_targeted(m, img, c), degenerate_error);
}

TEST_CASE("fgsm_targeted with zero budget leaves the image and fails") {
    Model m = logistic_model(3.0, -4.0, 1.0);
    Image img(1, 2, {0.5, 0.5});
    AttackConfig c = default_config(AttackKind::fgsm_targeted);
    c.epsilon = 0.0;
    c.target = 0;
    AttackResult r = fgsm_targeted(m, img, c);
    CHECK(r.adversarial.pixels == img.pixels);
    CHECK_FALSE(r.success);
    CHECK(r.target_used == std::optional<std::size_t>(0));
}

TEST_CASE("single-step bim with alpha = epsilon equals fgsm exactly") {
    Rng rng(303);
    for (int rep = 0; rep < 8; ++rep) {
        Model m = random_small_model(rng, 8, 8);
        Image img = random_image01(rng, 8, 8);
        const double eps = 0.05 + 0.25 * rng.uniform01();

        AttackConfig cf = default_config(AttackKind::fgsm);
        cf.epsilon = eps;
        AttackResult f = fgsm(m, img, cf);

        AttackConfig cb = default_config(AttackKind::bim);
        cb.epsilon = eps;
        cb.alpha = eps;
        cb.iterations = 1;
        AttackResult b = bim(m, img, cb);

        CHECK(b.adversarial.pixels == f.adversarial.pixels);
        CHECK(b.perturbation.data == f.perturbation.data);
        CHECK(b.iterations_used == 1);
    }
}

TEST_CASE("bim stays inside the projection ball across iterations") {
    Rng rng(404);
    for (int rep = 0; rep < 6; ++rep) {
        Model m = random_small_model(rng, 8, 8);
        Image img = random_image01(rng, 8, 8);
        AttackConfig c = default_config(AttackKind::bim);
        c.epsilon = 0.1 + 0.2 * rng.uniform01();
        c.alpha = c.epsilon / 4.0;
        c.iterations = 12;
        AttackResult r = bim(m, img, c);
        CHECK(r.linf_norm <= c.epsilon + 1e-9);
        CHECK(r.iterations_used >= 1);
        CHECK(r.iterations_used <= c.iterations);
        if (r.success) CHECK(r.adversarial_label != r.original_label);
        for (double p : r.adversarial.pixels) {
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
        }
    }
}

TEST_CASE("bim with zero budget is an exact identity") {
    Rng rng(505);
    Model m = random_small_model(rng, 8, 8);
    Image img = random_image01(rng, 8, 8);
    AttackConfig c = default_config(AttackKind::bim);
    c.epsilon = 0.0;
    c.alpha = 0.0;
    c.iterations = 5;
    AttackResult r = bim(m, img, c);
    CHECK(r.adversarial.pixels == img.pixels);
    CHECK_FALSE(r.success);
}

TEST_CASE("illc descends to the least-likely class on the logistic model") {
    // Prediction 1, least-likely 0. Descending L(x, 0) moves along
    // -sign(p1 * (3,-4)) = (-1, +1); the class-1 logit 0.5 - 7t goes negative
    // after the second 0.05 step.
    Model m = logistic_model(3.0, -4.0, 1.0);
    Image img(1, 2, {0.5, 0.5});
    AttackConfig c = default_config(AttackKind::illc);
    c.epsilon = 0.5;
    c.alpha = 0.05;
    AttackResult r = illc(m, img, c);
    CHECK(r.success);
    CHECK(r.adversarial_label == 0);
    CHECK(r.target_used == std::optional<std::size_t>(0));
    CHECK(r.iterations_used == 2);
    CHECK(r.linf_norm == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("illc on a uniform-output model leaves the image and fails") {
    Model m = zero_weight_model(4, 4, 4);
    Image img(4, 4, 0.25);
    AttackConfig c = default_config(AttackKind::illc);
    AttackResult r = illc(m, img, c);
    CHECK(r.adversarial.pixels == img.pixels);
    CHECK_FALSE(r.success);
    CHECK(r.adversarial_label == r.original_label);
    CHECK(r.target_used == std::optional<std::size_t>(0));
}

TEST_CASE("deepfool_core solves the affine binary example in one step") {
    // z0 = 0, z1 = x.(1,0): boundary at x0 = 0, so from (2,1) the minimal
    // perturbation is (-2,0) with L2 exactly 2.
    Model m;
    m.name = "affine-binary";
    m.input_shape = {1, 1, 2};
    m.num_classes = 2;
    m.layers.push_back(Layer::flatten());
    m.layers.push_back(Layer::dense(Tensor({2, 2}, {0.0, 0.0, 1.0, 0.0}), Tensor({2}, 0.0)));
    validate(m);

    Tensor x({1, 1, 2}, {2.0, 1.0});
    DeepFoolCore core = deepfool_core(m, x, 50, 0.02);
    CHECK(core.iterations_used == 1);
    CHECK(core.label_changed);
    CHECK(core.final_label == 0);
    CHECK(core.pre_overshoot_l2 == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(core.total_step.data[0] == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(core.total_step.data[1] == doctest::Approx(0.0).epsilon(1e-12));
    const double overshoot_l2 =
        std::hypot(1.02 * core.total_step.data[0], 1.02 * core.total_step.data[1]);
    CHECK(overshoot_l2 == doctest::Approx(2.04).epsilon(1e-12));
}

TEST_CASE("deepfool matches the closed-form projection on affine classifiers") {
    Rng rng(606);
    int checked = 0;
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t classes = 3 + rng.index(8);
        const std::size_t dim = 2 + rng.index(31);
        Model m = affine_model(rng, classes, dim);
        Tensor x({1, 1, dim});
        for (double& v : x.data) v = rng.uniform(-2.0, 2.0);
        const double closed_form = affine_min_boundary_distance(m, x);
        if (!std::isfinite(closed_form) || closed_form < 1e-9) continue;
        DeepFoolCore core = deepfool_core(m, x, 50, 0.02);
        CHECK(core.label_changed);
        const double rel = std::fabs(core.pre_overshoot_l2 - closed_form) / closed_form;
        CHECK(rel <= 0.02);
        ++checked;
    }
    CHECK(checked >= 15);
}

TEST_CASE("deepfool clips the overshot image into the unit interval") {
    Rng rng(707);
    for (int rep = 0; rep < 5; ++rep) {
        Model m = random_small_model(rng, 8, 8);
        Image img = random_image01(rng, 8, 8);
        AttackConfig c = default_config(AttackKind::deepfool);
        AttackResult r = deepfool(m, img, c);
        for (double p : r.adversarial.pixels) {
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
        }
        if (r.success) CHECK(r.adversarial_label != r.original_label);
        CHECK(r.iterations_used <= c.iterations);
    }
}

TEST_CASE("deepfool on a zero-gradient model is degenerate") {
    Model m = zero_weight_model(3, 4, 4);
    Image img(4, 4, 0.5);
    AttackConfig c = default_config(AttackKind::deepfool);
    CHECK_THROWS_AS((void)deepfool(m, img, c), degenerate_error);
}

TEST_CASE("cw_l2 reaches an easy target on the logistic model") {
    Model m = logistic_model(3.0, -4.0, 1.0);
    Image img(1, 2, {0.5, 0.5});
    AttackConfig c = default_config(AttackKind::cw_l2);
    c.target = 0;
    AttackResult r = cw_l2(m, img, c);
    CHECK(r.success);
    CHECK(r.adversarial_label == 0);
    CHECK(r.l2_norm > 0.0);
    for (double p : r.adversarial.pixels) {
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
    }
}

TEST_CASE("cw_l2 on an already-target image returns it unchanged") {
    Model m = logistic_model(3.0, -4.0, 1.0);
    Image img(1, 2, {0.5, 0.5});
    AttackConfig c = default_config(AttackKind::cw_l2);
    c.target = 1;  // the current prediction
    AttackResult r = cw_l2(m, img, c);
    CHECK(r.success);
    CHECK(r.adversarial.pixels == img.pixels);
    CHECK(r.l2_norm == 0.0);
    CHECK(r.iterations_used == 0);
}

TEST_CASE("cw_l2 beats the targeted fgsm L2 on the logistic model") {
    Model m = logistic_model(3.0, -4.0, 1.0);
    Image img(1, 2, {0.5, 0.5});

    AttackConfig cf = default_config(AttackKind::fgsm_targeted);
    cf.epsilon = 0.3;
    cf.target = 0;
    AttackResult f = fgsm_targeted(m, img, cf);
    REQUIRE(f.success);

    AttackConfig cc = default_config(AttackKind::cw_l2);
    cc.target = 0;
    AttackResult w = cw_l2(m, img, cc);
    REQUIRE(w.success);
    CHECK(w.l2_norm < f.l2_norm);
}

TEST_CASE("attacks are deterministic run to run") {
    Rng rng(808);
    Model m = random_small_model(rng, 8, 8);
    Image img = random_image01(rng, 8, 8);

    AttackConfig cf = default_config(AttackKind::fgsm);
    CHECK(fgsm(m, img, cf).adversarial.pixels == fgsm(m, img, cf).adversarial.pixels);

    AttackConfig cd = default_config(AttackKind::deepfool);
    CHECK(deepfool(m, img, cd).adversarial.pixels == deepfool(m, img, cd).adversarial.pixels);

    AttackConfig cw = default_config(AttackKind::cw_l2);
    cw.target = (forward(m, img).predicted + 1) % m.num_classes;
    cw.binary_search_steps = 2;
    cw.iterations = 50;
    CHECK(cw_l2(m, img, cw).adversarial.pixels == cw_l2(m, img, cw).adversarial.pixels);
}

TEST_CASE("run_attack dispatches on the config kind") {
    Rng rng(909);
    Model m = random_small_model(rng, 8, 8);
    Image img = random_image01(rng, 8, 8);
    AttackConfig c = default_config(AttackKind::fgsm);
    AttackResult direct = fgsm(m, img, c);
    AttackResult routed = run_attack(m, img, c);
    CHECK(routed.adversarial.pixels == direct.adversarial.pixels);
    CHECK_THROWS_AS((void)bim(m, img, c), value_error);
}

TEST_CASE("result norms agree with the stored arrays") {
    Rng rng(1010);
    Model m = random_small_model(rng, 8, 8);
    Image img = random_image01(rng, 8, 8);
    AttackConfig c = default_config(AttackKind::fgsm);
    AttackResult r = fgsm(m, img, c);

    double linf = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < r.perturbation.data.size(); ++i) {
        const double d = r.adversarial.pixels[i] - r.original.pixels[i];
        CHECK(r.perturbation.data[i] == d);
        linf = std::max(linf, std::fabs(d));
        sq += d * d;
    }
    CHECK(r.linf_norm == linf);
    CHECK(r.l2_norm == doctest::Approx(std::sqrt(sq)).epsilon(1e-12));
    CHECK(r.attack.epsilon == c.epsilon);
}
