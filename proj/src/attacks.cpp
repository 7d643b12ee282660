#include "advlab/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "advlab/errors.hpp"

namespace advlab {

namespace {

// sign(0) is 0, so zero-gradient pixels are left untouched.
double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

double linf_of(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

double l2_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

void expect_kind(const AttackConfig& config, AttackKind kind, const char* op) {
    if (config.kind != kind)
        throw value_error(std::string(op) + " called with a config of kind " +
                          to_string(config.kind));
}

bool success_for(AttackKind kind, std::size_t original_label, std::size_t adversarial_label,
                 std::optional<std::size_t> target_used) {
    switch (kind) {
        case AttackKind::fgsm:
        case AttackKind::bim:
        case AttackKind::deepfool:
            return adversarial_label != original_label;
        case AttackKind::fgsm_targeted:
        case AttackKind::cw_l2:
            return target_used.has_value() && adversarial_label == *target_used;
        case AttackKind::illc:
            // Reaching a least-likely target that was already the prediction
            // (possible on tie-heavy outputs) is not a fooling event.
            return target_used.has_value() && adversarial_label == *target_used &&
                   adversarial_label != original_label;
    }
    throw value_error("unknown attack kind");
}

AttackResult finish(const Model& m, const Image& original, Image adversarial,
                    const AttackConfig& config, std::size_t iterations_used,
                    std::optional<std::size_t> target_used, const Prediction& orig_pred) {
    AttackResult r;
    r.original = original;
    r.adversarial = std::move(adversarial);
    Tensor adv_t = to_tensor(r.adversarial);
    Tensor orig_t = to_tensor(r.original);
    r.perturbation = adv_t;
    for (std::size_t i = 0; i < r.perturbation.data.size(); ++i)
        r.perturbation.data[i] -= orig_t.data[i];
    Prediction adv_pred = forward(m, adv_t);
    r.original_label = orig_pred.predicted;
    r.original_conf = orig_pred.confidence;
    r.adversarial_label = adv_pred.predicted;
    r.adversarial_conf = adv_pred.confidence;
    r.success = success_for(config.kind, r.original_label, r.adversarial_label, target_used);
    r.linf_norm = linf_of(r.perturbation.data);
    r.l2_norm = l2_of(r.perturbation.data);
    r.iterations_used = iterations_used;
    r.target_used = target_used;
    r.attack = config;
    return r;
}

// One-hot difference seed e_k - e_c for per-class logit gradients.
Tensor class_pair_seed(std::size_t num_classes, std::size_t k, std::size_t c) {
    Tensor seed({num_classes}, 0.0);
    seed.data[k] += 1.0;
    seed.data[c] -= 1.0;
    return seed;
}

// clamp(v, x - eps, x + eps) elementwise. For v already inside [0,1] the
// result stays inside [0,1] because x is.
void project_ball(Tensor& v, const Tensor& x, double eps) {
    for (std::size_t i = 0; i < v.data.size(); ++i) {
        const double lo = x.data[i] - eps;
        const double hi = x.data[i] + eps;
        v.data[i] = std::min(std::max(v.data[i], lo), hi);
    }
}

}  // namespace

std::string to_string(AttackKind kind) {
    switch (kind) {
        case AttackKind::fgsm: return "fgsm";
        case AttackKind::fgsm_targeted: return "fgsm_targeted";
        case AttackKind::bim: return "bim";
        case AttackKind::illc: return "illc";
        case AttackKind::deepfool: return "deepfool";
        case AttackKind::cw_l2: return "cw_l2";
    }
    throw value_error("unknown attack kind");
}

AttackKind attack_kind_from_string(std::string_view name) {
    if (name == "fgsm") return AttackKind::fgsm;
    if (name == "fgsm_targeted") return AttackKind::fgsm_targeted;
    if (name == "bim") return AttackKind::bim;
    if (name == "illc") return AttackKind::illc;
    if (name == "deepfool") return AttackKind::deepfool;
    if (name == "cw_l2") return AttackKind::cw_l2;
    throw value_error("unknown attack kind '" + std::string(name) + "'");
}

bool is_targeted(AttackKind kind) {
    return kind == AttackKind::fgsm_targeted || kind == AttackKind::cw_l2;
}

AttackConfig default_config(AttackKind kind) {
    AttackConfig c;
    c.kind = kind;
    c.epsilon = 0.3;
    c.alpha = c.epsilon / 10.0;
    c.iterations = (kind == AttackKind::deepfool) ? 50 : (kind == AttackKind::cw_l2 ? 200 : 20);
    c.overshoot = 0.02;
    c.c = 1.0;
    c.kappa = 0.0;
    c.binary_search_steps = 5;
    return c;
}

void validate(const AttackConfig& config, std::size_t num_classes) {
    if (!std::isfinite(config.epsilon) || config.epsilon < 0.0 || config.epsilon > 1.0)
        throw value_error("attack epsilon must lie in [0, 1]");
    if (!std::isfinite(config.alpha) || config.alpha < 0.0)
        throw value_error("attack alpha must be >= 0");
    if (config.iterations == 0) throw value_error("attack iterations must be >= 1");
    if (!std::isfinite(config.overshoot) || config.overshoot < 0.0)
        throw value_error("attack overshoot must be >= 0");
    if (!std::isfinite(config.c) || config.c <= 0.0)
        throw value_error("attack c must be > 0");
    if (!std::isfinite(config.kappa) || config.kappa < 0.0)
        throw value_error("attack kappa must be >= 0");
    if (config.binary_search_steps == 0)
        throw value_error("attack binary_search_steps must be >= 1");
    if (is_targeted(config.kind)) {
        if (!config.target.has_value())
            throw value_error(to_string(config.kind) + " requires a target class");
        if (*config.target >= num_classes)
            throw index_error("target class " + std::to_string(*config.target) +
                              " out of range for " + std::to_string(num_classes) + " classes");
    } else if (config.target.has_value()) {
        throw value_error(to_string(config.kind) + " does not take a target class");
    }
    if ((config.kind == AttackKind::bim || config.kind == AttackKind::illc) &&
        config.alpha > config.epsilon)
        throw value_error("attack alpha must not exceed epsilon");
}

AttackResult fgsm(const Model& m, const Image& image, const AttackConfig& config) {
    expect_kind(config, AttackKind::fgsm, "fgsm");
    validate(config, m.num_classes);
    Tensor x = to_tensor(image);
    Prediction orig = forward(m, x);
    LossGrad lg = loss_and_input_gradient(m, x, orig.predicted);
    Tensor adv = x;
    for (std::size_t i = 0; i < adv.data.size(); ++i)
        adv.data[i] = clip01(x.data[i] + config.epsilon * sign(lg.grad.data[i]));
    return finish(m, image, from_tensor(adv), config, 1, std::nullopt, orig);
}

AttackResult fgsm_targeted(const Model& m, const Image& image, const AttackConfig& config) {
    expect_kind(config, AttackKind::fgsm_targeted, "fgsm_targeted");
    validate(config, m.num_classes);
    Tensor x = to_tensor(image);
    Prediction orig = forward(m, x);
    const std::size_t target = *config.target;
    if (target == orig.predicted)
        throw degenerate_error("target class " + std::to_string(target) +
                               " is already the predicted class");
    LossGrad lg = loss_and_input_gradient(m, x, target);
    Tensor adv = x;
    for (std::size_t i = 0; i < adv.data.size(); ++i)
        adv.data[i] = clip01(x.data[i] - config.epsilon * sign(lg.grad.data[i]));
    return finish(m, image, from_tensor(adv), config, 1, target, orig);
}

AttackResult bim(const Model& m, const Image& image, const AttackConfig& config) {
    expect_kind(config, AttackKind::bim, "bim");
    validate(config, m.num_classes);
    Tensor x = to_tensor(image);
    Prediction orig = forward(m, x);
    Tensor cur = x;
    std::size_t used = 0;
    for (std::size_t it = 0; it < config.iterations; ++it) {
        LossGrad lg = loss_and_input_gradient(m, cur, orig.predicted);
        for (std::size_t i = 0; i < cur.data.size(); ++i)
            cur.data[i] = clip01(cur.data[i] + config.alpha * sign(lg.grad.data[i]));
        project_ball(cur, x, config.epsilon);
        ++used;
        if (forward(m, cur).predicted != orig.predicted) break;
    }
    return finish(m, image, from_tensor(cur), config, used, std::nullopt, orig);
}

AttackResult illc(const Model& m, const Image& image, const AttackConfig& config) {
    expect_kind(config, AttackKind::illc, "illc");
    validate(config, m.num_classes);
    Tensor x = to_tensor(image);
    Prediction orig = forward(m, x);
    const std::size_t target = least_likely_class(m, x);
    Tensor cur = x;
    std::size_t used = 0;
    for (std::size_t it = 0; it < config.iterations; ++it) {
        LossGrad lg = loss_and_input_gradient(m, cur, target);
        for (std::size_t i = 0; i < cur.data.size(); ++i)
            cur.data[i] = clip01(cur.data[i] - config.alpha * sign(lg.grad.data[i]));
        project_ball(cur, x, config.epsilon);
        ++used;
        if (forward(m, cur).predicted == target) break;
    }
    return finish(m, image, from_tensor(cur), config, used, target, orig);
}

DeepFoolCore deepfool_core(const Model& m, const Tensor& x, std::size_t iterations,
                           double overshoot) {
    Prediction p0 = forward(m, x);
    const std::size_t c = p0.predicted;
    const std::size_t classes = m.num_classes;

    DeepFoolCore out;
    out.total_step = Tensor(x.shape, 0.0);
    out.final_label = c;

    Tensor work = x;
    while (out.iterations_used < iterations) {
        Prediction p = forward(m, work);
        out.final_label = p.predicted;
        if (p.predicted != c) {
            out.label_changed = true;
            break;
        }
        double best_ratio = std::numeric_limits<double>::infinity();
        double best_f = 0.0;
        double best_norm2 = 0.0;
        Tensor best_w;
        for (std::size_t k = 0; k < classes; ++k) {
            if (k == c) continue;
            Tensor w = input_gradient_from_logit_seed(m, work, class_pair_seed(classes, k, c));
            const double wn = l2_of(w.data);
            if (wn < 1e-12) continue;
            const double f = p.logits.data[k] - p.logits.data[c];
            const double ratio = std::fabs(f) / wn;
            if (ratio < best_ratio) {
                best_ratio = ratio;
                best_f = f;
                best_norm2 = wn * wn;
                best_w = std::move(w);
            }
        }
        if (best_w.data.empty())
            throw degenerate_error("deepfool: every competing logit gradient vanishes");
        const double scale = std::fabs(best_f) / best_norm2;
        for (std::size_t i = 0; i < out.total_step.data.size(); ++i)
            out.total_step.data[i] += scale * best_w.data[i];
        ++out.iterations_used;
        for (std::size_t i = 0; i < work.data.size(); ++i)
            work.data[i] = x.data[i] + (1.0 + overshoot) * out.total_step.data[i];
    }
    if (!out.label_changed) {
        Prediction p = forward(m, work);
        out.final_label = p.predicted;
        out.label_changed = p.predicted != c;
    }
    out.pre_overshoot_l2 = l2_of(out.total_step.data);
    return out;
}

AttackResult deepfool(const Model& m, const Image& image, const AttackConfig& config) {
    expect_kind(config, AttackKind::deepfool, "deepfool");
    validate(config, m.num_classes);
    Tensor x = to_tensor(image);
    Prediction orig = forward(m, x);
    DeepFoolCore core = deepfool_core(m, x, config.iterations, config.overshoot);
    Tensor adv = x;
    for (std::size_t i = 0; i < adv.data.size(); ++i)
        adv.data[i] = clip01(x.data[i] + (1.0 + config.overshoot) * core.total_step.data[i]);
    return finish(m, image, from_tensor(adv), config, core.iterations_used, std::nullopt, orig);
}

AttackResult cw_l2(const Model& m, const Image& image, const AttackConfig& config) {
    expect_kind(config, AttackKind::cw_l2, "cw_l2");
    validate(config, m.num_classes);
    Tensor x = to_tensor(image);
    Prediction orig = forward(m, x);
    const std::size_t target = *config.target;

    // Already classified as the target: the zero perturbation is the global
    // optimum, so the original image comes back with success set.
    if (orig.predicted == target)
        return finish(m, image, image, config, 0, target, orig);

    constexpr double kStep = 0.01;
    constexpr double kCeiling = 1e6;
    constexpr double kAtanhClamp = 1.0 - 1e-6;

    Tensor v0(x.shape, 0.0);
    for (std::size_t i = 0; i < x.data.size(); ++i) {
        const double t = std::clamp(2.0 * x.data[i] - 1.0, -kAtanhClamp, kAtanhClamp);
        v0.data[i] = std::atanh(t);
    }

    double c_cur = config.c;
    double c_fail = 1e-3;  // search floor; raised to the largest c seen failing
    double c_ok = -1.0;    // lowest c seen succeeding, unset until then
    double best_l2 = std::numeric_limits<double>::infinity();
    Tensor best_adv;
    std::size_t total_steps = 0;

    for (std::size_t round = 0; round < config.binary_search_steps; ++round) {
        Tensor v = v0;
        Tensor xp(x.shape, 0.0);
        bool round_success = false;

        auto evaluate = [&](Prediction& p, double& dist) {
            for (std::size_t i = 0; i < xp.data.size(); ++i)
                xp.data[i] = (std::tanh(v.data[i]) + 1.0) / 2.0;
            p = forward(m, xp);
            dist = 0.0;
            for (std::size_t i = 0; i < xp.data.size(); ++i) {
                const double d = xp.data[i] - x.data[i];
                dist += d * d;
            }
            if (p.predicted == target) {
                round_success = true;
                const double l2 = std::sqrt(dist);
                if (l2 < best_l2) {
                    best_l2 = l2;
                    best_adv = xp;
                }
            }
        };

        for (std::size_t step = 0; step < config.iterations; ++step) {
            Prediction p;
            double dist = 0.0;
            evaluate(p, dist);

            // max_{i != t} z_i, ties to the lower index
            std::size_t rival = target == 0 ? 1 : 0;
            for (std::size_t i = 0; i < m.num_classes; ++i) {
                if (i == target) continue;
                if (p.logits.data[i] > p.logits.data[rival]) rival = i;
            }
            const double margin = p.logits.data[rival] - p.logits.data[target];
            const double objective = dist + c_cur * std::max(margin, -config.kappa);
            if (!std::isfinite(objective))
                throw numeric_error("cw_l2 objective became non-finite");

            Tensor gx(x.shape, 0.0);
            for (std::size_t i = 0; i < gx.data.size(); ++i)
                gx.data[i] = 2.0 * (xp.data[i] - x.data[i]);
            if (margin > -config.kappa) {
                Tensor gz = input_gradient_from_logit_seed(
                    m, xp, class_pair_seed(m.num_classes, rival, target));
                for (std::size_t i = 0; i < gx.data.size(); ++i)
                    gx.data[i] += c_cur * gz.data[i];
            }
            for (std::size_t i = 0; i < v.data.size(); ++i) {
                const double t = 2.0 * xp.data[i] - 1.0;  // tanh(v[i])
                v.data[i] -= kStep * gx.data[i] * (1.0 - t * t) / 2.0;
            }
            ++total_steps;
        }
        {
            Prediction p;
            double dist = 0.0;
            evaluate(p, dist);
        }

        if (round_success) {
            c_ok = c_cur;
            c_cur = std::sqrt(c_fail * c_ok);
        } else {
            c_fail = c_cur;
            c_cur = c_ok > 0.0 ? std::sqrt(c_fail * c_ok) : std::min(c_cur * 10.0, kCeiling);
        }
    }

    if (best_adv.data.empty())
        return finish(m, image, image, config, total_steps, target, orig);
    return finish(m, image, from_tensor(best_adv), config, total_steps, target, orig);
}

AttackResult run_attack(const Model& m, const Image& image, const AttackConfig& config) {
    switch (config.kind) {
        case AttackKind::fgsm: return fgsm(m, image, config);
        case AttackKind::fgsm_targeted: return fgsm_targeted(m, image, config);
        case AttackKind::bim: return bim(m, image, config);
        case AttackKind::illc: return illc(m, image, config);
        case AttackKind::deepfool: return deepfool(m, image, config);
        case AttackKind::cw_l2: return cw_l2(m, image, config);
    }
    throw value_error("unknown attack kind");
}

}  // namespace advlab
