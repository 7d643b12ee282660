#include "advlab/report.hpp"

#include <cmath>
#include <cstdio>
#include <set>

#include "advlab/errors.hpp"

namespace advlab {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string format_double(double v) {
    if (!std::isfinite(v)) throw numeric_error("report contains a non-finite number");
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

bool is_scalar(const ordered_json& v) {
    return v.is_null() || v.is_boolean() || v.is_number() || v.is_string();
}

void write_value(std::string& out, const ordered_json& v, int depth) {
    const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    const std::string inner(static_cast<std::size_t>(depth + 1) * 2, ' ');
    switch (v.type()) {
        case ordered_json::value_t::null:
            out += "null";
            return;
        case ordered_json::value_t::boolean:
            out += v.get<bool>() ? "true" : "false";
            return;
        case ordered_json::value_t::number_integer:
            out += std::to_string(v.get<std::int64_t>());
            return;
        case ordered_json::value_t::number_unsigned:
            out += std::to_string(v.get<std::uint64_t>());
            return;
        case ordered_json::value_t::number_float:
            out += format_double(v.get<double>());
            return;
        case ordered_json::value_t::string:
            out += v.dump();  // quoting and escaping
            return;
        case ordered_json::value_t::array: {
            if (v.empty()) {
                out += "[]";
                return;
            }
            bool flat = true;
            for (const auto& item : v)
                if (!is_scalar(item)) {
                    flat = false;
                    break;
                }
            if (flat) {  // scalar rows (pixels, labels, grids) stay on one line
                out += "[";
                for (std::size_t i = 0; i < v.size(); ++i) {
                    if (i) out += ", ";
                    write_value(out, v[i], 0);
                }
                out += "]";
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < v.size(); ++i) {
                out += inner;
                write_value(out, v[i], depth + 1);
                if (i + 1 < v.size()) out += ",";
                out += "\n";
            }
            out += pad + "]";
            return;
        }
        case ordered_json::value_t::object: {
            if (v.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            std::size_t i = 0;
            for (const auto& item : v.items()) {
                out += inner + ordered_json(item.key()).dump() + ": ";
                write_value(out, item.value(), depth + 1);
                if (++i < v.size()) out += ",";
                out += "\n";
            }
            out += pad + "}";
            return;
        }
        default:
            throw value_error("unsupported JSON value in report");
    }
}

void check_keys(const ordered_json& obj, const std::set<std::string>& required,
                const std::set<std::string>& optional, const std::string& where) {
    if (!obj.is_object()) throw validation_error(where + " must be a JSON object");
    for (const auto& item : obj.items()) {
        if (!required.count(item.key()) && !optional.count(item.key()))
            throw validation_error(where + ": unknown key '" + item.key() + "'");
    }
    for (const std::string& key : required)
        if (!obj.contains(key)) throw validation_error(where + ": missing key '" + key + "'");
}

std::size_t size_from(const ordered_json& v, const std::string& where) {
    if (!v.is_number_unsigned()) throw validation_error(where + " must be a non-negative integer");
    return v.get<std::size_t>();
}

double double_from(const ordered_json& v, const std::string& where) {
    if (!v.is_number()) throw validation_error(where + " must be a number");
    return v.get<double>();
}

bool bool_from(const ordered_json& v, const std::string& where) {
    if (!v.is_boolean()) throw validation_error(where + " must be a boolean");
    return v.get<bool>();
}

std::string string_from(const ordered_json& v, const std::string& where) {
    if (!v.is_string()) throw validation_error(where + " must be a string");
    return v.get<std::string>();
}

}  // namespace

std::string dump_report(const ordered_json& doc) {
    std::string out;
    write_value(out, doc, 0);
    out += "\n";
    return out;
}

ordered_json parse_report(const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error(std::string("report: ") + e.what());
    }
    check_keys(doc,
               {"tool_version", "command", "config", "started_at", "duration_seconds", "payload"},
               {}, "report");
    string_from(doc["command"], "report: command");
    string_from(doc["tool_version"], "report: tool_version");
    if (!doc["config"].is_object()) throw validation_error("report: config must be an object");
    if (!doc["payload"].is_object()) throw validation_error("report: payload must be an object");
    return doc;
}

ordered_json make_envelope(const std::string& command, ordered_json config, ordered_json payload,
                           std::optional<std::string> started_at,
                           std::optional<double> duration_seconds) {
    ordered_json doc;
    doc["tool_version"] = kToolVersion;
    doc["command"] = command;
    doc["config"] = std::move(config);
    doc["started_at"] = started_at.has_value() ? ordered_json(*started_at) : ordered_json(nullptr);
    doc["duration_seconds"] =
        duration_seconds.has_value() ? ordered_json(*duration_seconds) : ordered_json(nullptr);
    doc["payload"] = std::move(payload);
    return doc;
}

ordered_json to_json(const AttackConfig& config) {
    ordered_json j;
    j["kind"] = to_string(config.kind);
    j["epsilon"] = config.epsilon;
    j["alpha"] = config.alpha;
    j["iterations"] = config.iterations;
    j["target"] = config.target.has_value() ? ordered_json(*config.target) : ordered_json(nullptr);
    j["overshoot"] = config.overshoot;
    j["c"] = config.c;
    j["kappa"] = config.kappa;
    j["binary_search_steps"] = config.binary_search_steps;
    j["seed"] = config.seed;
    return j;
}

AttackConfig attack_config_from_json(const ordered_json& j) {
    check_keys(j,
               {"kind", "epsilon", "alpha", "iterations", "target", "overshoot", "c", "kappa",
                "binary_search_steps", "seed"},
               {}, "attack config");
    AttackConfig config;
    config.kind = attack_kind_from_string(string_from(j["kind"], "attack config: kind"));
    config.epsilon = double_from(j["epsilon"], "attack config: epsilon");
    config.alpha = double_from(j["alpha"], "attack config: alpha");
    config.iterations = size_from(j["iterations"], "attack config: iterations");
    if (!j["target"].is_null()) config.target = size_from(j["target"], "attack config: target");
    config.overshoot = double_from(j["overshoot"], "attack config: overshoot");
    config.c = double_from(j["c"], "attack config: c");
    config.kappa = double_from(j["kappa"], "attack config: kappa");
    config.binary_search_steps =
        size_from(j["binary_search_steps"], "attack config: binary_search_steps");
    if (!j["seed"].is_number_unsigned())
        throw validation_error("attack config: seed must be a non-negative integer");
    config.seed = j["seed"].get<std::uint64_t>();
    return config;
}

ordered_json to_json(const Image& img) {
    ordered_json j;
    j["channels"] = img.channels;
    j["height"] = img.height;
    j["width"] = img.width;
    j["pixels"] = img.pixels;
    return j;
}

Image image_from_json(const ordered_json& j) {
    check_keys(j, {"channels", "height", "width", "pixels"}, {}, "image");
    const std::size_t c = size_from(j["channels"], "image: channels");
    const std::size_t h = size_from(j["height"], "image: height");
    const std::size_t w = size_from(j["width"], "image: width");
    if (!j["pixels"].is_array()) throw validation_error("image: pixels must be an array");
    std::vector<double> pixels;
    pixels.reserve(j["pixels"].size());
    for (const auto& v : j["pixels"]) pixels.push_back(double_from(v, "image: pixels"));
    if (pixels.size() != c * h * w)
        throw validation_error("image: pixel count does not match dims");
    try {
        return Image(c, h, w, std::move(pixels));
    } catch (const value_error& e) {
        throw validation_error(std::string("image: ") + e.what());
    }
}

ordered_json to_json(const AttackResult& result, const std::string& image_id) {
    ordered_json j;
    j["image_id"] = image_id;
    j["original_label"] = result.original_label;
    j["original_conf"] = result.original_conf;
    j["adversarial_label"] = result.adversarial_label;
    j["adversarial_conf"] = result.adversarial_conf;
    j["success"] = result.success;
    j["linf_norm"] = result.linf_norm;
    j["l2_norm"] = result.l2_norm;
    j["iterations_used"] = result.iterations_used;
    j["target_used"] =
        result.target_used.has_value() ? ordered_json(*result.target_used) : ordered_json(nullptr);
    j["attack"] = to_json(result.attack);
    j["original"] = to_json(result.original);
    j["adversarial"] = to_json(result.adversarial);
    return j;
}

AttackResult attack_result_from_json(const ordered_json& j) {
    check_keys(j,
               {"image_id", "original_label", "original_conf", "adversarial_label",
                "adversarial_conf", "success", "linf_norm", "l2_norm", "iterations_used",
                "target_used", "attack", "original", "adversarial"},
               {}, "attack result");
    AttackResult r;
    r.original_label = size_from(j["original_label"], "attack result: original_label");
    r.original_conf = double_from(j["original_conf"], "attack result: original_conf");
    r.adversarial_label = size_from(j["adversarial_label"], "attack result: adversarial_label");
    r.adversarial_conf = double_from(j["adversarial_conf"], "attack result: adversarial_conf");
    r.success = bool_from(j["success"], "attack result: success");
    r.linf_norm = double_from(j["linf_norm"], "attack result: linf_norm");
    r.l2_norm = double_from(j["l2_norm"], "attack result: l2_norm");
    r.iterations_used = size_from(j["iterations_used"], "attack result: iterations_used");
    if (!j["target_used"].is_null())
        r.target_used = size_from(j["target_used"], "attack result: target_used");
    r.attack = attack_config_from_json(j["attack"]);
    r.original = image_from_json(j["original"]);
    r.adversarial = image_from_json(j["adversarial"]);
    if (r.original.pixels.size() != r.adversarial.pixels.size())
        throw validation_error("attack result: original and adversarial dims differ");
    r.perturbation = to_tensor(r.adversarial);
    Tensor orig = to_tensor(r.original);
    for (std::size_t i = 0; i < r.perturbation.data.size(); ++i)
        r.perturbation.data[i] -= orig.data[i];
    return r;
}

ordered_json to_json(const ThresholdReport& report) {
    ordered_json j;
    j["image_id"] = report.image_id;
    j["attack"] = to_json(report.attack);
    j["kind"] = to_string(report.kind);
    ordered_json rows = ordered_json::array();
    for (const ThresholdRow& row : report.rows) {
        ordered_json rj;
        rj["magnitude"] = row.magnitude;
        rj["label"] = row.label;
        rj["confidence"] = row.confidence;
        rj["retained"] = row.retained;
        rows.push_back(std::move(rj));
    }
    j["rows"] = std::move(rows);
    j["threshold"] =
        report.threshold.has_value() ? ordered_json(*report.threshold) : ordered_json(nullptr);
    j["confidence_trajectory"] = report.confidence_trajectory;
    return j;
}

ordered_json to_json(const DetectionProxyReport& report) {
    ordered_json j;
    j["window"] = report.window;
    j["stride"] = report.stride;
    j["window_labels_original"] = report.window_labels_original;
    j["window_labels_adversarial"] = report.window_labels_adversarial;
    j["whole_label_original"] = report.whole_label_original;
    j["whole_label_adversarial"] = report.whole_label_adversarial;
    j["majority_label_original"] = report.majority_label_original;
    j["majority_label_adversarial"] = report.majority_label_adversarial;
    j["window_agreement_rate"] = report.window_agreement_rate;
    return j;
}

ordered_json to_json(const TransferMatrix& matrix) {
    ordered_json j;
    j["source_models"] = matrix.source_models;
    j["eval_models"] = matrix.eval_models;
    j["fool_rate"] = matrix.fool_rate;
    j["targeted_fool_rate"] = matrix.targeted_fool_rate;
    j["sample_count"] = matrix.sample_count;
    j["attack"] = to_json(matrix.attack);
    j["seed"] = matrix.seed;
    return j;
}

ordered_json to_json(const TransferRecord& record) {
    ordered_json j;
    j["image_index"] = record.image_index;
    j["true_label"] = record.true_label;
    j["source_model"] = record.source_model;
    j["attack_success"] = record.attack_success;
    j["adversarial_label_on_source"] = record.adversarial_label_on_source;
    j["target_used"] =
        record.target_used.has_value() ? ordered_json(*record.target_used) : ordered_json(nullptr);
    j["eval_labels"] = record.eval_labels;
    j["eval_fooled"] = record.eval_fooled;
    return j;
}

ordered_json to_json(const MultiAttackResult& result) {
    ordered_json j;
    j["chain"] = result.chain;
    ordered_json evals = ordered_json::array();
    for (const MultiStageEval& e : result.per_model) {
        ordered_json ej;
        ej["label"] = e.label;
        ej["confidence"] = e.confidence;
        ej["fooled"] = e.fooled;
        evals.push_back(std::move(ej));
    }
    j["per_model"] = std::move(evals);
    j["fools_all"] = result.fools_all;
    j["linf_from_original"] = result.linf_from_original;
    j["l2_from_original"] = result.l2_from_original;
    j["per_stage_epsilons"] = result.per_stage_epsilons;
    j["final_image"] = to_json(result.final_image);
    return j;
}

}  // namespace advlab
