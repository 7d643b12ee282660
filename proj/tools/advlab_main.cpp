// advlab: one binary, seven subcommands, deterministic JSON reports.
//
// Every report is an envelope {tool_version, command, config, started_at,
// duration_seconds, payload} where config echoes the fully resolved flags.
// Reruns with identical flags are byte-identical; wall-clock stamps are
// opt-in via --timestamps because they break that contract.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "advlab/attacks.hpp"
#include "advlab/dataset.hpp"
#include "advlab/errors.hpp"
#include "advlab/image.hpp"
#include "advlab/model.hpp"
#include "advlab/report.hpp"
#include "advlab/rng.hpp"
#include "advlab/robustness.hpp"
#include "advlab/serialize.hpp"
#include "advlab/tensor.hpp"
#include "advlab/threading.hpp"
#include "advlab/train.hpp"
#include "advlab/transfer.hpp"
#include "advlab/transforms.hpp"

using advlab::AttackConfig;
using ordered_json = nlohmann::ordered_json;

namespace {

struct GlobalFlags {
    std::uint64_t seed = 42;
    std::string precision = "double";
    std::string out;
    int jobs = 1;
    std::string format = "json";
    bool timestamps = false;
};

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string iso_utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

ordered_json median_or_null(std::vector<double> v) {
    if (v.empty()) return nullptr;
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

// Deterministic without-replacement sample, reported in index order.
std::vector<std::size_t> sample_indices(std::size_t total, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw advlab::value_error("need n >= 1 images");
    if (n > total)
        throw advlab::value_error("requested " + std::to_string(n) +
                                  " images but the dataset holds " + std::to_string(total));
    std::vector<std::size_t> idx(total);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    advlab::Rng rng = advlab::subrng(seed, "sample");
    rng.shuffle(idx);
    idx.resize(n);
    std::sort(idx.begin(), idx.end());
    return idx;
}

std::string image_id_for(std::size_t index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "img-%04zu", index);
    return buf;
}

// Shared attack hyperparameter flags (attack, transfer, multi).
struct AttackFlags {
    std::string kind;
    double epsilon = 0.3;
    double alpha = 0.0;
    std::size_t iterations = 0;
    std::size_t target = 0;
    double overshoot = 0.02;
    double c = 1.0;
    double kappa = 0.0;
    std::size_t binary_search_steps = 5;

    CLI::Option* alpha_opt = nullptr;
    CLI::Option* iterations_opt = nullptr;
    CLI::Option* target_opt = nullptr;
};

void add_attack_flags(CLI::App* sub, AttackFlags& f) {
    sub->add_option("--kind", f.kind, "attack kind: fgsm, fgsm_targeted, bim, illc, deepfool, cw_l2")
        ->required();
    sub->add_option("--epsilon", f.epsilon, "L-inf budget (fgsm/bim/illc)")
        ->capture_default_str();
    f.alpha_opt = sub->add_option("--alpha", f.alpha, "per-step size (bim/illc); default epsilon/10");
    f.iterations_opt =
        sub->add_option("--iterations", f.iterations, "iteration budget; default per kind");
    f.target_opt = sub->add_option("--target", f.target, "target class for targeted kinds");
    sub->add_option("--overshoot", f.overshoot, "deepfool boundary overshoot")
        ->capture_default_str();
    sub->add_option("--c", f.c, "cw_l2 initial objective weight")->capture_default_str();
    sub->add_option("--kappa", f.kappa, "cw_l2 confidence margin")->capture_default_str();
    sub->add_option("--binary-search-steps", f.binary_search_steps, "cw_l2 c search rounds")
        ->capture_default_str();
}

AttackConfig resolve_attack_config(const AttackFlags& f, std::uint64_t seed) {
    const advlab::AttackKind kind = advlab::attack_kind_from_string(f.kind);
    AttackConfig config = advlab::default_config(kind);
    config.epsilon = f.epsilon;
    config.alpha = f.alpha_opt->count() ? f.alpha : f.epsilon / 10.0;
    if (f.iterations_opt->count()) config.iterations = f.iterations;
    if (f.target_opt->count()) config.target = f.target;
    else if (advlab::is_targeted(kind))
        throw advlab::value_error("targeted kinds need --target: '" + f.kind +
                                  "' drives a chosen class");
    config.overshoot = f.overshoot;
    config.c = f.c;
    config.kappa = f.kappa;
    config.binary_search_steps = f.binary_search_steps;
    config.seed = seed;
    return config;
}

ordered_json global_config(const GlobalFlags& g) {
    ordered_json j;
    j["seed"] = g.seed;
    j["precision"] = g.precision;
    j["jobs"] = g.jobs;
    return j;
}

void emit(const GlobalFlags& g, const std::string& text) {
    if (g.out.empty())
        std::cout << text;
    else
        advlab::write_text_file(g.out, text);
}

void emit_report(const GlobalFlags& g, const std::string& command, ordered_json config,
                 ordered_json payload, const std::optional<std::string>& started_at,
                 std::chrono::steady_clock::time_point t0) {
    std::optional<double> duration;
    if (g.timestamps) {
        duration = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    emit(g, advlab::dump_report(advlab::make_envelope(command, std::move(config),
                                                      std::move(payload), started_at, duration)));
}

// ---------------------------------------------------------------- gen-data

struct GenDataFlags {
    std::size_t classes = 10;
    std::size_t per_class = 100;
    std::size_t size = 16;
    std::string data_out;
};

void run_gen_data(const GlobalFlags& g, const GenDataFlags& f, ordered_json config,
                  const std::optional<std::string>& started_at,
                  std::chrono::steady_clock::time_point t0) {
    const advlab::LabeledDataset data =
        advlab::generate_shapes_dataset(f.classes, f.per_class, f.size, g.seed);
    advlab::save_dataset(data, f.data_out);
    const std::string checksum = hex64(advlab::file_checksum(f.data_out));
    std::cerr << "checksum " << checksum << "\n";

    ordered_json payload;
    payload["path"] = f.data_out;
    payload["classes"] = f.classes;
    payload["per_class"] = f.per_class;
    payload["size"] = f.size;
    payload["num_images"] = data.size();
    payload["class_names"] = data.class_names;
    payload["checksum"] = checksum;
    emit_report(g, "gen-data", std::move(config), std::move(payload), started_at, t0);
}

// ------------------------------------------------------------------- train

struct TrainFlags {
    std::string arch;
    std::string data;
    std::size_t epochs = 6;
    double lr = 0.1;
    std::size_t batch = 32;
    std::string model_out;
};

void run_train(const GlobalFlags& g, const TrainFlags& f, ordered_json config,
               const std::optional<std::string>& started_at,
               std::chrono::steady_clock::time_point t0) {
    const auto& names = advlab::architecture_names();
    if (std::find(names.begin(), names.end(), f.arch) == names.end()) {
        std::string msg = "unknown arch '" + f.arch + "'; valid names:";
        for (const std::string& n : names) msg += " " + n;
        throw advlab::value_error(msg);
    }
    const advlab::LabeledDataset data = advlab::load_dataset(f.data);
    const advlab::Model init = advlab::make_architecture(f.arch, g.seed);
    const advlab::TrainResult trained =
        advlab::train_sgd(init, data, f.epochs, f.lr, f.batch, g.seed);
    advlab::save_model(trained.model, f.model_out);

    ordered_json payload;
    payload["arch"] = f.arch;
    payload["model_path"] = f.model_out;
    payload["model_checksum"] = hex64(advlab::file_checksum(f.model_out));
    payload["num_images"] = data.size();
    payload["epoch_losses"] = trained.epoch_losses;
    payload["train_accuracy"] = advlab::accuracy(trained.model, data);
    emit_report(g, "train", std::move(config), std::move(payload), started_at, t0);
}

// ------------------------------------------------------------------ attack

struct AttackCmdFlags {
    std::string model;
    std::string data;
    std::size_t n = 1;
    std::string image;
    AttackFlags attack;
};

void run_attack(const GlobalFlags& g, const AttackCmdFlags& f, ordered_json config,
                const std::optional<std::string>& started_at,
                std::chrono::steady_clock::time_point t0) {
    if (f.image.empty() && f.data.empty())
        throw advlab::value_error("attack needs an input: --data with --n, or --image");
    const advlab::Model m = advlab::load_model(f.model);
    const AttackConfig attack = resolve_attack_config(f.attack, g.seed);
    advlab::validate(attack, m.num_classes);
    config["attack"] = advlab::to_json(attack);

    std::vector<std::pair<std::string, advlab::Image>> inputs;
    ordered_json source;
    if (!f.image.empty()) {
        inputs.emplace_back(std::filesystem::path(f.image).filename().string(),
                            advlab::load_image(f.image));
        source["image"] = f.image;
    } else {
        const advlab::LabeledDataset data = advlab::load_dataset(f.data);
        const std::vector<std::size_t> indices = sample_indices(data.size(), f.n, g.seed);
        for (std::size_t idx : indices) inputs.emplace_back(image_id_for(idx), data.images[idx]);
        source["dataset"] = f.data;
        source["n"] = f.n;
        source["indices"] = indices;
    }

    ordered_json results = ordered_json::array();
    std::size_t success_count = 0;
    std::vector<double> success_l2, success_linf;
    for (const auto& [id, img] : inputs) {
        const advlab::AttackResult r = advlab::run_attack(m, img, attack);
        if (r.success) {
            ++success_count;
            success_l2.push_back(r.l2_norm);
            success_linf.push_back(r.linf_norm);
        }
        results.push_back(advlab::to_json(r, id));
    }

    ordered_json payload;
    payload["model"] = m.name;
    payload["model_path"] = f.model;
    payload["source"] = std::move(source);
    payload["attack"] = advlab::to_json(attack);
    payload["num_inputs"] = inputs.size();
    payload["success_count"] = success_count;
    payload["success_rate"] =
        static_cast<double>(success_count) / static_cast<double>(inputs.size());
    payload["median_successful_l2"] = median_or_null(std::move(success_l2));
    payload["median_successful_linf"] = median_or_null(std::move(success_linf));
    payload["results"] = std::move(results);
    emit_report(g, "attack", std::move(config), std::move(payload), started_at, t0);
}

// ------------------------------------------------------------------- sweep

struct SweepFlags {
    std::string model;
    std::string in;
    std::string kind;
    std::vector<double> grid;
    std::size_t refine_steps = 0;
};

void run_sweep(const GlobalFlags& g, const SweepFlags& f, ordered_json config,
               const std::optional<std::string>& started_at,
               std::chrono::steady_clock::time_point t0) {
    const advlab::Model m = advlab::load_model(f.model);
    const advlab::TransformKind kind = advlab::transform_kind_from_string(f.kind);
    if (f.refine_steps > 0 && kind == advlab::TransformKind::crop)
        throw advlab::value_error("crop has no continuous magnitude to refine");
    advlab::TransformSpec spec{kind, f.grid};
    advlab::validate(spec);

    const ordered_json doc = advlab::parse_report(advlab::read_text_file(f.in));
    if (doc["command"] != "attack")
        throw advlab::validation_error("--in expects an attack report, found command '" +
                                       doc["command"].get<std::string>() + "'");
    const ordered_json& in_payload = doc["payload"];
    if (!in_payload.contains("results") || !in_payload["results"].is_array())
        throw advlab::validation_error("attack report payload has no results array");

    ordered_json reports = ordered_json::array();
    ordered_json thresholds = ordered_json::array();
    std::vector<std::size_t> retained_counts(f.grid.size(), 0);
    std::size_t swept = 0, skipped = 0;
    for (const ordered_json& rj : in_payload["results"]) {
        const advlab::AttackResult result = advlab::attack_result_from_json(rj);
        if (!result.success) {
            ++skipped;
            continue;
        }
        const std::string id = rj["image_id"].get<std::string>();
        const advlab::AdversarialProperty property = advlab::property_for(result);
        const advlab::ThresholdReport report = advlab::sweep(m, result, spec, property, id);
        ++swept;
        for (std::size_t i = 0; i < report.rows.size(); ++i)
            if (report.rows[i].retained) ++retained_counts[i];

        ordered_json entry;
        entry["image_id"] = id;
        entry["threshold"] = report.threshold.has_value() ? ordered_json(*report.threshold)
                                                          : ordered_json(nullptr);
        if (f.refine_steps > 0 && report.threshold.has_value()) {
            // the grid point before the first failure is the last retained one
            const auto it = std::find(f.grid.begin(), f.grid.end(), *report.threshold);
            const double lo = *(it - 1);
            entry["refined"] = advlab::refine_threshold(m, result, kind, lo, *report.threshold,
                                                        f.refine_steps, property);
        } else {
            entry["refined"] = nullptr;
        }
        thresholds.push_back(std::move(entry));
        reports.push_back(advlab::to_json(report));
    }
    if (swept == 0)
        throw advlab::validation_error("attack report contains no successful results to sweep");

    ordered_json aggregate = ordered_json::array();
    for (std::size_t i = 0; i < f.grid.size(); ++i) {
        ordered_json row;
        row["magnitude"] = f.grid[i];
        row["retention_rate"] =
            static_cast<double>(retained_counts[i]) / static_cast<double>(swept);
        aggregate.push_back(std::move(row));
    }

    ordered_json payload;
    payload["model"] = m.name;
    payload["kind"] = f.kind;
    payload["grid"] = f.grid;
    payload["num_swept"] = swept;
    payload["num_skipped_failures"] = skipped;
    payload["aggregate_retention"] = std::move(aggregate);
    payload["thresholds"] = std::move(thresholds);
    payload["reports"] = std::move(reports);
    emit_report(g, "sweep", std::move(config), std::move(payload), started_at, t0);
}

// ---------------------------------------------------------------- transfer

struct TransferFlags {
    std::vector<std::string> models;
    std::string data;
    std::size_t n = 100;
    AttackFlags attack;
};

void run_transfer(const GlobalFlags& g, const TransferFlags& f, ordered_json config,
                  const std::optional<std::string>& started_at,
                  std::chrono::steady_clock::time_point t0) {
    std::vector<advlab::Model> models;
    models.reserve(f.models.size());
    for (const std::string& path : f.models) models.push_back(advlab::load_model(path));
    const advlab::LabeledDataset data = advlab::load_dataset(f.data);
    const AttackConfig attack = resolve_attack_config(f.attack, g.seed);
    config["attack"] = advlab::to_json(attack);
    const advlab::TransferRun run = advlab::transfer_matrix(models, data, attack, f.n, g.seed);

    if (g.format == "csv") {
        emit(g, advlab::to_csv(run.matrix));
        return;
    }
    ordered_json records = ordered_json::array();
    for (const advlab::TransferRecord& r : run.records) records.push_back(advlab::to_json(r));
    ordered_json payload;
    payload["matrix"] = advlab::to_json(run.matrix);
    payload["records"] = std::move(records);
    emit_report(g, "transfer", std::move(config), std::move(payload), started_at, t0);
}

// ------------------------------------------------------------------- multi

struct MultiFlags {
    std::vector<std::string> models;
    std::string data;
    std::size_t index = 0;
    std::vector<double> epsilons;
    AttackFlags attack;
};

void run_multi(const GlobalFlags& g, const MultiFlags& f, ordered_json config,
               const std::optional<std::string>& started_at,
               std::chrono::steady_clock::time_point t0) {
    if (f.models.size() < 2)
        throw advlab::value_error("multi needs a chain of at least 2 models (got " +
                                  std::to_string(f.models.size()) + ")");
    if (!f.epsilons.empty() && f.epsilons.size() != f.models.size())
        throw advlab::value_error("--epsilons needs one value per chained model");
    std::vector<advlab::Model> chain;
    chain.reserve(f.models.size());
    for (const std::string& path : f.models) chain.push_back(advlab::load_model(path));
    const advlab::LabeledDataset data = advlab::load_dataset(f.data);
    if (f.index >= data.size())
        throw advlab::index_error("image index " + std::to_string(f.index) +
                                  " out of range for dataset of " + std::to_string(data.size()));

    const AttackConfig base = resolve_attack_config(f.attack, g.seed);
    config["attack"] = advlab::to_json(base);
    std::vector<AttackConfig> per_stage(chain.size(), base);
    for (std::size_t i = 0; i < f.epsilons.size(); ++i) {
        per_stage[i].epsilon = f.epsilons[i];
        if (!f.attack.alpha_opt->count()) per_stage[i].alpha = f.epsilons[i] / 10.0;
    }

    const advlab::MultiAttackResult result =
        advlab::sequential_multi_attack(chain, data.images[f.index], per_stage);

    ordered_json payload;
    payload["image_index"] = f.index;
    payload["image_id"] = image_id_for(f.index);
    payload["result"] = advlab::to_json(result);
    emit_report(g, "multi", std::move(config), std::move(payload), started_at, t0);
}

// ---------------------------------------------------------- detector-proxy

struct DetectorFlags {
    std::string model;
    std::string original;
    std::string adversarial;
    std::size_t window = 0;
    std::size_t stride = 1;
};

void run_detector_proxy(const GlobalFlags& g, const DetectorFlags& f, ordered_json config,
                        const std::optional<std::string>& started_at,
                        std::chrono::steady_clock::time_point t0) {
    const advlab::Model m = advlab::load_model(f.model);
    const advlab::Image original = advlab::load_image(f.original);
    const advlab::Image adversarial = advlab::load_image(f.adversarial);
    const advlab::DetectionProxyReport report =
        advlab::detector_proxy(m, original, adversarial, f.window, f.stride);
    emit_report(g, "detector-proxy", std::move(config), advlab::to_json(report), started_at, t0);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"desk-scale adversarial example laboratory"};
    app.require_subcommand(1);

    GlobalFlags g;
    app.add_option("--seed", g.seed, "master seed; all randomness derives from it")
        ->capture_default_str();
    app.add_option("--precision", g.precision, "kernel accumulator precision")
        ->check(CLI::IsMember({"double", "single"}))
        ->capture_default_str();
    app.add_option("--out", g.out, "report path; stdout when absent");
    app.add_option("--jobs", g.jobs, "worker threads for data-parallel loops")
        ->check(CLI::Range(1, 1024))
        ->capture_default_str();
    app.add_option("--format", g.format, "report format; csv is transfer-only")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    app.add_flag("--timestamps", g.timestamps,
                 "stamp started_at/duration_seconds (breaks byte-identical reruns)");

    GenDataFlags gen;
    CLI::App* gen_cmd = app.add_subcommand("gen-data", "generate a labeled glyph dataset");
    gen_cmd->fallthrough();
    gen_cmd->add_option("--classes", gen.classes, "number of glyph classes")
        ->capture_default_str();
    gen_cmd->add_option("--per-class", gen.per_class, "images per class")->capture_default_str();
    gen_cmd->add_option("--size", gen.size, "image side length")->capture_default_str();
    gen_cmd->add_option("--data-out", gen.data_out, "dataset file to write")->required();

    TrainFlags train;
    CLI::App* train_cmd = app.add_subcommand("train", "train a named architecture");
    train_cmd->fallthrough();
    train_cmd->add_option("--arch", train.arch, "architecture: cnn-a, cnn-b, mlp-c")->required();
    train_cmd->add_option("--data", train.data, "training dataset file")->required();
    train_cmd->add_option("--epochs", train.epochs, "SGD epochs")->capture_default_str();
    train_cmd->add_option("--lr", train.lr, "learning rate")->capture_default_str();
    train_cmd->add_option("--batch", train.batch, "minibatch size")->capture_default_str();
    train_cmd->add_option("--model-out", train.model_out, "model file to write")->required();

    AttackCmdFlags atk;
    CLI::App* attack_cmd = app.add_subcommand("attack", "craft adversarial examples");
    attack_cmd->fallthrough();
    attack_cmd->add_option("--model", atk.model, "model file")->required();
    CLI::Option* atk_data = attack_cmd->add_option("--data", atk.data, "dataset to sample from");
    attack_cmd->add_option("--n", atk.n, "images to sample from --data")->capture_default_str();
    CLI::Option* atk_image =
        attack_cmd->add_option("--image", atk.image, "single image file instead of --data");
    atk_image->excludes(atk_data);
    add_attack_flags(attack_cmd, atk.attack);

    SweepFlags sweep;
    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "transform adversarial images until they fail");
    sweep_cmd->fallthrough();
    sweep_cmd->add_option("--model", sweep.model, "model file")->required();
    sweep_cmd->add_option("--in", sweep.in, "attack report to sweep")->required();
    sweep_cmd->add_option("--kind", sweep.kind, "transform: crop, magnify, rotate, brightness")
        ->required();
    sweep_cmd->add_option("--grid", sweep.grid, "magnitude grid, identity first")
        ->required()
        ->delimiter(',');
    sweep_cmd->add_option("--refine-steps", sweep.refine_steps,
                          "bisection steps past the grid (continuous kinds)")
        ->capture_default_str();

    TransferFlags transfer;
    CLI::App* transfer_cmd =
        app.add_subcommand("transfer", "cross-model fool-rate matrix");
    transfer_cmd->fallthrough();
    transfer_cmd->add_option("--model", transfer.models, "model files (repeat; 2+ typical)")
        ->required();
    transfer_cmd->add_option("--data", transfer.data, "dataset file")->required();
    transfer_cmd->add_option("--n", transfer.n, "commonly-correct images to attack")
        ->capture_default_str();
    add_attack_flags(transfer_cmd, transfer.attack);

    MultiFlags multi;
    CLI::App* multi_cmd =
        app.add_subcommand("multi", "sequential attack through a model chain");
    multi_cmd->fallthrough();
    multi_cmd->add_option("--model", multi.models, "model files in chain order (repeat)")
        ->required();
    multi_cmd->add_option("--data", multi.data, "dataset file")->required();
    multi_cmd->add_option("--index", multi.index, "image index in the dataset")->required();
    multi_cmd->add_option("--epsilons", multi.epsilons, "per-stage epsilon overrides")
        ->delimiter(',');
    add_attack_flags(multi_cmd, multi.attack);

    DetectorFlags det;
    CLI::App* det_cmd =
        app.add_subcommand("detector-proxy", "windowed crop vote on an adversarial pair");
    det_cmd->fallthrough();
    det_cmd->add_option("--model", det.model, "model file")->required();
    det_cmd->add_option("--original", det.original, "original image file")->required();
    det_cmd->add_option("--adversarial", det.adversarial, "adversarial image file")->required();
    det_cmd->add_option("--window", det.window, "square window side")->required();
    det_cmd->add_option("--stride", det.stride, "window step")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints the message
        return 1;
    }

    const auto t0 = std::chrono::steady_clock::now();
    std::optional<std::string> started_at;
    if (g.timestamps) started_at = iso_utc_now();

    try {
        advlab::set_max_jobs(g.jobs);
        advlab::set_precision(g.precision == "single" ? advlab::Precision::float32
                                                      : advlab::Precision::float64);
        const bool is_transfer = transfer_cmd->parsed();
        if (g.format == "csv" && !is_transfer)
            throw advlab::value_error("--format csv is only available for transfer");

        if (gen_cmd->parsed()) {
            ordered_json config = global_config(g);
            config["classes"] = gen.classes;
            config["per_class"] = gen.per_class;
            config["size"] = gen.size;
            config["data_out"] = gen.data_out;
            run_gen_data(g, gen, std::move(config), started_at, t0);
        } else if (train_cmd->parsed()) {
            ordered_json config = global_config(g);
            config["arch"] = train.arch;
            config["data"] = train.data;
            config["epochs"] = train.epochs;
            config["lr"] = train.lr;
            config["batch"] = train.batch;
            config["model_out"] = train.model_out;
            run_train(g, train, std::move(config), started_at, t0);
        } else if (attack_cmd->parsed()) {
            ordered_json config = global_config(g);
            config["model"] = atk.model;
            if (!atk.image.empty()) config["image"] = atk.image;
            else {
                config["data"] = atk.data;
                config["n"] = atk.n;
            }
            run_attack(g, atk, std::move(config), started_at, t0);
        } else if (sweep_cmd->parsed()) {
            ordered_json config = global_config(g);
            config["model"] = sweep.model;
            config["in"] = sweep.in;
            config["kind"] = sweep.kind;
            config["grid"] = sweep.grid;
            config["refine_steps"] = sweep.refine_steps;
            run_sweep(g, sweep, std::move(config), started_at, t0);
        } else if (transfer_cmd->parsed()) {
            ordered_json config = global_config(g);
            config["models"] = transfer.models;
            config["data"] = transfer.data;
            config["n"] = transfer.n;
            run_transfer(g, transfer, std::move(config), started_at, t0);
        } else if (multi_cmd->parsed()) {
            ordered_json config = global_config(g);
            config["models"] = multi.models;
            config["data"] = multi.data;
            config["index"] = multi.index;
            if (!multi.epsilons.empty()) config["epsilons"] = multi.epsilons;
            run_multi(g, multi, std::move(config), started_at, t0);
        } else if (det_cmd->parsed()) {
            ordered_json config = global_config(g);
            config["model"] = det.model;
            config["original"] = det.original;
            config["adversarial"] = det.adversarial;
            config["window"] = det.window;
            config["stride"] = det.stride;
            run_detector_proxy(g, det, std::move(config), started_at, t0);
        }
    } catch (const advlab::io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const advlab::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
