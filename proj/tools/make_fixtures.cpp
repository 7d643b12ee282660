// Trains the bundled fixture models and prints the measurements that the
// acceptance suite freezes as literals. Run from the repo root:
//
//   build/tools/make-fixtures [output-dir]
//
// Writes cnn-a.json / cnn-b.json / mlp-c.json into output-dir (default
// tests/fixtures). Rerunning always reproduces identical files.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <vector>

#include "advlab/attacks.hpp"
#include "advlab/dataset.hpp"
#include "advlab/errors.hpp"
#include "advlab/model.hpp"
#include "advlab/rng.hpp"
#include "advlab/robustness.hpp"
#include "advlab/serialize.hpp"
#include "advlab/train.hpp"
#include "advlab/transfer.hpp"
#include "advlab/transforms.hpp"

using namespace advlab;

namespace {

constexpr std::uint64_t kSeed = 42;

std::vector<std::size_t> sample_indices(std::size_t total, std::size_t n) {
    std::vector<std::size_t> idx(total);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    Rng rng = subrng(kSeed, "sample");
    rng.shuffle(idx);
    idx.resize(n);
    std::sort(idx.begin(), idx.end());
    return idx;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

void print_value(const char* name, double v) {
    std::printf("FREEZE %-38s %.17g\n", name, v);
}

void print_value(const char* name, std::size_t v) {
    std::printf("FREEZE %-38s %zu\n", name, v);
}

}  // namespace

int main(int argc, char** argv) {
    const std::filesystem::path out_dir = argc > 1 ? argv[1] : "tests/fixtures";
    std::filesystem::create_directories(out_dir);

    const LabeledDataset data = generate_shapes_dataset(10, 100, 16, kSeed);
    const std::filesystem::path tmp_data =
        std::filesystem::temp_directory_path() / "advlab-fixture-data.json";
    save_dataset(data, tmp_data);
    std::printf("FREEZE %-38s %016llx\n", "dataset_checksum",
                static_cast<unsigned long long>(file_checksum(tmp_data)));

    std::vector<Model> models;
    for (const std::string& arch : architecture_names()) {
        const TrainResult trained =
            train_sgd(make_architecture(arch, kSeed), data, 6, 0.1, 32, kSeed);
        save_model(trained.model, out_dir / (arch + ".json"));
        print_value(("train_accuracy_" + arch).c_str(), accuracy(trained.model, data));
        models.push_back(trained.model);
    }
    const Model& cnn_a = models[0];

    // fgsm epsilon 0.3 over the seed-42 sample of 100 images
    AttackConfig fgsm_cfg = default_config(AttackKind::fgsm);
    const std::vector<std::size_t> idx100 = sample_indices(data.size(), 100);
    std::vector<AttackResult> fgsm_results;
    std::size_t fgsm_successes = 0;
    for (std::size_t i : idx100) {
        fgsm_results.push_back(run_attack(cnn_a, data.images[i], fgsm_cfg));
        if (fgsm_results.back().success) ++fgsm_successes;
    }
    print_value("fgsm_n100_success_count", fgsm_successes);

    // cw_l2 vs fgsm_targeted medians, 50 images, target = true label + 1
    const std::vector<std::size_t> idx50 = sample_indices(data.size(), 50);
    std::vector<double> cw_l2s, ft_l2s;
    std::size_t cw_succ = 0, ft_succ = 0, degenerate = 0;
    for (std::size_t i : idx50) {
        const std::size_t target = (data.labels[i] + 1) % data.class_names.size();
        AttackConfig cw = default_config(AttackKind::cw_l2);
        cw.target = target;
        AttackConfig ft = default_config(AttackKind::fgsm_targeted);
        ft.target = target;
        try {
            const AttackResult rc = run_attack(cnn_a, data.images[i], cw);
            const AttackResult rf = run_attack(cnn_a, data.images[i], ft);
            if (rc.success) {
                ++cw_succ;
                cw_l2s.push_back(rc.l2_norm);
            }
            if (rf.success) {
                ++ft_succ;
                ft_l2s.push_back(rf.l2_norm);
            }
        } catch (const degenerate_error&) {
            ++degenerate;
        }
    }
    print_value("cw_success_count_of_50", cw_succ);
    print_value("fgsm_targeted_success_count_of_50", ft_succ);
    print_value("degenerate_target_count", degenerate);
    print_value("cw_median_successful_l2", median(cw_l2s));
    print_value("fgsm_targeted_median_successful_l2", median(ft_l2s));

    // retention sweeps over all successful fgsm results, default grids
    for (TransformKind kind : {TransformKind::crop, TransformKind::magnify, TransformKind::rotate,
                               TransformKind::brightness}) {
        const TransformSpec spec{kind, default_grid(kind)};
        std::size_t swept = 0, retained_identity = 0, retained_max = 0, with_threshold = 0;
        for (const AttackResult& r : fgsm_results) {
            if (!r.success) continue;
            const ThresholdReport rep = sweep(cnn_a, r, spec, property_for(r));
            ++swept;
            if (rep.rows.front().retained) ++retained_identity;
            if (rep.rows.back().retained) ++retained_max;
            if (rep.threshold.has_value()) ++with_threshold;
        }
        const std::string base = "sweep_" + to_string(kind) + "_";
        print_value((base + "swept").c_str(), swept);
        print_value((base + "retained_identity").c_str(), retained_identity);
        print_value((base + "retained_max").c_str(), retained_max);
        print_value((base + "with_threshold").c_str(), with_threshold);
    }

    // transfer matrix, exact entries
    const TransferRun run = transfer_matrix(models, data, fgsm_cfg, 100, kSeed);
    for (std::size_t s = 0; s < models.size(); ++s)
        for (std::size_t e = 0; e < models.size(); ++e) {
            const std::string name = "transfer_" + models[s].name + "_to_" + models[e].name;
            print_value(name.c_str(), run.matrix.fool_rate[s][e]);
        }

    // two-stage fgsm chain cnn-a -> cnn-b over the same 100 sampled images
    const std::vector<Model> chain{models[0], models[1]};
    const std::vector<AttackConfig> per_stage{fgsm_cfg, fgsm_cfg};
    std::size_t fools_all_count = 0;
    double max_linf = 0.0;
    for (std::size_t i : idx100) {
        const MultiAttackResult mr = sequential_multi_attack(chain, data.images[i], per_stage);
        if (mr.fools_all) ++fools_all_count;
        max_linf = std::max(max_linf, mr.linf_from_original);
    }
    print_value("multi_fools_all_count_of_100", fools_all_count);
    print_value("multi_max_linf", max_linf);

    // detector proxy over the first 25 successful deepfool pairs in index
    // order (minimal perturbations; the windowed vote is about subtle noise)
    const AttackConfig df_cfg = default_config(AttackKind::deepfool);
    std::size_t pairs = 0, flipped = 0, majority_equal = 0;
    double agreement_sum = 0.0;
    for (std::size_t i = 0; i < data.size() && pairs < 25; ++i) {
        const AttackResult r = run_attack(cnn_a, data.images[i], df_cfg);
        if (!r.success) continue;
        ++pairs;
        const DetectionProxyReport rep = detector_proxy(cnn_a, r.original, r.adversarial, 12, 2);
        agreement_sum += rep.window_agreement_rate;
        if (rep.whole_label_original != rep.whole_label_adversarial) {
            ++flipped;
            if (rep.majority_label_original == rep.majority_label_adversarial) ++majority_equal;
        }
    }
    print_value("detector_pairs", pairs);
    print_value("detector_flipped_pairs", flipped);
    print_value("detector_majority_equal_among_flipped", majority_equal);
    print_value("detector_mean_agreement", agreement_sum / static_cast<double>(pairs));

    std::cout << "fixtures written to " << out_dir.string() << "\n";
    return 0;
}
