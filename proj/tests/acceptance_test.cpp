// Acceptance suite: drives the installed CLI end to end at the paper's
// scale and checks every pinned quality gate. One test (and one printed
// pass/fail line) per criterion.
#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "compat/pipeline.hpp"
#include "test_util.hpp"

using namespace compat;
namespace fs = std::filesystem;

namespace {

std::string quoted(const fs::path &path) {
    return "\"" + path.string() + "\"";
}

void run_cli(const std::string &args, const fs::path &log) {
    const std::string command = std::string(COMPAT_CLI_PATH) + " " + args + " > " + quoted(log) + " 2>&1";
    const int status = std::system(command.c_str());
    ASSERT_EQ(status, 0) << "command failed: " << command;
}

struct PipelineRun {
    fs::path dir;
    nlohmann::json report;
    std::string model_bytes;
    std::string curves_bytes;
    std::string report_bytes;
    std::string report_text;
    double seconds = 0.0;
};

PipelineRun execute_pipeline(const std::string &name) {
    PipelineRun run;
    run.dir = fs::temp_directory_path() / ("compat_accept_" + name);
    fs::remove_all(run.dir);
    fs::create_directories(run.dir);

    const auto start = std::chrono::steady_clock::now();
    run_cli("generate --n 300 --seed 42 --out " + quoted(run.dir / "data"), run.dir / "generate.log");
    run_cli("train --data " + quoted(run.dir / "data") + " --model-out " + quoted(run.dir / "model.json") +
                " --curves-out " + quoted(run.dir / "curves.csv"),
            run.dir / "train.log");
    run_cli("evaluate --model " + quoted(run.dir / "model.json") + " --data " + quoted(run.dir / "data") +
                " --report-out " + quoted(run.dir / "report.json"),
            run.dir / "evaluate.log");
    run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    run.model_bytes = read_file(run.dir / "model.json");
    run.curves_bytes = read_file(run.dir / "curves.csv");
    run.report_bytes = read_file(run.dir / "report.json");
    run.report_text = read_file(run.dir / "report.txt");
    run.report = nlohmann::json::parse(run.report_bytes);
    return run;
}

const PipelineRun &run_a() {
    static const PipelineRun run = execute_pipeline("run_a");
    return run;
}

void announce(int criterion, const std::string &what, bool pass) {
    std::cout << "[criterion " << criterion << "] " << what << ": " << (pass ? "PASS" : "FAIL")
              << std::endl;
    EXPECT_TRUE(pass) << "criterion " << criterion << ": " << what;
}

// Naive reimplementation of the labeling rule for the oracle criterion.
std::vector<int> brute_force_labels(const Population &pop) {
    const std::size_t n = pop.size();
    std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double sum = 0.0;
            for (std::size_t k = 0; k < 6; ++k) {
                const double diff = (10.0 - pop.profiles[i].scores[k]) - pop.profiles[j].scores[k];
                sum += diff * diff;
            }
            dist[i][j] = std::sqrt(sum);
        }
    }
    double cutoff = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double best = -1.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i && (best < 0.0 || dist[i][j] < best)) {
                best = dist[i][j];
            }
        }
        cutoff = std::max(cutoff, best);
    }
    std::vector<int> labels;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j) {
                labels.push_back(dist[i][j] <= cutoff ? 1 : 0);
            }
        }
    }
    return labels;
}

}  // namespace

TEST(Acceptance, C1_EndToEndAccuracy) {
    const PipelineRun &run = run_a();
    const double accuracy = run.report.at("report").at("accuracy").get<double>();
    std::cout << "[criterion 1] pipeline wall time " << run.seconds << " s\n";

    std::size_t pair_rows = 0;
    for (const char c : read_file(run.dir / "data" / kPairsFileName)) {
        pair_rows += c == '\n';
    }
    ASSERT_EQ(pair_rows, 89701u);  // header + 300*299 ordered pairs

    std::size_t curve_rows = 0;
    for (const char c : run.curves_bytes) {
        curve_rows += c == '\n';
    }
    ASSERT_LE(curve_rows, 201u);  // header + at most max_epochs records

    announce(1, "n=300 seed=42 test accuracy " + std::to_string(accuracy) + " >= 0.99",
             accuracy >= 0.99);
    announce(1, "end-to-end runtime under 5 minutes", run.seconds < 300.0);
}

TEST(Acceptance, C2_MinorityClassQuality) {
    const PipelineRun &run = run_a();
    const auto &per_class = run.report.at("report").at("per_class");
    const auto &c0 = per_class.at("0");
    const auto &c1 = per_class.at("1");
    const bool zero_is_minority =
        c0.at("support_fraction").get<double>() < c1.at("support_fraction").get<double>();
    const auto &minority = zero_is_minority ? c0 : c1;
    const double share = minority.at("support_fraction").get<double>();
    std::cout << "[criterion 2] minority class " << (zero_is_minority ? 0 : 1) << " share " << share
              << " f1 " << minority.at("f1").get<double>() << "\n";
    if (share >= 0.005) {
        announce(2, "minority F1 " + std::to_string(minority.at("f1").get<double>()) + " >= 0.80",
                 minority.at("f1").get<double>() >= 0.80);
    } else {
        const bool recall_ok = minority.at("recall").get<double>() >= 0.5;
        const bool note_ok = run.report_text.find("support is below 0.5%") != std::string::npos;
        announce(2, "minority recall >= 0.5 with degenerate-support note", recall_ok && note_ok);
    }
}

TEST(Acceptance, C3_CutoffGuarantee) {
    std::mt19937 meta(0xC0FFEE);
    std::size_t failures = 0;
    for (int combo = 0; combo < 50; ++combo) {
        const std::size_t n = static_cast<std::size_t>(uniform_int(meta, 2, 100));
        const std::uint32_t seed = draw_u32(meta);
        const LabeledPairSet set = build_dataset(n, seed);
        for (std::size_t i = 0; i < n; ++i) {
            bool found = false;
            for (std::size_t k = i * (n - 1); k < (i + 1) * (n - 1); ++k) {
                found |= set.samples[k].label == 1;
            }
            failures += !found;
        }
    }
    announce(3, "every individual keeps a compatible partner across 50 random (n, seed) runs",
             failures == 0);
}

TEST(Acceptance, C4_LabelSymmetry) {
    std::mt19937 meta(0xC0FFEE);
    std::size_t failures = 0;
    for (int combo = 0; combo < 50; ++combo) {
        const std::size_t n = static_cast<std::size_t>(uniform_int(meta, 2, 100));
        const std::uint32_t seed = draw_u32(meta);
        const LabeledPairSet set = build_dataset(n, seed);
        const auto index = [n](std::size_t i, std::size_t j) {
            return i * (n - 1) + (j < i ? j : j - 1);
        };
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                failures += set.samples[index(i, j)].label != set.samples[index(j, i)].label;
            }
        }
    }
    announce(4, "label(i,j) equals label(j,i) across the same 50 runs", failures == 0);
}

TEST(Acceptance, C5_OracleEquivalence) {
    std::mt19937 meta(0xFACADE);
    bool all_equal = true;
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = static_cast<std::size_t>(uniform_int(meta, 2, 20));
        const std::uint32_t seed = draw_u32(meta);
        const Population pop = generate_profiles(n, seed);
        const LabeledPairSet set = build_dataset(n, seed);
        std::vector<int> labels;
        labels.reserve(set.samples.size());
        for (const PairSample &sample : set.samples) {
            labels.push_back(sample.label);
        }
        all_equal &= labels == brute_force_labels(pop);
    }
    announce(5, "pipeline labels match the brute-force labeler bit-for-bit on 20 seeds", all_equal);
}

TEST(Acceptance, C6_GradientCheck) {
    std::size_t failures = 0;
    double worst = 0.0;
    std::uint32_t seed = 600;
    for (const std::vector<std::size_t> sizes : {std::vector<std::size_t>{12, 8, 1},
                                                 std::vector<std::size_t>{12, 64, 1}}) {
        for (const std::size_t batch_size : {1u, 16u}) {
            const MlpModel model = init_model(sizes, ++seed);
            const auto batch = testutil::random_batch(batch_size, ++seed);
            const auto result = testutil::finite_difference_check(model, batch, 1e-5, 1e-4);
            failures += result.failures;
            worst = std::max(worst, result.worst_error);
        }
    }
    std::cout << "[criterion 6] worst relative gradient error " << worst << "\n";
    announce(6, "backpropagation matches central differences within 1e-4 for every parameter",
             failures == 0);
}

TEST(Acceptance, C7_SplitArithmetic) {
    LabeledPairSet set;
    set.samples.resize(100);
    const DatasetSplit split = split_dataset(set, 0.2, 0.2, 1);
    announce(7,
             "0.2/0.2 split of 100 samples gives 64/16/20 (got " +
                 std::to_string(split.train.samples.size()) + "/" +
                 std::to_string(split.validation.samples.size()) + "/" +
                 std::to_string(split.test.samples.size()) + ")",
             split.train.samples.size() == 64 && split.validation.samples.size() == 16 &&
                 split.test.samples.size() == 20);
}

TEST(Acceptance, C8_Determinism) {
    const PipelineRun &first = run_a();
    const PipelineRun second = execute_pipeline("run_b");
    announce(8, "model files byte-identical across runs", first.model_bytes == second.model_bytes);
    announce(8, "curves CSVs byte-identical across runs", first.curves_bytes == second.curves_bytes);
    announce(8, "reports byte-identical across runs",
             first.report_bytes == second.report_bytes && first.report_text == second.report_text);
}

TEST(Acceptance, C9_ReportFormat) {
    const ClassificationReport rep = report(ConfusionMatrix{.tp = 87, .fp = 10, .tn = 890, .fn = 13});
    std::ifstream golden(std::string(TESTS_DATA_DIR) + "/report_golden.txt", std::ios::binary);
    ASSERT_TRUE(golden.is_open());
    const std::string expected((std::istreambuf_iterator<char>(golden)),
                               std::istreambuf_iterator<char>());
    announce(9, "text report matches the golden column layout", format_report(rep) == expected);
}
