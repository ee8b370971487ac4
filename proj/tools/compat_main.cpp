// Command-line driver for the compatibility pipeline:
//   compat generate  — synthesize a labeled pair dataset
//   compat train     — fit the perceptron and emit convergence curves
//   compat evaluate  — classification report on the test partition
//   compat predict   — score one recruit/manager pair
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "compat/pipeline.hpp"

#include <CLI11.hpp>

int main(int argc, char **argv) {
    CLI::App app{"Recruit/manager compatibility pipeline"};
    app.require_subcommand(1);

    // generate
    std::size_t gen_n = 300;
    std::uint32_t gen_seed = 42;
    std::string gen_out;
    std::string gen_profiles;
    auto *generate = app.add_subcommand("generate", "Build a synthetic labeled pair dataset");
    generate->add_option("--n", gen_n, "Population size")->capture_default_str();
    generate->add_option("--seed", gen_seed, "Generator seed")->capture_default_str();
    generate->add_option("--out", gen_out, "Output directory")->required();
    generate->add_option("--profiles", gen_profiles, "Profiles CSV overriding the seeded generator");

    // train
    std::string train_data;
    std::string train_config;
    std::string train_model_out;
    std::string train_curves_out;
    auto *train = app.add_subcommand("train", "Train the perceptron on a generated dataset");
    train->add_option("--data", train_data, "Dataset directory")->required();
    train->add_option("--config", train_config, "Run config JSON");
    train->add_option("--model-out", train_model_out, "Model JSON output path")->required();
    train->add_option("--curves-out", train_curves_out, "Per-epoch curves CSV output path")->required();

    // evaluate
    std::string eval_model;
    std::string eval_data;
    std::string eval_all;
    std::string eval_report_out;
    auto *evaluate = app.add_subcommand("evaluate", "Classification report for a trained model");
    evaluate->add_option("--model", eval_model, "Model JSON path")->required();
    evaluate->add_option("--data", eval_data, "Dataset directory");
    evaluate->add_option("--all", eval_all, "Score every row of this pairs CSV instead of the test partition");
    evaluate->add_option("--report-out", eval_report_out, "Report JSON output path")->required();

    // predict
    std::string pred_model;
    std::vector<double> pred_recruit;
    std::vector<double> pred_manager;
    bool pred_explain = false;
    auto *predict = app.add_subcommand("predict", "Score one recruit/manager pair");
    predict->add_option("--model", pred_model, "Model JSON path")->required();
    predict->add_option("--recruit", pred_recruit, "Six recruit scores, comma separated")
        ->required()
        ->delimiter(',');
    predict->add_option("--manager", pred_manager, "Six manager scores, comma separated")
        ->required()
        ->delimiter(',');
    predict->add_flag("--explain", pred_explain, "Also print the swapped-role probability");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &err) {
        return app.exit(err);
    } catch (const CLI::ParseError &err) {
        app.exit(err);
        return compat::kExitUsage;
    }

    try {
        if (*generate) {
            std::optional<std::filesystem::path> profiles;
            if (!gen_profiles.empty()) {
                profiles = gen_profiles;
            } else if (gen_n < 2) {
                std::cerr << "error: --n must be at least 2\n";
                return compat::kExitUsage;
            }
            compat::cmd_generate(gen_n, gen_seed, gen_out, profiles, std::cout);
        } else if (*train) {
            std::optional<std::filesystem::path> config;
            if (!train_config.empty()) {
                config = train_config;
            }
            compat::cmd_train(train_data, config, train_model_out, train_curves_out, std::cout);
        } else if (*evaluate) {
            std::optional<std::filesystem::path> all;
            if (!eval_all.empty()) {
                all = eval_all;
            } else if (eval_data.empty()) {
                std::cerr << "error: evaluate needs --data (or --all <csv>)\n";
                return compat::kExitUsage;
            }
            compat::cmd_evaluate(eval_model, eval_data, all, eval_report_out, std::cout);
        } else if (*predict) {
            try {
                compat::cmd_predict(pred_model, pred_recruit, pred_manager, pred_explain, std::cout);
            } catch (const compat::WrongArity &err) {
                std::cerr << "error: " << err.what() << "\n";
                return compat::kExitUsage;
            } catch (const compat::OutOfRange &err) {
                std::cerr << "error: " << err.what() << "\n";
                return compat::kExitUsage;
            }
        }
    } catch (const std::exception &err) {
        std::cerr << "error: " << err.what() << "\n";
        return compat::exit_code_for(err);
    }
    return compat::kExitSuccess;
}
