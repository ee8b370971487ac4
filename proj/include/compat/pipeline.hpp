#pragma once

#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "compat/dataset_io.hpp"
#include "compat/error.hpp"
#include "compat/io_util.hpp"
#include "compat/metrics.hpp"
#include "compat/mlp.hpp"
#include "compat/model_io.hpp"
#include "compat/profile.hpp"
#include "compat/synthgen.hpp"

#include <json.hpp>

namespace compat {

inline const std::vector<std::size_t> kDefaultLayerSizes = {12, 64, 64, 64, 64, 1};
inline constexpr std::uint32_t kDefaultTrainSeed = 30;

/// Knobs for one pipeline run. Split settings are optional: when a config
/// leaves them out, training falls back to the dataset's metadata so that
/// `evaluate` can rebuild the identical test partition later.
struct RunConfig {
    std::size_t population_n = 300;
    std::uint32_t data_seed = 42;
    std::optional<double> test_fraction;
    std::optional<double> val_fraction;
    std::optional<std::uint32_t> split_seed;
    std::vector<std::size_t> layer_sizes = kDefaultLayerSizes;
    TrainConfig train{.learning_rate = 0.01,
                      .batch_size = 32,
                      .max_epochs = 200,
                      .patience = 5,
                      .min_delta = 1e-4,
                      .seed = kDefaultTrainSeed,
                      .threshold = 0.5};
};

inline RunConfig parse_run_config(const nlohmann::json &doc, const std::string &context) {
    RunConfig config;
    try {
        for (const auto &[key, value] : doc.items()) {
            if (key == "population_n") {
                config.population_n = value.get<std::size_t>();
            } else if (key == "data_seed") {
                config.data_seed = value.get<std::uint32_t>();
            } else if (key == "test_fraction") {
                config.test_fraction = value.get<double>();
            } else if (key == "val_fraction") {
                config.val_fraction = value.get<double>();
            } else if (key == "split_seed") {
                config.split_seed = value.get<std::uint32_t>();
            } else if (key == "layer_sizes") {
                config.layer_sizes = value.get<std::vector<std::size_t>>();
            } else if (key == "learning_rate") {
                config.train.learning_rate = value.get<double>();
            } else if (key == "batch_size") {
                config.train.batch_size = value.get<std::size_t>();
            } else if (key == "max_epochs") {
                config.train.max_epochs = value.get<std::size_t>();
            } else if (key == "patience") {
                config.train.patience = value.get<std::size_t>();
            } else if (key == "min_delta") {
                config.train.min_delta = value.get<double>();
            } else if (key == "seed") {
                config.train.seed = value.get<std::uint32_t>();
            } else if (key == "threshold") {
                config.train.threshold = value.get<double>();
            } else {
                throw ConfigError(context + ": unknown config key \"" + key + "\"");
            }
        }
    } catch (const nlohmann::json::exception &err) {
        throw ConfigError(context + ": " + err.what());
    }
    return config;
}

inline RunConfig load_run_config(const std::filesystem::path &path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error &err) {
        throw ConfigError(path.string() + ": " + err.what());
    }
    return parse_run_config(doc, path.string());
}

/// The fully pinned parameters of a training run; re-running from this
/// document reproduces the outputs byte for byte.
inline nlohmann::json resolved_config_json(const RunConfig &config, double test_fraction,
                                           double val_fraction, std::uint32_t split_seed) {
    return nlohmann::json{
        {"population_n", config.population_n},
        {"data_seed", config.data_seed},
        {"test_fraction", test_fraction},
        {"val_fraction", val_fraction},
        {"split_seed", split_seed},
        {"layer_sizes", config.layer_sizes},
        {"learning_rate", config.train.learning_rate},
        {"batch_size", config.train.batch_size},
        {"max_epochs", config.train.max_epochs},
        {"patience", config.train.patience},
        {"min_delta", config.train.min_delta},
        {"seed", config.train.seed},
        {"threshold", config.train.threshold},
    };
}

inline std::string curves_csv(const TrainingHistory &history) {
    std::string content = "epoch,train_loss,val_loss,train_acc,val_acc\n";
    for (std::size_t i = 0; i < history.epochs.size(); ++i) {
        const EpochStats &stats = history.epochs[i];
        content += std::to_string(i + 1);
        content += ',';
        content += format_double(stats.train_loss);
        content += ',';
        content += format_double(stats.val_loss);
        content += ',';
        content += format_double(stats.train_accuracy);
        content += ',';
        content += format_double(stats.val_accuracy);
        content += '\n';
    }
    return content;
}

namespace detail {

inline std::filesystem::path sibling_with_suffix(std::filesystem::path path, const char *suffix) {
    path.replace_extension();
    path += suffix;
    return path;
}

inline ClassificationReport evaluate_samples(const MlpModel &model, std::span<const PairSample> samples) {
    if (samples.empty()) {
        throw EmptyDataset("nothing to evaluate");
    }
    std::vector<int> predictions;
    std::vector<int> labels;
    predictions.reserve(samples.size());
    labels.reserve(samples.size());
    MlpWorkspace ws;
    ws.resize_for(model);
    for (const PairSample &sample : samples) {
        const double p = forward_into(model, sample.features.features, ws);
        predictions.push_back(p >= model.threshold ? 1 : 0);
        labels.push_back(sample.label);
    }
    return report(confusion(predictions, labels));
}

inline double subset_accuracy(const MlpModel &model, std::span<const PairSample> samples) {
    MlpWorkspace ws;
    ws.resize_for(model);
    return evaluate_set(model, samples, model.threshold, ws).accuracy;
}

}  // namespace detail

/// Builds a labeled pair dataset and writes profiles.csv, pairs.csv and
/// metadata.json into out_dir. A profiles override file replaces the
/// seeded generator (for hand-authored fixtures).
inline void cmd_generate(std::size_t n, std::uint32_t seed, const std::filesystem::path &out_dir,
                         const std::optional<std::filesystem::path> &profiles_override,
                         std::ostream &out) {
    Population pop;
    std::string generator = kGeneratorName;
    if (profiles_override) {
        pop = read_profiles_csv(*profiles_override);
        pop.seed = seed;
        generator = "profiles-file";
        if (pop.size() < 2) {
            throw DataFormatError(profiles_override->string() + ": need at least 2 profiles, got " +
                                  std::to_string(pop.size()));
        }
    } else {
        if (n < 2) {
            throw PopulationTooSmall(n);
        }
        pop = generate_profiles(n, seed);
    }

    const DistanceMatrix dm = distance_matrix(pop);
    const double cutoff = cutoff_distance(dm);
    const LabeledPairSet set = label_pairs(pop, dm, cutoff);

    std::size_t positives = 0;
    for (const PairSample &sample : set.samples) {
        positives += static_cast<std::size_t>(sample.label);
    }

    DatasetMetadata meta;
    meta.n = pop.size();
    meta.seed = seed;
    meta.cutoff = cutoff;
    meta.positive_share = static_cast<double>(positives) / static_cast<double>(set.samples.size());
    meta.generator = generator;
    meta.split_seed = seed;

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw IoError("cannot create output directory " + out_dir.string());
    }
    write_profiles_csv(out_dir / kProfilesFileName, pop);
    write_pairs_csv(out_dir / kPairsFileName, set);
    write_metadata(out_dir / kMetadataFileName, meta);

    out << "individuals: " << pop.size() << "\n"
        << "pairs: " << set.samples.size() << "\n"
        << "cutoff: " << format_double(cutoff) << "\n"
        << "positive share: " << format_double(meta.positive_share) << "\n";
}

/// Splits the dataset, trains the net, and writes the model file, the
/// per-epoch curves CSV, and the resolved config next to the model.
inline void cmd_train(const std::filesystem::path &data_dir,
                      const std::optional<std::filesystem::path> &config_path,
                      const std::filesystem::path &model_out, const std::filesystem::path &curves_out,
                      std::ostream &out) {
    const DatasetMetadata meta = read_metadata(data_dir / kMetadataFileName);
    const LabeledPairSet set = read_pairs_csv(data_dir / kPairsFileName);

    RunConfig config;
    if (config_path) {
        config = load_run_config(*config_path);
    }
    const double test_fraction = config.test_fraction.value_or(meta.test_fraction);
    const double val_fraction = config.val_fraction.value_or(meta.val_fraction);
    const std::uint32_t split_seed = config.split_seed.value_or(meta.split_seed);

    const DatasetSplit split = split_dataset(set, test_fraction, val_fraction, split_seed);
    MlpModel model = init_model(config.layer_sizes, config.train.seed);
    auto [trained, history] = train(std::move(model), split.train.samples, split.validation.samples,
                                    config.train);

    save_model(model_out, trained);
    atomic_write_file(curves_out, curves_csv(history));
    atomic_write_file(detail::sibling_with_suffix(model_out, ".config.json"),
                      resolved_config_json(config, test_fraction, val_fraction, split_seed).dump(2) + "\n");

    detail::MlpWorkspace ws;
    ws.resize_for(trained);
    const double best_val_loss =
        detail::evaluate_set(trained, split.validation.samples, trained.threshold, ws).loss;
    out << "train/val/test sizes: " << split.train.samples.size() << "/"
        << split.validation.samples.size() << "/" << split.test.samples.size() << "\n"
        << "stopped_epoch: " << history.stopped_epoch << "\n"
        << "best_epoch: " << history.best_epoch << "\n"
        << "best_val_loss: " << format_double(best_val_loss) << "\n";
}

/// Scores the dataset's test partition (re-derived from the metadata's
/// split settings), or a full explicit pairs file with all_csv. Writes
/// the JSON report plus an aligned text twin.
inline void cmd_evaluate(const std::filesystem::path &model_path, const std::filesystem::path &data_dir,
                         const std::optional<std::filesystem::path> &all_csv,
                         const std::filesystem::path &report_out, std::ostream &out) {
    const MlpModel model = load_model(model_path);

    nlohmann::json doc;
    ClassificationReport rep;
    if (all_csv) {
        const LabeledPairSet set = read_pairs_csv(*all_csv);
        rep = detail::evaluate_samples(model, set.samples);
        doc["partition"] = "all";
    } else {
        const DatasetMetadata meta = read_metadata(data_dir / kMetadataFileName);
        const LabeledPairSet set = read_pairs_csv(data_dir / kPairsFileName);
        const DatasetSplit split = split_dataset(set, meta.test_fraction, meta.val_fraction,
                                                 meta.split_seed);
        rep = detail::evaluate_samples(model, split.test.samples);
        doc["partition"] = "test";
        doc["train_accuracy"] = detail::subset_accuracy(model, split.train.samples);
        doc["val_accuracy"] = detail::subset_accuracy(model, split.validation.samples);
    }
    doc["report"] = report_to_json(rep);

    const std::string text = format_report(rep);
    std::filesystem::path text_out = detail::sibling_with_suffix(report_out, ".txt");
    if (text_out == report_out) {
        text_out = report_out;
        text_out += ".txt";
    }
    atomic_write_file(report_out, doc.dump(2) + "\n");
    atomic_write_file(text_out, text);
    out << text;
}

/// Scores one recruit/manager pair with a saved model.
inline void cmd_predict(const std::filesystem::path &model_path, std::span<const double> recruit_scores,
                        std::span<const double> manager_scores, bool explain, std::ostream &out) {
    const auto validated = [](const char *role, std::span<const double> scores) {
        try {
            return validate_profile(role, scores);
        } catch (const OutOfRange &err) {
            throw OutOfRange(std::string(role) + " " + err.attribute(), err.index(), err.value());
        } catch (const WrongArity &err) {
            throw WrongArity(role, err.expected(), err.got());
        }
    };
    const PersonalityProfile recruit = validated("recruit", recruit_scores);
    const PersonalityProfile manager = validated("manager", manager_scores);

    const MlpModel model = load_model(model_path);
    const PairFeatures pair = pair_features(recruit, manager);
    const double probability = forward(model, pair.features);
    const int label = probability >= model.threshold ? 1 : 0;

    out << "probability " << std::fixed << std::setprecision(4) << probability << "\n"
        << "label " << label << "\n";
    if (explain) {
        const PairFeatures swapped = pair_features(manager, recruit);
        const double swapped_probability = forward(model, swapped.features);
        out << "swapped probability " << std::fixed << std::setprecision(4) << swapped_probability
            << " (the model is role-sensitive: recruit half first, manager half second)\n"
            << "note: synthetic ground-truth labels are symmetric under swapping the pair\n";
    }
}

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitIo = 3;

inline int exit_code_for(const std::exception &err) {
    if (dynamic_cast<const IoError *>(&err) != nullptr) {
        return kExitIo;
    }
    return kExitData;
}

}  // namespace compat
