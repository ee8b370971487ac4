#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "compat/dataset_io.hpp"
#include "compat/error.hpp"
#include "compat/io_util.hpp"
#include "compat/mlp.hpp"

#include <json.hpp>

namespace compat {

inline constexpr int kModelFormatVersion = 1;

inline void save_model(const std::filesystem::path &path, const MlpModel &model) {
    detail::check_consistent(model);
    const nlohmann::json doc = {
        {"format_version", kModelFormatVersion},
        {"layer_sizes", model.layer_sizes},
        {"hidden_activation", model.hidden_activation},
        {"output_activation", model.output_activation},
        {"input_scale", model.input_scale},
        {"feature_order", pair_feature_names()},
        {"weights", model.weights},
        {"biases", model.biases},
        {"training_seed", model.training_seed},
        {"threshold", model.threshold},
    };
    atomic_write_file(path, doc.dump(2) + "\n");
}

inline MlpModel load_model(const std::filesystem::path &path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error &err) {
        throw DataFormatError(path.string() + ": " + err.what());
    }
    MlpModel model;
    try {
        const int version = doc.at("format_version").get<int>();
        if (version != kModelFormatVersion) {
            throw DataFormatError(path.string() + ": unsupported format_version " +
                                  std::to_string(version) + " (expected " +
                                  std::to_string(kModelFormatVersion) + ")");
        }
        model.layer_sizes = doc.at("layer_sizes").get<std::vector<std::size_t>>();
        model.hidden_activation = doc.at("hidden_activation").get<std::string>();
        model.output_activation = doc.at("output_activation").get<std::string>();
        model.input_scale = doc.at("input_scale").get<double>();
        model.weights = doc.at("weights").get<std::vector<std::vector<double>>>();
        model.biases = doc.at("biases").get<std::vector<std::vector<double>>>();
        model.training_seed = doc.at("training_seed").get<std::uint32_t>();
        model.threshold = doc.at("threshold").get<double>();
        const auto feature_order = doc.at("feature_order").get<std::vector<std::string>>();
        if (feature_order != pair_feature_names()) {
            throw DataFormatError(path.string() + ": feature_order does not match the expected layout");
        }
    } catch (const nlohmann::json::exception &err) {
        throw DataFormatError(path.string() + ": " + err.what());
    }
    if (model.hidden_activation != kHiddenActivationRelu) {
        throw DataFormatError(path.string() + ": unsupported hidden_activation \"" +
                              model.hidden_activation + "\"");
    }
    if (model.output_activation != kOutputActivationLogistic) {
        throw DataFormatError(path.string() + ": unsupported output_activation \"" +
                              model.output_activation + "\"");
    }
    if (!(model.input_scale > 0.0)) {
        throw DataFormatError(path.string() + ": input_scale must be positive");
    }
    try {
        detail::check_consistent(model);
    } catch (const Error &err) {
        throw DataFormatError(path.string() + ": " + err.what());
    }
    return model;
}

}  // namespace compat
