#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "compat/error.hpp"
#include "compat/profile.hpp"
#include "compat/rng.hpp"

namespace compat {

inline constexpr double kBceEpsilon = 1e-7;

inline constexpr const char *kHiddenActivationRelu = "relu";
inline constexpr const char *kOutputActivationLogistic = "logistic";

/// Dense feedforward net: rectifier hidden layers, logistic output unit.
/// weights[l] is row-major fan_out x fan_in; raw features are divided by
/// input_scale before the first layer.
struct MlpModel {
    std::vector<std::size_t> layer_sizes;
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;
    std::string hidden_activation = kHiddenActivationRelu;
    std::string output_activation = kOutputActivationLogistic;
    double input_scale = 10.0;
    std::uint32_t training_seed = 0;
    double threshold = 0.5;

    std::size_t layer_count() const noexcept { return weights.size(); }
};

struct TrainConfig {
    double learning_rate = 0.01;
    std::size_t batch_size = 32;
    std::size_t max_epochs = 200;
    std::size_t patience = 5;
    double min_delta = 1e-4;
    std::uint32_t seed = 0;
    double threshold = 0.5;
};

struct EpochStats {
    double train_loss = 0.0;
    double val_loss = 0.0;
    double train_accuracy = 0.0;
    double val_accuracy = 0.0;
};

/// best_epoch 0 means no epoch improved on the initial weights.
struct TrainingHistory {
    std::vector<EpochStats> epochs;
    std::size_t stopped_epoch = 0;
    std::size_t best_epoch = 0;
};

/// Same shapes as the model's weights and biases.
struct Gradients {
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;
};

namespace detail {

// Scratch buffers so the training loop does not allocate per sample.
struct MlpWorkspace {
    std::vector<std::vector<double>> activations;  // [0] scaled input, [l+1] layer l output
    std::vector<std::vector<double>> deltas;       // per layer

    void resize_for(const MlpModel &model) {
        const std::size_t layers = model.layer_count();
        activations.resize(layers + 1);
        deltas.resize(layers);
        for (std::size_t l = 0; l <= layers; ++l) {
            activations[l].assign(model.layer_sizes[l], 0.0);
        }
        for (std::size_t l = 0; l < layers; ++l) {
            deltas[l].assign(model.layer_sizes[l + 1], 0.0);
        }
    }
};

inline double logistic(double z) {
    return 1.0 / (1.0 + std::exp(-z));
}

inline void check_consistent(const MlpModel &model) {
    const std::size_t layers = model.layer_sizes.size();
    if (layers < 2 || model.weights.size() != layers - 1 || model.biases.size() != layers - 1) {
        throw BadArchitecture("model must chain at least two layer sizes with matching weights/biases");
    }
    for (std::size_t l = 0; l + 1 < layers; ++l) {
        const std::size_t fan_in = model.layer_sizes[l];
        const std::size_t fan_out = model.layer_sizes[l + 1];
        if (model.weights[l].size() != fan_in * fan_out || model.biases[l].size() != fan_out) {
            throw BadArchitecture("layer " + std::to_string(l) + " weight shape does not chain " +
                                  std::to_string(fan_in) + " -> " + std::to_string(fan_out));
        }
    }
}

inline double forward_into(const MlpModel &model, std::span<const double> features, MlpWorkspace &ws) {
    std::vector<double> &input = ws.activations[0];
    for (std::size_t i = 0; i < features.size(); ++i) {
        input[i] = features[i] / model.input_scale;
    }
    const std::size_t layers = model.layer_count();
    for (std::size_t l = 0; l < layers; ++l) {
        const std::size_t fan_in = model.layer_sizes[l];
        const std::size_t fan_out = model.layer_sizes[l + 1];
        const std::vector<double> &in = ws.activations[l];
        std::vector<double> &out = ws.activations[l + 1];
        const double *weights = model.weights[l].data();
        const bool last = l + 1 == layers;
        for (std::size_t r = 0; r < fan_out; ++r) {
            const double *row = weights + r * fan_in;
            double z = model.biases[l][r];
            for (std::size_t c = 0; c < fan_in; ++c) {
                z += row[c] * in[c];
            }
            out[r] = last ? logistic(z) : std::max(0.0, z);
        }
    }
    return ws.activations[layers][0];
}

// Backprop one sample on top of a forward pass already in ws; adds the
// sample's parameter gradients into grads (no batch scaling here).
inline void accumulate_sample_gradient(const MlpModel &model, double prediction, int label,
                                       MlpWorkspace &ws, Gradients &grads) {
    const std::size_t layers = model.layer_count();
    // Fused logistic + BCE output delta.
    ws.deltas[layers - 1][0] = prediction - static_cast<double>(label);
    for (std::size_t l = layers; l-- > 0;) {
        const std::size_t fan_in = model.layer_sizes[l];
        const std::size_t fan_out = model.layer_sizes[l + 1];
        const std::vector<double> &in = ws.activations[l];
        const std::vector<double> &delta = ws.deltas[l];
        double *grad_w = grads.weights[l].data();
        double *grad_b = grads.biases[l].data();
        for (std::size_t r = 0; r < fan_out; ++r) {
            const double d = delta[r];
            grad_b[r] += d;
            double *grad_row = grad_w + r * fan_in;
            for (std::size_t c = 0; c < fan_in; ++c) {
                grad_row[c] += d * in[c];
            }
        }
        if (l == 0) {
            break;
        }
        std::vector<double> &prev = ws.deltas[l - 1];
        std::fill(prev.begin(), prev.end(), 0.0);
        const double *weights = model.weights[l].data();
        for (std::size_t r = 0; r < fan_out; ++r) {
            const double d = delta[r];
            const double *row = weights + r * fan_in;
            for (std::size_t c = 0; c < fan_in; ++c) {
                prev[c] += d * row[c];
            }
        }
        // Rectifier gate: activation 0 means the unit was off.
        for (std::size_t c = 0; c < fan_in; ++c) {
            if (!(in[c] > 0.0)) {
                prev[c] = 0.0;
            }
        }
    }
}

inline Gradients zero_gradients(const MlpModel &model) {
    Gradients grads;
    grads.weights.resize(model.layer_count());
    grads.biases.resize(model.layer_count());
    for (std::size_t l = 0; l < model.layer_count(); ++l) {
        grads.weights[l].assign(model.weights[l].size(), 0.0);
        grads.biases[l].assign(model.biases[l].size(), 0.0);
    }
    return grads;
}

inline void scale_gradients(Gradients &grads, double factor) {
    for (auto &layer : grads.weights) {
        for (double &g : layer) {
            g *= factor;
        }
    }
    for (auto &layer : grads.biases) {
        for (double &g : layer) {
            g *= factor;
        }
    }
}

}  // namespace detail

/// He-scaled zero-mean weights, zero biases. Draw order is layer, then
/// row, then column, so a seed pins every parameter.
inline MlpModel init_model(std::vector<std::size_t> layer_sizes, std::uint32_t seed) {
    if (layer_sizes.size() < 2) {
        throw BadArchitecture("need at least an input and an output layer");
    }
    if (layer_sizes.front() != kPairFeatureCount) {
        throw BadArchitecture("input layer must have " + std::to_string(kPairFeatureCount) + " units");
    }
    if (layer_sizes.back() != 1) {
        throw BadArchitecture("output layer must have exactly 1 unit");
    }
    for (const std::size_t size : layer_sizes) {
        if (size == 0) {
            throw BadArchitecture("layer sizes must be positive");
        }
    }
    MlpModel model;
    model.layer_sizes = std::move(layer_sizes);
    model.training_seed = seed;
    std::mt19937 rng(seed);
    for (std::size_t l = 0; l + 1 < model.layer_sizes.size(); ++l) {
        const std::size_t fan_in = model.layer_sizes[l];
        const std::size_t fan_out = model.layer_sizes[l + 1];
        const double scale = std::sqrt(2.0 / static_cast<double>(fan_in));
        std::vector<double> weights(fan_in * fan_out);
        for (double &w : weights) {
            w = standard_normal(rng) * scale;
        }
        model.weights.push_back(std::move(weights));
        model.biases.emplace_back(fan_out, 0.0);
    }
    return model;
}

/// Compatibility probability for one feature vector.
inline double forward(const MlpModel &model, std::span<const double> features) {
    detail::check_consistent(model);
    if (features.size() != model.layer_sizes.front()) {
        throw ShapeMismatch("feature vector of length " + std::to_string(features.size()) +
                            " does not match input layer of " + std::to_string(model.layer_sizes.front()));
    }
    detail::MlpWorkspace ws;
    ws.resize_for(model);
    return detail::forward_into(model, features, ws);
}

/// Prediction clipped away from {0, 1} before the logarithms.
inline double bce_loss(double prediction, int label) {
    const double p = std::clamp(prediction, kBceEpsilon, 1.0 - kBceEpsilon);
    const double y = static_cast<double>(label);
    return -(y * std::log(p) + (1.0 - y) * std::log(1.0 - p));
}

/// Gradient of the mean batch BCE with respect to every parameter.
inline Gradients backward(const MlpModel &model, std::span<const PairSample> batch) {
    detail::check_consistent(model);
    if (batch.empty()) {
        throw EmptyDataset("cannot compute a gradient over an empty batch");
    }
    if (model.layer_sizes.front() != kPairFeatureCount) {
        throw ShapeMismatch("model input layer does not accept pair feature vectors");
    }
    Gradients grads = detail::zero_gradients(model);
    detail::MlpWorkspace ws;
    ws.resize_for(model);
    for (const PairSample &sample : batch) {
        const double p = detail::forward_into(model, sample.features.features, ws);
        detail::accumulate_sample_gradient(model, p, sample.label, ws, grads);
    }
    detail::scale_gradients(grads, 1.0 / static_cast<double>(batch.size()));
    return grads;
}

/// Plain descent: w <- w - lr * grad.
inline void sgd_step(MlpModel &model, const Gradients &grads, double learning_rate) {
    if (grads.weights.size() != model.layer_count() || grads.biases.size() != model.layer_count()) {
        throw ShapeMismatch("gradient layer count does not match the model");
    }
    for (std::size_t l = 0; l < model.layer_count(); ++l) {
        if (grads.weights[l].size() != model.weights[l].size() ||
            grads.biases[l].size() != model.biases[l].size()) {
            throw ShapeMismatch("gradient shape mismatch at layer " + std::to_string(l));
        }
        for (std::size_t i = 0; i < model.weights[l].size(); ++i) {
            model.weights[l][i] -= learning_rate * grads.weights[l][i];
        }
        for (std::size_t i = 0; i < model.biases[l].size(); ++i) {
            model.biases[l][i] -= learning_rate * grads.biases[l][i];
        }
    }
}

inline int predict_label(const MlpModel &model, std::span<const double> features, double threshold) {
    return forward(model, features) >= threshold ? 1 : 0;
}

namespace detail {

struct SetStats {
    double loss = 0.0;
    double accuracy = 0.0;
};

inline SetStats evaluate_set(const MlpModel &model, std::span<const PairSample> samples,
                             double threshold, MlpWorkspace &ws) {
    SetStats stats;
    std::size_t correct = 0;
    for (const PairSample &sample : samples) {
        const double p = forward_into(model, sample.features.features, ws);
        stats.loss += bce_loss(p, sample.label);
        if ((p >= threshold ? 1 : 0) == sample.label) {
            ++correct;
        }
    }
    stats.loss /= static_cast<double>(samples.size());
    stats.accuracy = static_cast<double>(correct) / static_cast<double>(samples.size());
    return stats;
}

}  // namespace detail

/// Mini-batch gradient descent with early stopping on validation loss.
/// Returns the weights from the best validation epoch (the initial model
/// counts as epoch 0, so the result is never worse than the start).
inline std::pair<MlpModel, TrainingHistory> train(MlpModel model, std::span<const PairSample> train_set,
                                                  std::span<const PairSample> val_set,
                                                  const TrainConfig &config) {
    detail::check_consistent(model);
    if (train_set.empty() || val_set.empty()) {
        throw EmptyDataset("training and validation sets must be non-empty");
    }
    if (model.layer_sizes.front() != kPairFeatureCount) {
        throw ShapeMismatch("model input layer does not accept pair feature vectors");
    }
    if (!(config.learning_rate > 0.0)) {
        throw ConfigError("learning_rate must be positive");
    }
    if (config.batch_size < 1 || config.max_epochs < 1 || config.patience < 1) {
        throw ConfigError("batch_size, max_epochs and patience must all be at least 1");
    }
    if (!(config.threshold > 0.0 && config.threshold < 1.0)) {
        throw ConfigError("threshold must lie strictly between 0 and 1");
    }

    model.threshold = config.threshold;
    detail::MlpWorkspace ws;
    ws.resize_for(model);
    Gradients grads = detail::zero_gradients(model);

    MlpModel best_model = model;
    double best_val_loss = detail::evaluate_set(model, val_set, config.threshold, ws).loss;
    std::size_t best_epoch = 0;
    std::size_t epochs_without_improvement = 0;

    TrainingHistory history;
    std::mt19937 shuffle_rng(config.seed);
    std::vector<std::size_t> order(train_set.size());

    for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
        for (std::size_t i = 0; i < order.size(); ++i) {
            order[i] = i;
        }
        shuffle_inplace(order, shuffle_rng);

        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t end = std::min(start + config.batch_size, order.size());
            for (auto &layer : grads.weights) {
                std::fill(layer.begin(), layer.end(), 0.0);
            }
            for (auto &layer : grads.biases) {
                std::fill(layer.begin(), layer.end(), 0.0);
            }
            for (std::size_t k = start; k < end; ++k) {
                const PairSample &sample = train_set[order[k]];
                const double p = detail::forward_into(model, sample.features.features, ws);
                detail::accumulate_sample_gradient(model, p, sample.label, ws, grads);
            }
            detail::scale_gradients(grads, 1.0 / static_cast<double>(end - start));
            sgd_step(model, grads, config.learning_rate);
        }

        const detail::SetStats train_stats = detail::evaluate_set(model, train_set, config.threshold, ws);
        const detail::SetStats val_stats = detail::evaluate_set(model, val_set, config.threshold, ws);
        history.epochs.push_back({train_stats.loss, val_stats.loss, train_stats.accuracy, val_stats.accuracy});

        if (val_stats.loss < best_val_loss - config.min_delta) {
            best_val_loss = val_stats.loss;
            best_model = model;
            best_epoch = epoch;
            epochs_without_improvement = 0;
        } else {
            ++epochs_without_improvement;
            if (epochs_without_improvement >= config.patience) {
                break;
            }
        }
    }

    history.stopped_epoch = history.epochs.size();
    history.best_epoch = best_epoch;
    return {std::move(best_model), std::move(history)};
}

}  // namespace compat
