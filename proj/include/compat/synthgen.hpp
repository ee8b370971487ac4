#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "compat/error.hpp"
#include "compat/profile.hpp"
#include "compat/rng.hpp"

namespace compat {

/// A generated set of individuals plus the seed that produced it.
struct Population {
    std::vector<PersonalityProfile> profiles;
    std::uint32_t seed = 0;

    std::size_t size() const noexcept { return profiles.size(); }
};

/// d[i][j] = distance from individual i's optimum to individual j.
/// Symmetric, since dist(10 - x_i, x_j) only depends on x_i + x_j.
struct DistanceMatrix {
    std::size_t n = 0;
    std::vector<double> d;  // n*n, row-major

    double at(std::size_t i, std::size_t j) const { return d[i * n + j]; }
    double &at(std::size_t i, std::size_t j) { return d[i * n + j]; }
};

/// All ordered pairs (i, j), i != j, with labels from the cutoff rule.
struct LabeledPairSet {
    std::vector<PairSample> samples;
    double cutoff = 0.0;
};

struct DatasetSplit {
    LabeledPairSet train;
    LabeledPairSet validation;
    LabeledPairSet test;
};

/// Each attribute drawn independently from the discrete uniform {0,...,10};
/// draw order is individual-major, attribute-minor.
inline Population generate_profiles(std::size_t n, std::uint32_t seed) {
    Population pop;
    pop.seed = seed;
    pop.profiles.reserve(n);
    std::mt19937 rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        PersonalityProfile profile;
        profile.id = "p" + std::to_string(i);
        for (std::size_t j = 0; j < kAttributeCount; ++j) {
            profile.scores[j] = static_cast<double>(uniform_int(rng, 0, 10));
        }
        pop.profiles.push_back(std::move(profile));
    }
    return pop;
}

/// Fills the full n x n grid; the diagonal (each individual against their
/// own optimum) is kept for diagnostics but takes no part in labeling.
inline DistanceMatrix distance_matrix(const Population &pop) {
    const std::size_t n = pop.size();
    if (n < 1) {
        throw PopulationTooSmall(n);
    }
    DistanceMatrix dm;
    dm.n = n;
    dm.d.resize(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        const PersonalityProfile optimum = optimum_profile(pop.profiles[i]);
        for (std::size_t j = 0; j < n; ++j) {
            dm.at(i, j) = euclidean_distance(optimum, pop.profiles[j]);
        }
    }
    return dm;
}

/// Max over individuals of their smallest optimum-to-other distance, so
/// that everyone keeps at least one compatible choice.
inline double cutoff_distance(const DistanceMatrix &dm) {
    if (dm.n < 2) {
        throw PopulationTooSmall(dm.n);
    }
    double cutoff = 0.0;
    for (std::size_t i = 0; i < dm.n; ++i) {
        double min_dist = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < dm.n; ++j) {
            if (j != i && dm.at(i, j) < min_dist) {
                min_dist = dm.at(i, j);
            }
        }
        if (min_dist > cutoff) {
            cutoff = min_dist;
        }
    }
    return cutoff;
}

/// Emits every ordered pair (i, j), i != j, in row-major order.
/// label = 1 iff d[i][j] <= cutoff (ties inclusive).
inline LabeledPairSet label_pairs(const Population &pop, const DistanceMatrix &dm, double cutoff) {
    if (!(cutoff >= 0.0)) {
        throw ConfigError("cutoff must be nonnegative");
    }
    if (pop.size() != dm.n) {
        throw ShapeMismatch("population size " + std::to_string(pop.size()) +
                            " does not match distance matrix size " + std::to_string(dm.n));
    }
    LabeledPairSet set;
    set.cutoff = cutoff;
    const std::size_t n = pop.size();
    set.samples.reserve(n > 0 ? n * (n - 1) : 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) {
                continue;
            }
            PairSample sample;
            sample.features = pair_features(pop.profiles[i], pop.profiles[j]);
            sample.label = dm.at(i, j) <= cutoff ? 1 : 0;
            set.samples.push_back(std::move(sample));
        }
    }
    return set;
}

inline LabeledPairSet build_dataset(std::size_t n, std::uint32_t seed) {
    const Population pop = generate_profiles(n, seed);
    const DistanceMatrix dm = distance_matrix(pop);
    const double cutoff = cutoff_distance(dm);
    return label_pairs(pop, dm, cutoff);
}

/// Seeded shuffle, then the tail becomes the test partition and the tail
/// of the remainder becomes validation. Kept counts are floored, so
/// 100 samples at 0.2/0.2 give 64/16/20.
inline DatasetSplit split_dataset(const LabeledPairSet &set, double test_fraction,
                                  double val_fraction, std::uint32_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0) || !(val_fraction > 0.0 && val_fraction < 1.0)) {
        throw ConfigError("split fractions must lie strictly between 0 and 1");
    }
    const std::size_t total = set.samples.size();
    std::mt19937 rng(seed);
    const std::vector<std::size_t> order = shuffled_indices(total, rng);

    const auto kept_after_test =
        static_cast<std::size_t>(std::floor((1.0 - test_fraction) * static_cast<double>(total)));
    const auto kept_after_val =
        static_cast<std::size_t>(std::floor((1.0 - val_fraction) * static_cast<double>(kept_after_test)));

    const std::size_t train_count = kept_after_val;
    const std::size_t val_count = kept_after_test - kept_after_val;
    const std::size_t test_count = total - kept_after_test;
    if (train_count == 0 || val_count == 0 || test_count == 0) {
        throw EmptySplit("split of " + std::to_string(total) + " samples leaves an empty partition (" +
                         std::to_string(train_count) + "/" + std::to_string(val_count) + "/" +
                         std::to_string(test_count) + ")");
    }

    DatasetSplit split;
    split.train.cutoff = split.validation.cutoff = split.test.cutoff = set.cutoff;
    split.train.samples.reserve(train_count);
    split.validation.samples.reserve(val_count);
    split.test.samples.reserve(test_count);
    for (std::size_t k = 0; k < total; ++k) {
        const PairSample &sample = set.samples[order[k]];
        if (k < kept_after_val) {
            split.train.samples.push_back(sample);
        } else if (k < kept_after_test) {
            split.validation.samples.push_back(sample);
        } else {
            split.test.samples.push_back(sample);
        }
    }
    return split;
}

}  // namespace compat
