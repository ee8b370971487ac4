#pragma once

#include <array>
#include <cmath>
#include <span>
#include <string>

#include "compat/error.hpp"

namespace compat {

inline constexpr std::size_t kAttributeCount = 6;
inline constexpr std::size_t kPairFeatureCount = 2 * kAttributeCount;
inline constexpr double kScoreMin = 0.0;
inline constexpr double kScoreMax = 10.0;

// Attribute order is fixed; it defines the layout of every feature vector
// and CSV column in the project.
inline constexpr std::array<const char *, kAttributeCount> kAttributeNames = {
    "faith", "decisiveness", "adaptability", "dominance", "ambition", "emotional_management",
};

// Suffix appended to an id by optimum_profile.
inline constexpr const char *kOptimumIdSuffix = "_opt";

/// Six bounded test scores for one individual.
struct PersonalityProfile {
    std::string id;
    std::array<double, kAttributeCount> scores{};
};

/// Recruit scores followed by manager scores.
struct PairFeatures {
    std::string recruit_id;
    std::string manager_id;
    std::array<double, kPairFeatureCount> features{};
};

/// A pair feature vector with its binary compatibility label.
struct PairSample {
    PairFeatures features;
    int label = 0;
};

inline PersonalityProfile validate_profile(std::string id, std::span<const double> raw_scores) {
    if (raw_scores.size() != kAttributeCount) {
        throw WrongArity(kAttributeCount, raw_scores.size());
    }
    PersonalityProfile profile;
    profile.id = std::move(id);
    for (std::size_t i = 0; i < kAttributeCount; ++i) {
        const double score = raw_scores[i];
        if (!(score >= kScoreMin && score <= kScoreMax)) {
            throw OutOfRange(kAttributeNames[i], i, score);
        }
        profile.scores[i] = score;
    }
    return profile;
}

/// The hypothesized ideal counterpart: every score mirrored about the
/// scale midpoint.
inline PersonalityProfile optimum_profile(const PersonalityProfile &x) {
    PersonalityProfile y;
    y.id = x.id + kOptimumIdSuffix;
    for (std::size_t i = 0; i < kAttributeCount; ++i) {
        y.scores[i] = kScoreMax - x.scores[i];
    }
    return y;
}

inline double euclidean_distance(const PersonalityProfile &a, const PersonalityProfile &b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < kAttributeCount; ++i) {
        const double diff = a.scores[i] - b.scores[i];
        sum += diff * diff;
    }
    return std::sqrt(sum);
}

inline PairFeatures pair_features(const PersonalityProfile &recruit, const PersonalityProfile &manager) {
    PairFeatures pair;
    pair.recruit_id = recruit.id;
    pair.manager_id = manager.id;
    for (std::size_t i = 0; i < kAttributeCount; ++i) {
        pair.features[i] = recruit.scores[i];
        pair.features[kAttributeCount + i] = manager.scores[i];
    }
    return pair;
}

}  // namespace compat
