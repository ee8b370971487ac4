#pragma once

#include <cstdint>
#include <filesystem>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "compat/error.hpp"
#include "compat/io_util.hpp"
#include "compat/profile.hpp"
#include "compat/rng.hpp"
#include "compat/synthgen.hpp"

#include <json.hpp>

namespace compat {

inline constexpr const char *kProfilesFileName = "profiles.csv";
inline constexpr const char *kPairsFileName = "pairs.csv";
inline constexpr const char *kMetadataFileName = "metadata.json";

/// Sidecar describing how a dataset was produced and how to re-derive
/// its train/validation/test partitions.
struct DatasetMetadata {
    std::size_t n = 0;
    std::uint32_t seed = 0;
    double cutoff = 0.0;
    double positive_share = 0.0;
    std::string generator = kGeneratorName;
    std::uint32_t split_seed = 0;
    double test_fraction = 0.2;
    double val_fraction = 0.2;
};

inline std::string profiles_csv_header() {
    std::string header = "id";
    for (const char *name : kAttributeNames) {
        header += ',';
        header += name;
    }
    return header;
}

inline std::string pairs_csv_header() {
    std::string header = "recruit_id,manager_id";
    for (const char *prefix : {"r_", "m_"}) {
        for (const char *name : kAttributeNames) {
            header += ',';
            header += prefix;
            header += name;
        }
    }
    header += ",label";
    return header;
}

/// The twelve pair-feature column names, recruit half first.
inline std::vector<std::string> pair_feature_names() {
    std::vector<std::string> names;
    names.reserve(kPairFeatureCount);
    for (const char *prefix : {"r_", "m_"}) {
        for (const char *name : kAttributeNames) {
            names.push_back(std::string(prefix) + name);
        }
    }
    return names;
}

inline void write_profiles_csv(const std::filesystem::path &path, const Population &pop) {
    std::string content = profiles_csv_header();
    content += '\n';
    for (const PersonalityProfile &profile : pop.profiles) {
        content += profile.id;
        for (const double score : profile.scores) {
            content += ',';
            content += format_double(score);
        }
        content += '\n';
    }
    atomic_write_file(path, content);
}

inline Population read_profiles_csv(const std::filesystem::path &path) {
    const std::string content = read_file(path);
    std::istringstream in(content);
    std::string line;
    if (!std::getline(in, line) || line != profiles_csv_header()) {
        throw DataFormatError(path.string() + ": expected header \"" + profiles_csv_header() + "\"");
    }
    Population pop;
    std::unordered_set<std::string> seen_ids;
    std::size_t line_number = 1;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty()) {
            continue;
        }
        const std::string context = path.string() + ":" + std::to_string(line_number);
        const auto fields = split_csv_line(line);
        if (fields.size() != 1 + kAttributeCount) {
            throw DataFormatError(context + ": expected " + std::to_string(1 + kAttributeCount) +
                                  " fields, got " + std::to_string(fields.size()));
        }
        std::vector<double> scores;
        scores.reserve(kAttributeCount);
        for (std::size_t i = 1; i < fields.size(); ++i) {
            scores.push_back(parse_double(fields[i], context));
        }
        PersonalityProfile profile;
        try {
            profile = validate_profile(std::string(fields[0]), scores);
        } catch (const Error &err) {
            throw DataFormatError(context + ": " + err.what());
        }
        if (!seen_ids.insert(profile.id).second) {
            throw DataFormatError(context + ": duplicate id \"" + profile.id + "\"");
        }
        pop.profiles.push_back(std::move(profile));
    }
    return pop;
}

inline void write_pairs_csv(const std::filesystem::path &path, const LabeledPairSet &set) {
    std::string content = pairs_csv_header();
    content += '\n';
    for (const PairSample &sample : set.samples) {
        content += sample.features.recruit_id;
        content += ',';
        content += sample.features.manager_id;
        for (const double feature : sample.features.features) {
            content += ',';
            content += format_double(feature);
        }
        content += ',';
        content += sample.label == 1 ? '1' : '0';
        content += '\n';
    }
    atomic_write_file(path, content);
}

/// Reads samples in file order; the cutoff lives in the metadata sidecar.
inline LabeledPairSet read_pairs_csv(const std::filesystem::path &path) {
    const std::string content = read_file(path);
    std::istringstream in(content);
    std::string line;
    if (!std::getline(in, line) || line != pairs_csv_header()) {
        throw DataFormatError(path.string() + ": expected header \"" + pairs_csv_header() + "\"");
    }
    LabeledPairSet set;
    std::size_t line_number = 1;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty()) {
            continue;
        }
        const std::string context = path.string() + ":" + std::to_string(line_number);
        const auto fields = split_csv_line(line);
        if (fields.size() != 3 + kPairFeatureCount) {
            throw DataFormatError(context + ": expected " + std::to_string(3 + kPairFeatureCount) +
                                  " fields, got " + std::to_string(fields.size()));
        }
        PairSample sample;
        sample.features.recruit_id = std::string(fields[0]);
        sample.features.manager_id = std::string(fields[1]);
        for (std::size_t i = 0; i < kPairFeatureCount; ++i) {
            const double value = parse_double(fields[2 + i], context);
            if (!(value >= kScoreMin && value <= kScoreMax)) {
                throw DataFormatError(context + ": feature " + std::to_string(i) + " = " +
                                      std::string(fields[2 + i]) + " outside [0, 10]");
            }
            sample.features.features[i] = value;
        }
        const std::string_view label = fields.back();
        if (label == "1") {
            sample.label = 1;
        } else if (label == "0") {
            sample.label = 0;
        } else {
            throw DataFormatError(context + ": label must be 0 or 1, got \"" + std::string(label) + "\"");
        }
        set.samples.push_back(std::move(sample));
    }
    return set;
}

inline void write_metadata(const std::filesystem::path &path, const DatasetMetadata &meta) {
    const nlohmann::json doc = {
        {"n", meta.n},
        {"seed", meta.seed},
        {"cutoff", meta.cutoff},
        {"positive_share", meta.positive_share},
        {"generator", meta.generator},
        {"split_seed", meta.split_seed},
        {"test_fraction", meta.test_fraction},
        {"val_fraction", meta.val_fraction},
    };
    atomic_write_file(path, doc.dump(2) + "\n");
}

inline DatasetMetadata read_metadata(const std::filesystem::path &path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error &err) {
        throw DataFormatError(path.string() + ": " + err.what());
    }
    DatasetMetadata meta;
    try {
        meta.n = doc.at("n").get<std::size_t>();
        meta.seed = doc.at("seed").get<std::uint32_t>();
        meta.cutoff = doc.at("cutoff").get<double>();
        meta.positive_share = doc.at("positive_share").get<double>();
        meta.generator = doc.at("generator").get<std::string>();
        meta.split_seed = doc.at("split_seed").get<std::uint32_t>();
        meta.test_fraction = doc.at("test_fraction").get<double>();
        meta.val_fraction = doc.at("val_fraction").get<double>();
    } catch (const nlohmann::json::exception &err) {
        throw DataFormatError(path.string() + ": " + err.what());
    }
    return meta;
}

}  // namespace compat
