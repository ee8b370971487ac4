#pragma once

#include <cstdint>
#include <iomanip>
#include <span>
#include <sstream>
#include <string>

#include "compat/error.hpp"

#include <json.hpp>

namespace compat {

/// Class 1 ("compatible") is the positive class.
struct ConfusionMatrix {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fn = 0;

    std::uint64_t total() const noexcept { return tp + fp + tn + fn; }
};

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::uint64_t support = 0;
    double support_fraction = 0.0;
    bool degenerate = false;  // some denominator was zero; affected metrics report 0
};

struct ClassificationReport {
    ClassMetrics class1;
    ClassMetrics class0;
    double accuracy = 0.0;
    std::uint64_t total = 0;
    std::uint64_t correct = 0;

    const ClassMetrics &for_class(int label) const { return label == 1 ? class1 : class0; }
};

// Below this support share the text report carries a small-support note.
inline constexpr double kSmallSupportFraction = 0.005;

inline ConfusionMatrix confusion(std::span<const int> predictions, std::span<const int> labels) {
    if (predictions.size() != labels.size()) {
        throw LengthMismatch(predictions.size(), labels.size());
    }
    if (predictions.empty()) {
        throw EmptyInput("cannot tally an empty prediction sequence");
    }
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const int pred = predictions[i];
        const int label = labels[i];
        if ((pred != 0 && pred != 1) || (label != 0 && label != 1)) {
            throw DataFormatError("predictions and labels must be 0 or 1");
        }
        if (label == 1) {
            pred == 1 ? ++cm.tp : ++cm.fn;
        } else {
            pred == 1 ? ++cm.fp : ++cm.tn;
        }
    }
    return cm;
}

namespace detail {

inline double safe_ratio(std::uint64_t numerator, std::uint64_t denominator, bool &degenerate) {
    if (denominator == 0) {
        degenerate = true;
        return 0.0;
    }
    return static_cast<double>(numerator) / static_cast<double>(denominator);
}

inline ClassMetrics class_metrics(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn,
                                  std::uint64_t total) {
    ClassMetrics m;
    m.precision = safe_ratio(tp, tp + fp, m.degenerate);
    m.recall = safe_ratio(tp, tp + fn, m.degenerate);
    if (m.precision + m.recall > 0.0) {
        m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
    } else {
        m.f1 = 0.0;
        m.degenerate = true;
    }
    m.support = tp + fn;
    m.support_fraction = static_cast<double>(m.support) / static_cast<double>(total);
    return m;
}

}  // namespace detail

inline double accuracy(const ConfusionMatrix &cm) {
    if (cm.total() == 0) {
        throw EmptyInput("cannot compute accuracy of an empty confusion matrix");
    }
    return static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
}

/// Per-class precision/recall/F1/support plus overall accuracy. Class-0
/// metrics come from swapping the positive class.
inline ClassificationReport report(const ConfusionMatrix &cm) {
    if (cm.total() == 0) {
        throw EmptyInput("cannot report on an empty confusion matrix");
    }
    ClassificationReport rep;
    rep.total = cm.total();
    rep.correct = cm.tp + cm.tn;
    rep.accuracy = accuracy(cm);
    rep.class1 = detail::class_metrics(cm.tp, cm.fp, cm.fn, rep.total);
    rep.class0 = detail::class_metrics(cm.tn, cm.fn, cm.fp, rep.total);
    return rep;
}

/// Aligned plain-text table: Class, Precision, Recall, F1-Score, Support.
inline std::string format_report(const ClassificationReport &rep) {
    std::ostringstream out;
    out << "Class  Precision  Recall  F1-Score  Support\n";
    const auto row = [&out](int label, const ClassMetrics &m) {
        out << std::setw(5) << label
            << "  " << std::setw(9) << std::fixed << std::setprecision(2) << m.precision
            << "  " << std::setw(6) << m.recall
            << "  " << std::setw(8) << m.f1
            << "  " << std::setprecision(3) << m.support_fraction * 100.0 << "% (" << m.support << ")\n";
    };
    row(1, rep.class1);
    row(0, rep.class0);
    out << "\nAccuracy: " << std::fixed << std::setprecision(4) << rep.accuracy
        << " (" << rep.correct << "/" << rep.total << ")\n";
    for (const int label : {1, 0}) {
        const ClassMetrics &m = rep.for_class(label);
        if (m.degenerate) {
            out << "note: class " << label << " has a zero-denominator metric reported as 0\n";
        }
        if (m.support_fraction < kSmallSupportFraction) {
            out << "note: class " << label << " support is below 0.5% of samples\n";
        }
    }
    return out.str();
}

inline nlohmann::json report_to_json(const ClassificationReport &rep) {
    const auto class_json = [](const ClassMetrics &m) {
        return nlohmann::json{
            {"precision", m.precision},       {"recall", m.recall},
            {"f1", m.f1},                     {"support", m.support},
            {"support_fraction", m.support_fraction}, {"degenerate", m.degenerate},
        };
    };
    return nlohmann::json{
        {"per_class", {{"1", class_json(rep.class1)}, {"0", class_json(rep.class0)}}},
        {"accuracy", rep.accuracy},
        {"total", rep.total},
        {"correct", rep.correct},
    };
}

}  // namespace compat
