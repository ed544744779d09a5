#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "planvec/mask_io.hpp"

namespace planvec {

struct BinaryCounts {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;
    std::uint64_t tn = 0;

    std::uint64_t total() const { return tp + fp + fn + tn; }
};

/// Full truth-by-prediction pixel table plus the classes under evaluation.
/// One-vs-rest counts for any class or union of classes derive from it.
class ConfusionMatrix {
public:
    ConfusionMatrix(std::vector<ClassId> classes, std::array<std::array<std::uint64_t, ClassId::kCount>, ClassId::kCount> table);

    const std::vector<ClassId>& classes() const noexcept { return classes_; }
    std::uint64_t count(ClassId truth, ClassId predicted) const {
        return table_[static_cast<std::size_t>(truth.value())][static_cast<std::size_t>(predicted.value())];
    }
    std::uint64_t total() const noexcept { return total_; }

    BinaryCounts counts(ClassId cls) const;
    /// Counts for the union of several classes treated as one.
    BinaryCounts counts(std::span<const ClassId> merged) const;

private:
    std::vector<ClassId> classes_;
    std::array<std::array<std::uint64_t, ClassId::kCount>, ClassId::kCount> table_{};
    std::uint64_t total_ = 0;
};

/// Pixel counts of pred vs truth. Throws DimensionMismatch or EmptyClassSet.
ConfusionMatrix confusion(const SegMask& pred, const SegMask& truth, std::span<const ClassId> classes);

/// Defaults to the seven structural classes.
ConfusionMatrix confusion(const SegMask& pred, const SegMask& truth);

struct ClassMerge {
    std::string name;
    std::vector<ClassId> members;
};

/// Parses `door+window=openings` (class names or ids joined by '+').
ClassMerge parse_class_merge(std::string_view spec);

struct MetricRow {
    std::string name;
    double recall = 0.0;
    double precision = 0.0;
    double f1 = 0.0;
    double iou = 0.0;
    double accuracy = 0.0;
};

struct MetricReport {
    std::vector<MetricRow> rows;
    MetricRow mean;
};

MetricRow score(const BinaryCounts& counts, std::string name);

/// One row per evaluated class not absorbed by a merge, then one row per
/// merge; the mean row is the unweighted average of those rows. A ratio
/// with a zero denominator is 1 when the class is absent from both masks
/// and 0 otherwise.
MetricReport report(const ConfusionMatrix& cm, std::span<const ClassMerge> merges = {});

/// Aligned plain-text table: class, Rec., Prec., F1, IoU, Acc.
std::string format_report_table(const MetricReport& report);

/// `row.metric=value` lines with 6 decimals.
std::string format_report_key_values(const MetricReport& report);

}  // namespace planvec
