#include "planvec/metrics.hpp"

#include <algorithm>
#include <cctype>

#include <fmt/format.h>

#include "planvec/key_value.hpp"

namespace planvec {

ConfusionMatrix::ConfusionMatrix(std::vector<ClassId> classes,
                                 std::array<std::array<std::uint64_t, ClassId::kCount>, ClassId::kCount> table)
    : classes_(std::move(classes)), table_(table) {
    for (const auto& row : table_) {
        for (std::uint64_t v : row) total_ += v;
    }
}

BinaryCounts ConfusionMatrix::counts(ClassId cls) const {
    const ClassId one[] = {cls};
    return counts(one);
}

BinaryCounts ConfusionMatrix::counts(std::span<const ClassId> merged) const {
    std::array<bool, ClassId::kCount> in{};
    for (ClassId c : merged) in[static_cast<std::size_t>(c.value())] = true;
    BinaryCounts bc;
    for (std::size_t t = 0; t < ClassId::kCount; ++t) {
        for (std::size_t p = 0; p < ClassId::kCount; ++p) {
            const std::uint64_t n = table_[t][p];
            if (in[t] && in[p]) bc.tp += n;
            else if (!in[t] && in[p]) bc.fp += n;
            else if (in[t] && !in[p]) bc.fn += n;
            else bc.tn += n;
        }
    }
    return bc;
}

ConfusionMatrix confusion(const SegMask& pred, const SegMask& truth, std::span<const ClassId> classes) {
    if (!pred.same_shape(truth)) {
        throw Error(ErrorCode::DimensionMismatch, fmt::format("prediction is {}x{}, truth is {}x{}", pred.width(),
                                                              pred.height(), truth.width(), truth.height()));
    }
    if (classes.empty()) {
        throw Error(ErrorCode::EmptyClassSet, "no classes to evaluate");
    }
    std::array<std::array<std::uint64_t, ClassId::kCount>, ClassId::kCount> table{};
    for (std::size_t i = 0; i < pred.size(); ++i) {
        ++table[static_cast<std::size_t>(truth[i].value())][static_cast<std::size_t>(pred[i].value())];
    }
    return ConfusionMatrix({classes.begin(), classes.end()}, table);
}

ConfusionMatrix confusion(const SegMask& pred, const SegMask& truth) {
    return confusion(pred, truth, classes::kStructural);
}

ClassMerge parse_class_merge(std::string_view spec) {
    const std::size_t eq = spec.find('=');
    if (eq == std::string_view::npos) {
        throw Error(ErrorCode::Config, fmt::format("merge '{}' lacks '=name'", spec));
    }
    ClassMerge merge;
    merge.name = trim(spec.substr(eq + 1));
    if (merge.name.empty()) throw Error(ErrorCode::Config, fmt::format("merge '{}' has an empty name", spec));
    for (const auto& part : split(spec.substr(0, eq), '+')) {
        if (part.empty()) throw Error(ErrorCode::Config, fmt::format("merge '{}' has an empty member", spec));
        try {
            merge.members.push_back(parse_class(part));
        } catch (const Error& e) {
            throw Error(ErrorCode::Config, e.what());
        }
    }
    return merge;
}

namespace {

double ratio(std::uint64_t num, std::uint64_t den, bool absent) {
    if (den == 0) return absent ? 1.0 : 0.0;
    return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

MetricRow score(const BinaryCounts& c, std::string name) {
    const bool absent = c.tp + c.fp + c.fn == 0;
    MetricRow row;
    row.name = std::move(name);
    row.recall = ratio(c.tp, c.tp + c.fn, absent);
    row.precision = ratio(c.tp, c.tp + c.fp, absent);
    if (absent) {
        row.f1 = 1.0;
    } else {
        const double pr = row.precision + row.recall;
        row.f1 = pr > 0 ? 2 * row.precision * row.recall / pr : 0.0;
    }
    row.iou = ratio(c.tp, c.tp + c.fp + c.fn, absent);
    row.accuracy = ratio(c.tp + c.tn, c.total(), true);
    return row;
}

MetricReport report(const ConfusionMatrix& cm, std::span<const ClassMerge> merges) {
    MetricReport rep;
    std::array<bool, ClassId::kCount> absorbed{};
    for (const ClassMerge& m : merges) {
        for (ClassId c : m.members) absorbed[static_cast<std::size_t>(c.value())] = true;
    }
    for (ClassId cls : cm.classes()) {
        if (absorbed[static_cast<std::size_t>(cls.value())]) continue;
        rep.rows.push_back(score(cm.counts(cls), class_info(cls).name));
    }
    for (const ClassMerge& m : merges) {
        rep.rows.push_back(score(cm.counts(m.members), m.name));
    }
    rep.mean.name = "Mean";
    if (!rep.rows.empty()) {
        for (const MetricRow& r : rep.rows) {
            rep.mean.recall += r.recall;
            rep.mean.precision += r.precision;
            rep.mean.f1 += r.f1;
            rep.mean.iou += r.iou;
            rep.mean.accuracy += r.accuracy;
        }
        const double n = static_cast<double>(rep.rows.size());
        rep.mean.recall /= n;
        rep.mean.precision /= n;
        rep.mean.f1 /= n;
        rep.mean.iou /= n;
        rep.mean.accuracy /= n;
    }
    return rep;
}

std::string format_report_table(const MetricReport& rep) {
    std::size_t width = 5;
    for (const MetricRow& r : rep.rows) width = std::max(width, r.name.size());
    std::string out = fmt::format("{:<{}}  {:>6}  {:>6}  {:>6}  {:>6}  {:>6}\n", "Class", width, "Rec.", "Prec.", "F1",
                                  "IoU", "Acc.");
    auto line = [&](const MetricRow& r) {
        out += fmt::format("{:<{}}  {:>6.2f}  {:>6.2f}  {:>6.2f}  {:>6.2f}  {:>6.2f}\n", r.name, width, r.recall,
                           r.precision, r.f1, r.iou, r.accuracy);
    };
    for (const MetricRow& r : rep.rows) line(r);
    out += std::string(width + 2 + 5 * 8 - 2, '-') + "\n";
    line(rep.mean);
    return out;
}

std::string format_report_key_values(const MetricReport& rep) {
    std::string out;
    auto emit = [&](const MetricRow& r) {
        std::string key;
        for (char c : r.name) key.push_back(c == ' ' ? '_' : static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        out += fmt::format("{0}.recall={1:.6f}\n{0}.precision={2:.6f}\n{0}.f1={3:.6f}\n{0}.iou={4:.6f}\n{0}.accuracy={5:.6f}\n",
                           key, r.recall, r.precision, r.f1, r.iou, r.accuracy);
    };
    for (const MetricRow& r : rep.rows) emit(r);
    emit(rep.mean);
    return out;
}

}  // namespace planvec
