#ifndef TRIWIN_DATASET_HPP
#define TRIWIN_DATASET_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "triwin/csv.hpp"
#include "triwin/errors.hpp"
#include "triwin/rng.hpp"

namespace triwin {

/// Feature matrix with +/-1 labels. +1 is the minority (positive) class.
struct labeled_dataset {
    Eigen::MatrixXd features; // m x d
    Eigen::VectorXi labels;   // m entries in {+1, -1}
    std::string name;

    Eigen::Index size() const { return features.rows(); }
    Eigen::Index dim() const { return features.cols(); }

    Eigen::Index count(int label) const {
        Eigen::Index c = 0;
        for (Eigen::Index i = 0; i < labels.size(); ++i)
            if (labels[i] == label) ++c;
        return c;
    }

    std::vector<Eigen::Index> indices_of(int label) const {
        std::vector<Eigen::Index> idx;
        for (Eigen::Index i = 0; i < labels.size(); ++i)
            if (labels[i] == label) idx.push_back(i);
        return idx;
    }
};

struct dataset_manifest {
    std::string source_path;
    std::string label_column;        // column name, or decimal index if numeric
    bool label_column_is_index = false;
    int label_column_index = -1;
    std::set<std::string> positive_classes;
    std::set<std::string> negative_classes;
    bool normalize = true;
    std::string name; // optional; defaults to the source file stem
};

struct fold_plan {
    int n_folds = 0;
    std::uint64_t seed = 0;
    std::vector<int> assignments; // per-sample fold index in [0, n_folds)
};

inline labeled_dataset take_rows(const labeled_dataset& ds,
                                 const std::vector<Eigen::Index>& rows,
                                 const std::string& name) {
    labeled_dataset out;
    out.name = name;
    out.features.resize(static_cast<Eigen::Index>(rows.size()), ds.dim());
    out.labels.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.features.row(static_cast<Eigen::Index>(i)) = ds.features.row(rows[i]);
        out.labels[static_cast<Eigen::Index>(i)] = ds.labels[rows[i]];
    }
    return out;
}

inline void validate_dataset(const labeled_dataset& ds) {
    if (ds.size() < 2) throw too_few_samples(ds.name + ": m must be >= 2");
    if (ds.dim() < 1) throw too_few_samples(ds.name + ": d must be >= 1");
    if (!ds.features.allFinite())
        throw parse_error(0, 0, ds.name + ": non-finite feature value");
    const auto pos = ds.count(+1);
    const auto neg = ds.count(-1);
    if (pos == 0) throw empty_class("positive");
    if (neg == 0) throw empty_class("negative");
}

inline void minmax_normalize(Eigen::MatrixXd& X) {
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
        double lo = X.col(j).minCoeff();
        double hi = X.col(j).maxCoeff();
        if (hi - lo < 1e-300)
            X.col(j).setZero(); // constant column
        else
            X.col(j) = (X.col(j).array() - lo) / (hi - lo);
    }
}

/// Load a CSV per the manifest: binarize labels by class sets, drop rows whose
/// raw label is in neither set, optionally min-max scale columns to [0,1].
inline labeled_dataset load_dataset(const dataset_manifest& mf) {
    csv_table t = read_csv(mf.source_path);
    if (t.header.empty()) throw parse_error(1, 1, "empty file or missing header");

    std::size_t label_col;
    if (mf.label_column_is_index) {
        if (mf.label_column_index < 0 ||
            static_cast<std::size_t>(mf.label_column_index) >= t.header.size())
            throw config_error("label column index out of range");
        label_col = static_cast<std::size_t>(mf.label_column_index);
    } else {
        label_col = t.column_index(mf.label_column);
    }
    if (mf.positive_classes.empty() || mf.negative_classes.empty())
        throw config_error("both class sets must be non-empty");
    for (const auto& c : mf.positive_classes)
        if (mf.negative_classes.count(c))
            throw config_error("class sets overlap on '" + c + "'");

    const std::size_t d = t.header.size() - 1;
    std::vector<double> feats;
    std::vector<int> labels;
    std::size_t dropped = 0;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& cells = t.rows[r];
        if (cells.size() != t.header.size())
            throw parse_error(r + 2, cells.size() + 1, "row width differs from header");
        int y;
        const std::string& raw = cells[label_col];
        if (mf.positive_classes.count(raw)) y = +1;
        else if (mf.negative_classes.count(raw)) y = -1;
        else { ++dropped; continue; }
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (c == label_col) continue;
            feats.push_back(parse_double(cells[c], r + 2, c + 1));
        }
        labels.push_back(y);
    }
    if (dropped > 0)
        std::cerr << "[triwin] " << mf.source_path << ": dropped " << dropped
                  << " rows with unlisted labels\n";

    labeled_dataset ds;
    ds.name = mf.name.empty() ? mf.source_path : mf.name;
    const auto m = static_cast<Eigen::Index>(labels.size());
    ds.features.resize(m, static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(d); ++j)
            ds.features(i, j) = feats[static_cast<std::size_t>(i) * d +
                                      static_cast<std::size_t>(j)];
    ds.labels = Eigen::Map<Eigen::VectorXi>(labels.data(), m);

    if (std::count(labels.begin(), labels.end(), +1) == 0) throw empty_class("positive");
    if (std::count(labels.begin(), labels.end(), -1) == 0) throw empty_class("negative");
    if (ds.count(+1) > ds.count(-1))
        throw config_error(ds.name + ": positive class set must select the minority");
    if (mf.normalize) minmax_normalize(ds.features);
    validate_dataset(ds);
    return ds;
}

/// count(-1) / count(+1)
inline double imbalance_ratio(const labeled_dataset& ds) {
    return static_cast<double>(ds.count(-1)) / static_cast<double>(ds.count(+1));
}

/// Derive a dataset with the requested imbalance ratio by shrinking one class.
/// Raising the IR drops positives; lowering it drops negatives. Never duplicates.
inline labeled_dataset subsample_to_ir(const labeled_dataset& ds, double target_ir,
                                       std::uint64_t seed) {
    if (!(target_ir >= 1.0)) throw unachievable_ir("target must be >= 1");
    auto pos = ds.indices_of(+1);
    auto neg = ds.indices_of(-1);
    const double current = static_cast<double>(neg.size()) / static_cast<double>(pos.size());

    std::vector<Eigen::Index> keep_pos = pos, keep_neg = neg;
    rng gen(derive_seed(seed, "subsample_to_ir"));
    if (target_ir >= current) {
        // the tiny nudge keeps exact-boundary targets (e.g. the current IR)
        // from flooring one sample low
        auto want = static_cast<std::size_t>(
            std::floor(static_cast<double>(neg.size()) / target_ir + 1e-9));
        if (want < 5)
            throw unachievable_ir("would retain " + std::to_string(want) +
                                  " positives (< 5)");
        if (want < pos.size()) {
            auto chosen = gen.sample_without_replacement(pos.size(), want);
            std::sort(chosen.begin(), chosen.end());
            keep_pos.clear();
            for (auto c : chosen) keep_pos.push_back(pos[c]);
        }
    } else {
        if (pos.size() < 5)
            throw unachievable_ir("only " + std::to_string(pos.size()) +
                                  " positives available (< 5)");
        auto want = static_cast<std::size_t>(
            std::floor(static_cast<double>(pos.size()) * target_ir + 1e-9));
        if (want < neg.size()) {
            auto chosen = gen.sample_without_replacement(neg.size(), want);
            std::sort(chosen.begin(), chosen.end());
            keep_neg.clear();
            for (auto c : chosen) keep_neg.push_back(neg[c]);
        }
    }
    std::vector<Eigen::Index> rows = keep_pos;
    rows.insert(rows.end(), keep_neg.begin(), keep_neg.end());
    std::sort(rows.begin(), rows.end());
    return take_rows(ds, rows, ds.name);
}

/// Seeded stratified fold assignment: each class is shuffled and dealt
/// round-robin, so per-fold class counts differ by at most one sample.
/// Falls back to count(+1) folds when there are not enough positives.
inline fold_plan stratified_folds(const labeled_dataset& ds, int n_folds,
                                  std::uint64_t seed) {
    if (n_folds < 2) throw config_error("n_folds must be >= 2");
    const auto pos = ds.indices_of(+1);
    const auto neg = ds.indices_of(-1);
    if (pos.size() < 2 || neg.size() < 2)
        throw too_few_samples("each class needs >= 2 samples for cross-validation");
    int folds = n_folds;
    if (static_cast<std::size_t>(folds) > pos.size()) {
        folds = static_cast<int>(pos.size());
        std::cerr << "[triwin] " << ds.name << ": only " << pos.size()
                  << " positives; using " << folds << " folds instead of "
                  << n_folds << "\n";
    }
    fold_plan plan;
    plan.n_folds = folds;
    plan.seed = seed;
    plan.assignments.assign(static_cast<std::size_t>(ds.size()), -1);
    rng gen(derive_seed(seed, "stratified_folds"));
    for (const auto* cls : {&pos, &neg}) {
        std::vector<Eigen::Index> idx = *cls;
        gen.shuffle(idx);
        for (std::size_t t = 0; t < idx.size(); ++t)
            plan.assignments[static_cast<std::size_t>(idx[t])] =
                static_cast<int>(t % static_cast<std::size_t>(folds));
    }
    return plan;
}

inline std::pair<labeled_dataset, labeled_dataset>
split_fold(const labeled_dataset& ds, const fold_plan& plan, int fold) {
    std::vector<Eigen::Index> train_rows, test_rows;
    for (Eigen::Index i = 0; i < ds.size(); ++i) {
        if (plan.assignments[static_cast<std::size_t>(i)] == fold)
            test_rows.push_back(i);
        else
            train_rows.push_back(i);
    }
    return {take_rows(ds, train_rows, ds.name + "/train"),
            take_rows(ds, test_rows, ds.name + "/test")};
}

} // namespace triwin

#endif
