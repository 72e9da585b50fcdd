#ifndef TRIWIN_RESAMPLE_HPP
#define TRIWIN_RESAMPLE_HPP

#include <algorithm>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "triwin/dataset.hpp"
#include "triwin/errors.hpp"
#include "triwin/rng.hpp"

namespace triwin {

/// Random over-sampling: duplicate positives (with replacement) until the
/// classes balance. Negatives are untouched.
inline labeled_dataset ros(const labeled_dataset& ds, std::uint64_t seed) {
    validate_dataset(ds);
    const auto pos = ds.indices_of(+1);
    const auto neg = ds.indices_of(-1);
    if (pos.size() >= neg.size()) return ds;
    rng gen(derive_seed(seed, "ros"));
    std::vector<Eigen::Index> rows(ds.size());
    for (Eigen::Index i = 0; i < ds.size(); ++i) rows[static_cast<std::size_t>(i)] = i;
    for (std::size_t t = pos.size(); t < neg.size(); ++t)
        rows.push_back(pos[gen.index(pos.size())]);
    return take_rows(ds, rows, ds.name);
}

/// Random under-sampling: drop negatives (without replacement) down to the
/// positive count.
inline labeled_dataset rus(const labeled_dataset& ds, std::uint64_t seed) {
    validate_dataset(ds);
    const auto pos = ds.indices_of(+1);
    const auto neg = ds.indices_of(-1);
    if (neg.size() <= pos.size()) return ds;
    rng gen(derive_seed(seed, "rus"));
    auto chosen = gen.sample_without_replacement(neg.size(), pos.size());
    std::sort(chosen.begin(), chosen.end());
    std::vector<Eigen::Index> rows = pos;
    for (auto c : chosen) rows.push_back(neg[c]);
    std::sort(rows.begin(), rows.end());
    return take_rows(ds, rows, ds.name);
}

/// SMOTE: synthesize negatives-minus-positives new positive samples by
/// interpolating each picked positive toward one of its smote_k nearest
/// positive neighbors.
inline labeled_dataset smote(const labeled_dataset& ds, int smote_k,
                             std::uint64_t seed) {
    validate_dataset(ds);
    const auto pos = ds.indices_of(+1);
    const auto neg = ds.indices_of(-1);
    if (pos.size() < 2)
        throw too_few_positives("smote needs >= 2 positive samples");
    if (smote_k < 1 || static_cast<std::size_t>(smote_k) >= pos.size())
        throw config_error("smote_k must be in [1, positive count)");
    if (neg.size() <= pos.size()) return ds;

    // neighbor lists among positives only
    std::vector<std::vector<std::size_t>> nbrs(pos.size());
    for (std::size_t a = 0; a < pos.size(); ++a) {
        std::vector<std::pair<double, std::size_t>> dist;
        for (std::size_t b = 0; b < pos.size(); ++b) {
            if (a == b) continue;
            dist.emplace_back(
                (ds.features.row(pos[a]) - ds.features.row(pos[b])).squaredNorm(), b);
        }
        std::sort(dist.begin(), dist.end());
        for (int t = 0; t < smote_k; ++t)
            nbrs[a].push_back(dist[static_cast<std::size_t>(t)].second);
    }

    const std::size_t need = neg.size() - pos.size();
    rng gen(derive_seed(seed, "smote"));
    labeled_dataset out;
    out.name = ds.name;
    out.features.resize(ds.size() + static_cast<Eigen::Index>(need), ds.dim());
    out.labels.resize(ds.size() + static_cast<Eigen::Index>(need));
    out.features.topRows(ds.size()) = ds.features;
    out.labels.head(ds.size()) = ds.labels;
    for (std::size_t t = 0; t < need; ++t) {
        const std::size_t a = gen.index(pos.size());
        const std::size_t b = nbrs[a][gen.index(nbrs[a].size())];
        const double u = gen.uniform();
        out.features.row(ds.size() + static_cast<Eigen::Index>(t)) =
            ds.features.row(pos[a]) +
            u * (ds.features.row(pos[b]) - ds.features.row(pos[a]));
        out.labels[ds.size() + static_cast<Eigen::Index>(t)] = +1;
    }
    return out;
}

} // namespace triwin

#endif
