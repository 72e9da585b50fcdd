#ifndef TRIWIN_MEMBERSHIP_HPP
#define TRIWIN_MEMBERSHIP_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "triwin/dataset.hpp"
#include "triwin/errors.hpp"
#include "triwin/kernel.hpp"

namespace triwin {

// Floor for every normalized membership. A value of 0 would remove the
// sample from the dual box, so the rejection-region constant doubles as
// the normalization floor.
inline constexpr double membership_floor = 0.01;

/// Three-way thresholds derived from the neighbor count:
/// alpha = k/(k+1), beta = 1 - alpha.
struct three_way_thresholds {
    int k = 0;
    double alpha = 0.0;
    double beta = 0.0;
};

inline three_way_thresholds thresholds_from_k(int k) {
    if (k < 1) throw config_error("k must be >= 1");
    three_way_thresholds th;
    th.k = k;
    th.alpha = static_cast<double>(k) / (k + 1);
    th.beta = 1.0 - th.alpha;
    return th;
}

/// k-nearest-neighbor label summary of one sample. "same" counts neighbors
/// that share the query's label, regardless of which class that is.
struct neighbor_profile {
    std::vector<Eigen::Index> indices; // the k nearest, nearest first
    int num_same = 0;
    int num_diff = 0;
    double p_same = 0.0;  // num_same / k
    double entropy = 0.0; // binary label entropy of the neighborhood, in [0,1]
};

namespace detail {
inline double binary_entropy(double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0; // 0*log0 := 0
    double q = 1.0 - p;
    return -p * std::log2(p) - q * std::log2(q);
}
} // namespace detail

/// Nearest neighbors of sample i by Euclidean distance, excluding i itself.
/// Distance ties break toward the smaller sample index.
inline neighbor_profile knn_profile(const labeled_dataset& ds, Eigen::Index i, int k) {
    const auto m = ds.size();
    if (k >= m) throw k_too_large(k, static_cast<int>(m));
    if (i < 0 || i >= m) throw index_out_of_range("knn_profile sample " + std::to_string(i));
    std::vector<std::pair<double, Eigen::Index>> dist;
    dist.reserve(static_cast<std::size_t>(m) - 1);
    for (Eigen::Index j = 0; j < m; ++j) {
        if (j == i) continue;
        dist.emplace_back((ds.features.row(j) - ds.features.row(i)).squaredNorm(), j);
    }
    std::sort(dist.begin(), dist.end());
    neighbor_profile p;
    p.indices.reserve(static_cast<std::size_t>(k));
    for (int t = 0; t < k; ++t) {
        p.indices.push_back(dist[static_cast<std::size_t>(t)].second);
        if (ds.labels[dist[static_cast<std::size_t>(t)].second] == ds.labels[i])
            ++p.num_same;
        else
            ++p.num_diff;
    }
    p.p_same = static_cast<double>(p.num_same) / k;
    p.entropy = detail::binary_entropy(p.p_same);
    return p;
}

enum class three_way_region { r1, r2, r3 };

/// Region of the entropy value under the (alpha, beta) partition:
/// R1: H >= alpha, R2: beta < H < alpha, R3: H <= beta.
inline three_way_region region_of(double entropy, const three_way_thresholds& th) {
    if (entropy >= th.alpha) return three_way_region::r1;
    if (entropy <= th.beta) return three_way_region::r3;
    return three_way_region::r2;
}

inline const char* region_name(three_way_region r) {
    switch (r) {
        case three_way_region::r1: return "R1";
        case three_way_region::r2: return "R2";
        case three_way_region::r3: return "R3";
    }
    return "?";
}

/// Input-space membership from the neighborhood entropy.
///
/// Certain samples (H <= beta) keep full weight. Inside the boundary region
/// the weight decays as exp(-(alpha|beta) * H / (alpha - beta)), using beta
/// when at least half the neighbors share the query's class and alpha
/// otherwise, so same-class-majority samples are attenuated gently and
/// different-class-majority ones sharply. Beyond alpha the attenuation
/// saturates: a same-class-majority sample bottoms out at the formula's
/// maximum-entropy value, while a different-class-majority one is treated as
/// noise and floored at 0.01.
inline double twf(double entropy, double p_same, const three_way_thresholds& th) {
    if (entropy <= th.beta) return 1.0;
    const double scale = (p_same < 0.5 ? th.alpha : th.beta) / (th.alpha - th.beta);
    if (entropy >= th.alpha)
        return p_same < 0.5 ? membership_floor : std::exp(-scale);
    return std::exp(-scale * entropy);
}

inline double twf(const neighbor_profile& p, const three_way_thresholds& th) {
    return twf(p.entropy, p.p_same, th);
}

/// Feature-space affinity of sample i with its neighborhood: the sum of
/// centered-kernel similarities to same-label neighbors minus the sum to
/// different-label neighbors. May be negative before normalization.
inline double kf(const gram_matrix& K_centered, const Eigen::VectorXi& labels,
                 Eigen::Index i, const neighbor_profile& nbrs) {
    const auto& K = K_centered.values;
    if (i < 0 || i >= K.rows()) throw index_out_of_range("kf sample " + std::to_string(i));
    double acc = 0.0;
    for (Eigen::Index j : nbrs.indices) {
        if (j < 0 || j >= K.rows())
            throw index_out_of_range("kf neighbor " + std::to_string(j));
        acc += (labels[j] == labels[i]) ? K(i, j) : -K(i, j);
    }
    return acc;
}

namespace detail {
// Linear rescale onto [floor, 1]. All-equal inputs degenerate; the caller
// picks what that means (identity or all-ones).
inline bool rescale_to_unit(std::vector<double>& v, double floor_value) {
    if (v.empty()) return true;
    auto [lo_it, hi_it] = std::minmax_element(v.begin(), v.end());
    const double lo = *lo_it, hi = *hi_it;
    if (hi - lo < 1e-12) return false;
    for (double& x : v)
        x = floor_value + (1.0 - floor_value) * (x - lo) / (hi - lo);
    return true;
}
} // namespace detail

/// Final three-way fuzzy membership: positives are pinned at 1; each negative
/// gets TWF * KF (both pieces normalized over the negatives to [0.01, 1]).
inline Eigen::VectorXd three_way_membership(const labeled_dataset& ds, int k,
                                            const kernel_spec& spec) {
    validate_dataset(ds);
    const auto m = ds.size();
    if (k >= m) throw k_too_large(k, static_cast<int>(m));
    const auto th = thresholds_from_k(k);
    const gram_matrix Kc = center_gram(gram(ds.features, ds.features, spec, "X", "X"));

    const auto neg = ds.indices_of(-1);
    std::vector<double> twf_vals(neg.size()), kf_vals(neg.size());
    for (std::size_t t = 0; t < neg.size(); ++t) {
        const auto profile = knn_profile(ds, neg[t], k);
        twf_vals[t] = twf(profile, th);
        kf_vals[t] = kf(Kc, ds.labels, neg[t], profile);
    }
    if (!detail::rescale_to_unit(kf_vals, membership_floor))
        std::fill(kf_vals.begin(), kf_vals.end(), 1.0); // degenerate: no signal
    std::vector<double> twkf(neg.size());
    for (std::size_t t = 0; t < neg.size(); ++t) twkf[t] = twf_vals[t] * kf_vals[t];
    // degenerate product stays as-is; it is already inside (0, 1]
    detail::rescale_to_unit(twkf, membership_floor);

    Eigen::VectorXd s = Eigen::VectorXd::Ones(m);
    for (std::size_t t = 0; t < neg.size(); ++t) s[neg[t]] = twkf[t];
    return s;
}

/// Classic distance-to-class-center membership: 1 at the center, shrinking
/// linearly to delta/(radius+delta) at the farthest in-class sample.
inline Eigen::VectorXd center_distance_membership(const labeled_dataset& ds,
                                                  double delta) {
    validate_dataset(ds);
    Eigen::VectorXd s = Eigen::VectorXd::Ones(ds.size());
    for (int label : {+1, -1}) {
        const auto idx = ds.indices_of(label);
        Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(ds.dim());
        for (auto i : idx) mean += ds.features.row(i);
        mean /= static_cast<double>(idx.size());
        double radius = 0.0;
        for (auto i : idx)
            radius = std::max(radius, (ds.features.row(i) - mean).norm());
        for (auto i : idx)
            s[i] = 1.0 - (ds.features.row(i) - mean).norm() / (radius + delta);
    }
    return s;
}

/// Centered-kernel-alignment membership: per-sample sum of centered-kernel
/// similarity to every other sample of the same class, rescaled per class.
inline Eigen::VectorXd cka_membership(const labeled_dataset& ds,
                                      const kernel_spec& spec) {
    validate_dataset(ds);
    const gram_matrix Kc = center_gram(gram(ds.features, ds.features, spec, "X", "X"));
    Eigen::VectorXd s = Eigen::VectorXd::Ones(ds.size());
    for (int label : {+1, -1}) {
        const auto idx = ds.indices_of(label);
        std::vector<double> scores(idx.size(), 0.0);
        for (std::size_t a = 0; a < idx.size(); ++a)
            for (std::size_t b = 0; b < idx.size(); ++b)
                if (a != b) scores[a] += Kc.values(idx[a], idx[b]);
        if (!detail::rescale_to_unit(scores, membership_floor))
            std::fill(scores.begin(), scores.end(), 1.0);
        for (std::size_t a = 0; a < idx.size(); ++a) s[idx[a]] = scores[a];
    }
    return s;
}

} // namespace triwin

#endif
