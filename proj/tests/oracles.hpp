// Test-side oracles, deliberately independent of the library's solver and
// membership code paths: brute-force grid minimizers and a direct
// transcription of the membership pipeline.
#ifndef TRIWIN_TESTS_ORACLES_HPP
#define TRIWIN_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "triwin/dataset.hpp"
#include "triwin/qp.hpp"

namespace oracles {

// Exhaustive grid minimizer for 1/2 a^T Q a + q^T a over a box, refined
// around the incumbent. The innermost axis is scanned through the exact
// one-dimensional quadratic, so the cost is ~points^n per pass.
inline double box_qp_grid(const triwin::box_qp& p, int points = 41,
                          int refinements = 2) {
    const auto n = p.Q.rows();
    Eigen::VectorXd lo = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd hi = p.upper;
    double best_obj = std::numeric_limits<double>::infinity();
    Eigen::VectorXd best = Eigen::VectorXd::Zero(n);

    for (int pass = 0; pass <= refinements; ++pass) {
        Eigen::VectorXd step(n);
        for (Eigen::Index i = 0; i < n; ++i)
            step[i] = (hi[i] - lo[i]) / (points - 1);
        std::vector<int> tick(static_cast<std::size_t>(n), 0);
        Eigen::VectorXd alpha = lo;
        Eigen::VectorXd Qa = p.Q * alpha;
        bool done = false;
        while (!done) {
            // scan the innermost axis analytically: f(t) = f0 + g0 t + q00 t^2/2
            const double base_obj = 0.5 * alpha.dot(Qa) + p.linear.dot(alpha);
            const double g0 = Qa[0] + p.linear[0];
            const double q00 = p.Q(0, 0);
            for (int t = 0; t < points; ++t) {
                const double dt = t * step[0];
                const double obj = base_obj + g0 * dt + 0.5 * q00 * dt * dt;
                if (obj < best_obj) {
                    best_obj = obj;
                    best = alpha;
                    best[0] = alpha[0] + dt;
                }
            }
            // odometer over the remaining axes
            done = true;
            for (Eigen::Index i = 1; i < n; ++i) {
                auto& ti = tick[static_cast<std::size_t>(i)];
                if (ti + 1 < points) {
                    ++ti;
                    Qa += step[i] * p.Q.col(i);
                    alpha[i] += step[i];
                    done = false;
                    break;
                }
                Qa -= static_cast<double>(ti) * step[i] * p.Q.col(i);
                alpha[i] = lo[i];
                ti = 0;
            }
            if (n == 1) break;
        }
        // zoom in around the incumbent
        for (Eigen::Index i = 0; i < n; ++i) {
            const double margin = 2.0 * step[i];
            lo[i] = std::max(0.0, best[i] - margin);
            hi[i] = std::min(p.upper[i], best[i] + margin);
            if (hi[i] <= lo[i]) hi[i] = lo[i];
        }
    }
    return best_obj;
}

// Grid minimizer for the equality-constrained SVM dual, worked in the
// y-scaled variables u_i = y_i a_i with the last one eliminated by
// sum(u) = 0. Returns the best feasible objective found.
inline double svm_dual_grid(const Eigen::MatrixXd& K, const Eigen::VectorXi& y,
                            const Eigen::VectorXd& caps, int points = 9,
                            int refinements = 2) {
    const auto n = K.rows();
    const auto f = n - 1; // free variables
    // reduced quadratic after substituting u_n = -sum(u_free)
    Eigen::MatrixXd Kt(f, f);
    for (Eigen::Index i = 0; i < f; ++i)
        for (Eigen::Index j = 0; j < f; ++j)
            Kt(i, j) = K(i, j) - K(i, n - 1) - K(j, n - 1) + K(n - 1, n - 1);
    Eigen::VectorXd lin(f);
    for (Eigen::Index i = 0; i < f; ++i)
        lin[i] = static_cast<double>(y[n - 1]) - static_cast<double>(y[i]);

    Eigen::VectorXd lo(f), hi(f);
    for (Eigen::Index i = 0; i < f; ++i) {
        lo[i] = (y[i] > 0) ? 0.0 : -caps[i];
        hi[i] = (y[i] > 0) ? caps[i] : 0.0;
    }
    const double last_lo = (y[n - 1] > 0) ? 0.0 : -caps[n - 1];
    const double last_hi = (y[n - 1] > 0) ? caps[n - 1] : 0.0;

    double best_obj = std::numeric_limits<double>::infinity();
    Eigen::VectorXd best = Eigen::VectorXd::Zero(f);
    Eigen::VectorXd cur_lo = lo, cur_hi = hi;
    for (int pass = 0; pass <= refinements; ++pass) {
        Eigen::VectorXd step(f);
        for (Eigen::Index i = 0; i < f; ++i)
            step[i] = (cur_hi[i] - cur_lo[i]) / (points - 1);
        std::vector<int> tick(static_cast<std::size_t>(f), 0);
        Eigen::VectorXd u = cur_lo;
        Eigen::VectorXd Ku = Kt * u;
        bool done = false;
        while (!done) {
            const double base_obj = 0.5 * u.dot(Ku) + lin.dot(u);
            const double g0 = Ku[0] + lin[0];
            const double q00 = Kt(0, 0);
            const double sum_rest = u.sum() - u[0];
            for (int t = 0; t < points; ++t) {
                const double dt = t * step[0];
                const double u0 = u[0] + dt;
                const double u_last = -(sum_rest + u0);
                if (u_last < last_lo - 1e-12 || u_last > last_hi + 1e-12) continue;
                const double obj = base_obj + g0 * dt + 0.5 * q00 * dt * dt;
                if (obj < best_obj) {
                    best_obj = obj;
                    best = u;
                    best[0] = u0;
                }
            }
            done = true;
            for (Eigen::Index i = 1; i < f; ++i) {
                auto& ti = tick[static_cast<std::size_t>(i)];
                if (ti + 1 < points) {
                    ++ti;
                    Ku += step[i] * Kt.col(i);
                    u[i] += step[i];
                    done = false;
                    break;
                }
                Ku -= static_cast<double>(ti) * step[i] * Kt.col(i);
                u[i] = cur_lo[i];
                ti = 0;
            }
            if (f == 1) break;
        }
        for (Eigen::Index i = 0; i < f; ++i) {
            const double margin = 2.0 * step[i];
            cur_lo[i] = std::max(lo[i], best[i] - margin);
            cur_hi[i] = std::min(hi[i], best[i] + margin);
        }
    }
    return best_obj;
}

// Direct transcription of the three-way membership pipeline: naive neighbor
// scan, textbook entropy, centering by explicit row/column/grand means, and
// the two normalization stages spelled out step by step.
inline std::vector<double> membership_by_hand(const triwin::labeled_dataset& ds,
                                              int k, double sigma2) {
    const auto m = static_cast<std::size_t>(ds.size());
    // plain RBF gram
    std::vector<std::vector<double>> K(m, std::vector<double>(m));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            double d2 = 0.0;
            for (Eigen::Index c = 0; c < ds.dim(); ++c) {
                const double diff = ds.features(static_cast<Eigen::Index>(i), c) -
                                    ds.features(static_cast<Eigen::Index>(j), c);
                d2 += diff * diff;
            }
            K[i][j] = std::exp(-d2 / (2.0 * sigma2));
        }
    // center via the means rather than the H K H product
    std::vector<double> row_mean(m, 0.0), col_mean(m, 0.0);
    double grand = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            row_mean[i] += K[i][j] / m;
            col_mean[j] += K[i][j] / m;
            grand += K[i][j] / (static_cast<double>(m) * m);
        }
    std::vector<std::vector<double>> Kc(m, std::vector<double>(m));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            Kc[i][j] = K[i][j] - row_mean[i] - col_mean[j] + grand;

    const double alpha = static_cast<double>(k) / (k + 1);
    const double beta = 1.0 - alpha;
    std::vector<std::size_t> negs;
    for (std::size_t i = 0; i < m; ++i)
        if (ds.labels[static_cast<Eigen::Index>(i)] == -1) negs.push_back(i);

    std::vector<double> twf_v(negs.size()), kf_v(negs.size());
    for (std::size_t t = 0; t < negs.size(); ++t) {
        const std::size_t i = negs[t];
        std::vector<std::pair<double, std::size_t>> dist;
        for (std::size_t j = 0; j < m; ++j) {
            if (j == i) continue;
            double d2 = 0.0;
            for (Eigen::Index c = 0; c < ds.dim(); ++c) {
                const double diff = ds.features(static_cast<Eigen::Index>(i), c) -
                                    ds.features(static_cast<Eigen::Index>(j), c);
                d2 += diff * diff;
            }
            dist.emplace_back(d2, j);
        }
        std::sort(dist.begin(), dist.end());
        int same = 0;
        double kf_acc = 0.0;
        for (int q = 0; q < k; ++q) {
            const std::size_t j = dist[static_cast<std::size_t>(q)].second;
            const bool same_label = ds.labels[static_cast<Eigen::Index>(j)] ==
                                    ds.labels[static_cast<Eigen::Index>(i)];
            if (same_label) ++same;
            kf_acc += same_label ? Kc[i][j] : -Kc[i][j];
        }
        const double p_same = static_cast<double>(same) / k;
        double H = 0.0;
        if (p_same > 0.0 && p_same < 1.0)
            H = -p_same * std::log2(p_same) -
                (1.0 - p_same) * std::log2(1.0 - p_same);
        double w;
        if (H <= beta) {
            w = 1.0;
        } else {
            const double scale = (p_same < 0.5 ? alpha : beta) / (alpha - beta);
            if (H >= alpha)
                w = p_same < 0.5 ? 0.01 : std::exp(-scale);
            else
                w = std::exp(-scale * H);
        }
        twf_v[t] = w;
        kf_v[t] = kf_acc;
    }
    auto rescale = [](std::vector<double>& v) {
        double lo = *std::min_element(v.begin(), v.end());
        double hi = *std::max_element(v.begin(), v.end());
        if (hi - lo < 1e-12) return false;
        for (double& x : v) x = 0.01 + 0.99 * (x - lo) / (hi - lo);
        return true;
    };
    if (!rescale(kf_v)) std::fill(kf_v.begin(), kf_v.end(), 1.0);
    std::vector<double> twkf(negs.size());
    for (std::size_t t = 0; t < negs.size(); ++t) twkf[t] = twf_v[t] * kf_v[t];
    rescale(twkf);

    std::vector<double> s(m, 1.0);
    for (std::size_t t = 0; t < negs.size(); ++t) s[negs[t]] = twkf[t];
    return s;
}

} // namespace oracles

#endif
