#ifndef TRIWIN_EVAL_HPP
#define TRIWIN_EVAL_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "triwin/dataset.hpp"
#include "triwin/errors.hpp"
#include "triwin/membership.hpp"
#include "triwin/models.hpp"
#include "triwin/parallel.hpp"
#include "triwin/resample.hpp"
#include "triwin/rng.hpp"

namespace triwin {

// ---------------------------------------------------------------------------
// Metrics

struct confusion {
    long tp = 0, fn_ = 0, tn = 0, fp = 0;
};

inline confusion tally(const Eigen::VectorXi& truth, const Eigen::VectorXi& pred) {
    if (truth.size() != pred.size())
        throw dimension_mismatch("confusion truth vs pred");
    confusion c;
    for (Eigen::Index i = 0; i < truth.size(); ++i) {
        if (truth[i] > 0)
            (pred[i] > 0 ? c.tp : c.fn_)++;
        else
            (pred[i] > 0 ? c.fp : c.tn)++;
    }
    return c;
}

inline double sensitivity(const confusion& c) {
    if (c.tp + c.fn_ == 0) throw empty_test_class("positive");
    return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn_);
}

inline double specificity(const confusion& c) {
    if (c.tn + c.fp == 0) throw empty_test_class("negative");
    return static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fp);
}

/// sqrt(SE * SP)
inline double g_means(const confusion& c) {
    return std::sqrt(sensitivity(c) * specificity(c));
}

/// "NN.NN±NN.NN" on the x100 scale used in results tables.
inline std::string format_mean_std(double mean, double stddev) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%05.2f±%05.2f", 100.0 * mean,
                  100.0 * stddev);
    return buf;
}

// ---------------------------------------------------------------------------
// Algorithms and grids

enum class algorithm {
    svm,
    ros_svm,
    rus_svm,
    smote_svm,
    fsvm,
    cka_fsvm,
    tsvm,
    twftsvm,
};

inline const std::vector<std::pair<std::string, algorithm>>& algorithm_names() {
    static const std::vector<std::pair<std::string, algorithm>> names = {
        {"svm", algorithm::svm},           {"ros-svm", algorithm::ros_svm},
        {"rus-svm", algorithm::rus_svm},   {"smote-svm", algorithm::smote_svm},
        {"fsvm", algorithm::fsvm},         {"cka-fsvm", algorithm::cka_fsvm},
        {"tsvm", algorithm::tsvm},         {"twftsvm", algorithm::twftsvm},
    };
    return names;
}

inline std::string algorithm_name(algorithm a) {
    for (const auto& [name, alg] : algorithm_names())
        if (alg == a) return name;
    return "?";
}

inline algorithm parse_algorithm(const std::string& name) {
    for (const auto& [n, alg] : algorithm_names())
        if (n == name) return alg;
    std::string valid;
    for (const auto& [n, alg] : algorithm_names()) {
        if (!valid.empty()) valid += ", ";
        valid += n;
    }
    throw config_error("unknown algorithm '" + name + "' (valid: " + valid + ")");
}

inline bool is_twin(algorithm a) {
    return a == algorithm::tsvm || a == algorithm::twftsvm;
}

struct grid_spec {
    std::vector<double> sigma2s; // rbf widths
    std::vector<double> cs;      // single penalty for the svm family
    std::vector<double> c13s;    // twin regularizers (C1 = C3)
    std::vector<double> c24s;    // twin penalties (C2 = C4)
    std::vector<int> ks;         // neighbor counts for twftsvm
};

/// Benchmark defaults: sigma2 in {1e-2..1e1}; the svm family sweeps eight C
/// values from 2^-3 to 2^10; twin models sweep C13 = C24 sets 2^-1..2^5 and
/// k in {7, 9, 11, 13}.
inline grid_spec default_grid() {
    grid_spec g;
    g.sigma2s = {1e-2, 1e-1, 1e0, 1e1};
    for (int e : {-3, -1, 1, 3, 5, 7, 9, 10}) g.cs.push_back(std::ldexp(1.0, e));
    for (int e = -1; e <= 5; ++e) g.c13s.push_back(std::ldexp(1.0, e));
    g.c24s = g.c13s;
    g.ks = {7, 9, 11, 13};
    return g;
}

/// Reduced grid for smoke runs.
inline grid_spec tiny_grid() {
    grid_spec g;
    g.sigma2s = {1.0};
    g.cs = {1.0, 8.0};
    g.c13s = {0.5, 2.0};
    g.c24s = {0.5, 2.0};
    g.ks = {7};
    return g;
}

struct grid_config {
    double sigma2 = 1.0;
    double c = 1.0;      // svm family
    double c13 = 1.0;    // twin models
    double c24 = 1.0;
    int k = 11;          // twftsvm
};

/// Deterministic enumeration order: sigma2, then c (or c13, c24, k).
inline std::vector<grid_config> enumerate_configs(algorithm algo,
                                                  const grid_spec& grid) {
    std::vector<grid_config> out;
    if (!is_twin(algo)) {
        for (double s2 : grid.sigma2s)
            for (double c : grid.cs) {
                grid_config g;
                g.sigma2 = s2;
                g.c = c;
                out.push_back(g);
            }
        return out;
    }
    for (double s2 : grid.sigma2s)
        for (double c13 : grid.c13s)
            for (double c24 : grid.c24s) {
                if (algo == algorithm::twftsvm) {
                    for (int k : grid.ks) {
                        grid_config g;
                        g.sigma2 = s2;
                        g.c13 = c13;
                        g.c24 = c24;
                        g.k = k;
                        out.push_back(g);
                    }
                } else {
                    grid_config g;
                    g.sigma2 = s2;
                    g.c13 = c13;
                    g.c24 = c24;
                    out.push_back(g);
                }
            }
    return out;
}

// ---------------------------------------------------------------------------
// Cross-validated grid search

struct fold_score {
    double se = 0.0, sp = 0.0, gmeans = 0.0;
    bool failed = false;
};

struct experiment_result {
    std::string dataset;
    std::string algorithm_label;
    std::map<std::string, std::string> params;
    grid_config best_config;
    std::vector<fold_score> per_fold;
    double mean = 0.0;
    double stddev = 0.0; // population std over folds
    int fold_failures = 0;
};

struct cv_options {
    denom_mode denominator = denom_mode::class_gram;
    double fsvm_delta = 0.1; // center-distance membership floor offset
    int smote_k = 5;
};

namespace detail {

inline fold_score evaluate_fold(const labeled_dataset& train,
                                const labeled_dataset& test, algorithm algo,
                                const grid_config& cfg, const cv_options& opts,
                                std::uint64_t fold_seed) {
    const kernel_spec spec = kernel_spec::rbf(cfg.sigma2);
    Eigen::VectorXi pred;
    switch (algo) {
        case algorithm::svm:
            pred = predict(fit_svm(train, spec, cfg.c), test.features);
            break;
        case algorithm::ros_svm:
            pred = predict(fit_svm(ros(train, fold_seed), spec, cfg.c), test.features);
            break;
        case algorithm::rus_svm:
            pred = predict(fit_svm(rus(train, fold_seed), spec, cfg.c), test.features);
            break;
        case algorithm::smote_svm: {
            const auto pos = train.count(+1);
            const int k = std::min<long>(opts.smote_k, pos - 1);
            if (k < 1) throw too_few_positives("smote fold");
            pred = predict(fit_svm(smote(train, k, fold_seed), spec, cfg.c),
                           test.features);
            break;
        }
        case algorithm::fsvm:
            pred = predict(
                fit_fsvm(train, center_distance_membership(train, opts.fsvm_delta),
                         spec, cfg.c),
                test.features);
            break;
        case algorithm::cka_fsvm:
            pred = predict(fit_cka_fsvm(train, spec, cfg.c), test.features);
            break;
        case algorithm::tsvm: {
            auto params = twftsvm_params::paper_grid(cfg.c13, cfg.c24, cfg.k, spec);
            params.denominator = opts.denominator;
            pred = predict(fit_tsvm(train, params).first, test.features);
            break;
        }
        case algorithm::twftsvm: {
            auto params = twftsvm_params::paper_grid(cfg.c13, cfg.c24, cfg.k, spec);
            params.denominator = opts.denominator;
            Eigen::VectorXd s = three_way_membership(train, cfg.k, spec);
            pred = predict(fit_twftsvm(train, s, params).first, test.features);
            break;
        }
    }
    const confusion c = tally(test.labels, pred);
    fold_score score;
    score.se = sensitivity(c);
    score.sp = specificity(c);
    score.gmeans = std::sqrt(score.se * score.sp);
    return score;
}

inline std::map<std::string, std::string> config_params(algorithm algo,
                                                        const grid_config& cfg) {
    std::map<std::string, std::string> p;
    p["sigma2"] = format_double(cfg.sigma2);
    if (!is_twin(algo)) {
        p["c"] = format_double(cfg.c);
    } else {
        p["c13"] = format_double(cfg.c13);
        p["c24"] = format_double(cfg.c24);
        if (algo == algorithm::twftsvm) p["k"] = std::to_string(cfg.k);
    }
    return p;
}

} // namespace detail

/// Evaluate every grid config with stratified k-fold CV (resamplers touch
/// training folds only) and return the config with the best mean G-Means.
/// A failing fold scores zero and is logged rather than aborting the sweep.
/// Ties keep the earlier config in enumeration order.
inline experiment_result grid_search_cv(const labeled_dataset& ds, algorithm algo,
                                        const grid_spec& grid, int n_folds,
                                        std::uint64_t seed,
                                        const cv_options& opts = {}) {
    const auto configs = enumerate_configs(algo, grid);
    if (configs.empty()) throw config_error("empty grid");
    const fold_plan plan = stratified_folds(ds, n_folds, derive_seed(seed, "folds"));
    const int folds = plan.n_folds;

    // materialize the splits once; tasks share them read-only
    std::vector<std::pair<labeled_dataset, labeled_dataset>> splits;
    splits.reserve(static_cast<std::size_t>(folds));
    for (int f = 0; f < folds; ++f) splits.push_back(split_fold(ds, plan, f));

    const std::size_t total = configs.size() * static_cast<std::size_t>(folds);
    std::vector<fold_score> scores(total);
    const std::string alg_label = algorithm_name(algo);
    parallel_for(total, [&](std::size_t t) {
        const std::size_t ci = t / static_cast<std::size_t>(folds);
        const int f = static_cast<int>(t % static_cast<std::size_t>(folds));
        const std::uint64_t fold_seed =
            derive_seed(seed, alg_label, ci, static_cast<std::uint64_t>(f));
        try {
            scores[t] = detail::evaluate_fold(splits[static_cast<std::size_t>(f)].first,
                                              splits[static_cast<std::size_t>(f)].second,
                                              algo, configs[ci], opts, fold_seed);
        } catch (const error& e) {
            scores[t].failed = true;
            std::cerr << "[triwin] " << ds.name << " " << alg_label << " config "
                      << ci << " fold " << f << " failed: " << e.what() << "\n";
        }
    });

    std::size_t best = 0;
    double best_mean = -1.0;
    std::vector<double> means(configs.size());
    for (std::size_t ci = 0; ci < configs.size(); ++ci) {
        double acc = 0.0;
        for (int f = 0; f < folds; ++f)
            acc += scores[ci * static_cast<std::size_t>(folds) +
                          static_cast<std::size_t>(f)].gmeans;
        means[ci] = acc / folds;
        if (means[ci] > best_mean) {
            best_mean = means[ci];
            best = ci;
        }
    }

    experiment_result result;
    result.dataset = ds.name;
    result.algorithm_label = alg_label;
    result.best_config = configs[best];
    result.params = detail::config_params(algo, configs[best]);
    result.per_fold.assign(
        scores.begin() + static_cast<std::ptrdiff_t>(best * static_cast<std::size_t>(folds)),
        scores.begin() + static_cast<std::ptrdiff_t>((best + 1) * static_cast<std::size_t>(folds)));
    result.mean = best_mean;
    double var = 0.0;
    for (const auto& fs : result.per_fold)
        var += (fs.gmeans - best_mean) * (fs.gmeans - best_mean);
    result.stddev = std::sqrt(var / folds);
    for (const auto& fs : result.per_fold)
        if (fs.failed) ++result.fold_failures;
    return result;
}

// ---------------------------------------------------------------------------
// Rank statistics

struct rank_table {
    std::vector<std::string> algorithms;
    std::vector<std::string> datasets;
    Eigen::MatrixXd ranks;         // n_datasets x k_algorithms
    Eigen::VectorXd average_ranks; // per algorithm
};

/// Rank 1 goes to the highest score in each dataset row; ties share the
/// average of the positions they span.
inline rank_table average_ranks(const std::vector<std::string>& algorithms,
                                const std::vector<std::string>& datasets,
                                const Eigen::MatrixXd& scores) {
    const auto n = scores.rows();
    const auto k = scores.cols();
    if (static_cast<std::size_t>(k) != algorithms.size() ||
        static_cast<std::size_t>(n) != datasets.size())
        throw dimension_mismatch("rank table labels vs scores");
    if (!scores.allFinite()) throw missing_entry("scores contain non-finite values");
    rank_table t;
    t.algorithms = algorithms;
    t.datasets = datasets;
    t.ranks.resize(n, k);
    for (Eigen::Index row = 0; row < n; ++row) {
        std::vector<Eigen::Index> order(static_cast<std::size_t>(k));
        for (Eigen::Index j = 0; j < k; ++j) order[static_cast<std::size_t>(j)] = j;
        std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
            return scores(row, a) > scores(row, b);
        });
        Eigen::Index pos = 0;
        while (pos < k) {
            Eigen::Index tie_end = pos;
            while (tie_end + 1 < k &&
                   scores(row, order[static_cast<std::size_t>(tie_end + 1)]) ==
                       scores(row, order[static_cast<std::size_t>(pos)]))
                ++tie_end;
            const double shared =
                0.5 * static_cast<double>(pos + tie_end) + 1.0; // average rank
            for (Eigen::Index q = pos; q <= tie_end; ++q)
                t.ranks(row, order[static_cast<std::size_t>(q)]) = shared;
            pos = tie_end + 1;
        }
    }
    t.average_ranks = t.ranks.colwise().mean();
    return t;
}

struct friedman_result {
    double tau_chi2 = 0.0;
    double f_f = 0.0;
};

/// tau = 12n/(k(k+1)) (sum r_i^2 - k(k+1)^2/4);  F_F = (n-1) tau / (n(k-1) - tau)
inline friedman_result friedman(const Eigen::VectorXd& avg_ranks, int n, int k) {
    if (n < 2 || k < 2) throw config_error("friedman needs n >= 2 and k >= 2");
    if (avg_ranks.size() != k) throw dimension_mismatch("avg_ranks length vs k");
    friedman_result r;
    const double sum_sq = avg_ranks.squaredNorm();
    r.tau_chi2 = (12.0 * n / (k * (k + 1.0))) *
                 (sum_sq - k * (k + 1.0) * (k + 1.0) / 4.0);
    const double denom = n * (k - 1.0) - r.tau_chi2;
    if (std::abs(denom) < 1e-12) throw degenerate_denominator();
    r.f_f = (n - 1.0) * r.tau_chi2 / denom;
    return r;
}

/// q_alpha * sqrt(k(k+1) / 6n)
inline double nemenyi_cd(double q_alpha, int k, int n) {
    return q_alpha * std::sqrt(k * (k + 1.0) / (6.0 * n));
}

/// Two-tailed Nemenyi q constants at alpha = 0.1 for k = 2..10.
inline double nemenyi_q_010(int k) {
    static const double table[] = {1.645, 2.052, 2.291, 2.460, 2.589,
                                   2.693, 2.780, 2.855, 2.920};
    if (k < 2 || k > 10) throw config_error("nemenyi q table covers k = 2..10");
    return table[k - 2];
}

/// Friedman critical values quoted for alpha = 0.1; only the benchmarked
/// (k, n) combinations are tabulated.
inline bool friedman_critical_value(int k, int n, double& out) {
    static const std::map<std::pair<int, int>, double> table = {
        {{8, 25}, 1.93}, {{8, 13}, 2.20}, {{8, 9}, 2.47}};
    auto it = table.find({k, n});
    if (it == table.end()) return false;
    out = it->second;
    return true;
}

} // namespace triwin

#endif
