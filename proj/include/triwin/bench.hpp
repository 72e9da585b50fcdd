#ifndef TRIWIN_BENCH_HPP
#define TRIWIN_BENCH_HPP

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "triwin/csv.hpp"
#include "triwin/dataset.hpp"
#include "triwin/errors.hpp"
#include "triwin/eval.hpp"
#include "triwin/manifest.hpp"
#include "triwin/membership.hpp"

namespace triwin {

// Exit codes shared by every subcommand.
inline constexpr int exit_ok = 0;
inline constexpr int exit_config_error = 1;
inline constexpr int exit_partial_failure = 2;

struct bench_config {
    std::vector<std::string> manifests;
    std::vector<std::string> algorithms; // names; validated on run
    int folds = 10;
    std::uint64_t seed = 1;
    grid_spec grid = default_grid();
    std::string output_dir = ".";
    cv_options options;
    bool sigma2_heuristic = false; // replace the sigma2 grid by the heuristic value
};

/// "sigma2=0.01,0.1;c=1,8;c13=0.5;c24=2;k=7,9" — unmentioned axes keep their
/// defaults. The names "default" and "tiny" select the built-in grids.
inline grid_spec parse_grid(const std::string& text) {
    if (text.empty() || text == "default") return default_grid();
    if (text == "tiny") return tiny_grid();
    grid_spec g = default_grid();
    std::stringstream ss(text);
    std::string clause;
    while (std::getline(ss, clause, ';')) {
        if (clause.empty()) continue;
        const auto eq = clause.find('=');
        if (eq == std::string::npos)
            throw config_error("grid clause '" + clause + "' is not key=v1,v2,...");
        const std::string key = clause.substr(0, eq);
        std::vector<double> vals;
        std::stringstream vs(clause.substr(eq + 1));
        std::string item;
        while (std::getline(vs, item, ','))
            vals.push_back(parse_double(item, 0, 0));
        if (vals.empty()) throw config_error("grid key '" + key + "' has no values");
        if (key == "sigma2") g.sigma2s = vals;
        else if (key == "c") g.cs = vals;
        else if (key == "c13") g.c13s = vals;
        else if (key == "c24") g.c24s = vals;
        else if (key == "k") {
            g.ks.clear();
            for (double v : vals) g.ks.push_back(static_cast<int>(v));
        } else {
            throw config_error("unknown grid key '" + key + "'");
        }
    }
    return g;
}

namespace detail {

inline std::string params_to_string(const std::map<std::string, std::string>& p) {
    std::string out;
    for (const auto& [k, v] : p) {
        if (!out.empty()) out += ';';
        out += k + "=" + v;
    }
    return out;
}

inline void write_results_rows(std::ostream& out, const experiment_result& r,
                               bool twin, bool has_k) {
    for (std::size_t f = 0; f < r.per_fold.size(); ++f) {
        const auto& fs = r.per_fold[f];
        out << r.dataset << ',' << r.algorithm_label << ','
            << format_double(r.best_config.sigma2) << ',';
        out << format_double(twin ? r.best_config.c13 : r.best_config.c) << ',';
        out << (twin ? format_double(r.best_config.c24) : std::string()) << ',';
        out << (has_k ? std::to_string(r.best_config.k) : std::string()) << ',';
        out << f << ',' << format_double(fs.se) << ',' << format_double(fs.sp)
            << ',' << format_double(fs.gmeans) << '\n';
    }
}

inline std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw file_not_found(path.string());
    return out;
}

} // namespace detail

/// Run the full grid-search benchmark over datasets x algorithms and write
/// results.csv (per-fold rows of each best config) plus summary.csv.
inline int cmd_bench(const bench_config& cfg) {
    try {
        if (cfg.algorithms.empty()) throw config_error("no algorithms selected");
        if (cfg.folds < 2) throw config_error("folds must be >= 2");
        if (cfg.manifests.empty()) throw config_error("no manifests given");
        std::vector<algorithm> algos;
        for (const auto& name : cfg.algorithms) algos.push_back(parse_algorithm(name));

        std::vector<labeled_dataset> datasets;
        for (const auto& mpath : cfg.manifests)
            datasets.push_back(load_dataset(load_manifest(mpath)));

        std::filesystem::create_directories(cfg.output_dir);
        auto results = detail::open_output(
            std::filesystem::path(cfg.output_dir) / "results.csv");
        auto summary = detail::open_output(
            std::filesystem::path(cfg.output_dir) / "summary.csv");
        results << "dataset,algorithm,sigma2,c13,c24,k_neighbors,fold,se,sp,g_means\n";
        summary << "dataset,algorithm,mean,std,best_params\n";

        int failures = 0;
        for (const auto& ds : datasets) {
            grid_spec grid = cfg.grid;
            if (cfg.sigma2_heuristic)
                grid.sigma2s = {sigma2_heuristic(ds.features)};
            std::cerr << "[triwin] " << ds.name << ": m=" << ds.size()
                      << " d=" << ds.dim() << " IR=" << imbalance_ratio(ds) << "\n";
            for (algorithm algo : algos) {
                experiment_result r =
                    grid_search_cv(ds, algo, grid, cfg.folds, cfg.seed, cfg.options);
                failures += r.fold_failures;
                detail::write_results_rows(results, r, is_twin(algo),
                                           algo == algorithm::twftsvm);
                summary << r.dataset << ',' << r.algorithm_label << ','
                        << format_double(r.mean) << ',' << format_double(r.stddev)
                        << ',' << detail::params_to_string(r.params) << '\n';
                std::cerr << "  " << r.algorithm_label << ": "
                          << format_mean_std(r.mean, r.stddev) << " ["
                          << detail::params_to_string(r.params) << "]\n";
            }
        }
        return failures > 0 ? exit_partial_failure : exit_ok;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config_error;
    }
}

struct stats_config {
    std::string summary_path;         // score mode: summary.csv from cmd_bench
    std::vector<double> avg_ranks;    // rank-input mode
    int n_datasets = 0;               // rank-input mode: number of datasets
    double alpha = 0.1;
    std::ostream* out = &std::cout;
};

namespace detail {

inline void print_stats_block(std::ostream& out,
                              const std::vector<std::string>& algorithms,
                              const Eigen::VectorXd& avg_ranks, int n, double alpha) {
    const int k = static_cast<int>(avg_ranks.size());
    out << "algorithms: " << k << ", datasets: " << n << "\n";
    out << "average ranks:\n";
    for (int i = 0; i < k; ++i)
        out << "  " << algorithms[static_cast<std::size_t>(i)] << ": "
            << format_double(avg_ranks[i]) << "\n";
    const friedman_result fr = friedman(avg_ranks, n, k);
    char line[160];
    std::snprintf(line, sizeof(line), "friedman: tau_chi2 = %.2f, F_F = %.2f\n",
                  fr.tau_chi2, fr.f_f);
    out << line;
    double crit = 0.0;
    if (friedman_critical_value(k, n, crit)) {
        std::snprintf(line, sizeof(line),
                      "critical value (alpha=%.2f): %.2f -> %s\n", alpha, crit,
                      fr.f_f > crit ? "REJECT equal performance"
                                    : "cannot reject equal performance");
        out << line;
    } else {
        out << "critical value: not tabulated for this (k, n); compare F_F "
               "externally\n";
    }
    const double cd = nemenyi_cd(nemenyi_q_010(k), k, n);
    std::snprintf(line, sizeof(line), "nemenyi CD (alpha=0.10): %.2f\n", cd);
    out << line;
    out << "pairwise verdicts (|rank difference| > CD means significant):\n";
    for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b) {
            const double diff = std::abs(avg_ranks[a] - avg_ranks[b]);
            std::snprintf(line, sizeof(line), "  %s vs %s: %.2f -> %s\n",
                          algorithms[static_cast<std::size_t>(a)].c_str(),
                          algorithms[static_cast<std::size_t>(b)].c_str(), diff,
                          diff > cd ? "different" : "not significant");
            out << line;
        }
}

} // namespace detail

/// Friedman/Nemenyi report. Score mode ranks a complete summary.csv matrix;
/// rank-input mode consumes average ranks directly.
inline int cmd_stats(const stats_config& cfg) {
    std::ostream& out = *cfg.out;
    try {
        if (std::abs(cfg.alpha - 0.1) > 1e-9)
            throw config_error("only alpha = 0.1 is tabulated");
        if (!cfg.avg_ranks.empty()) {
            if (cfg.n_datasets < 2)
                throw config_error("rank-input mode needs --n (datasets) >= 2");
            std::vector<std::string> names;
            for (std::size_t i = 0; i < cfg.avg_ranks.size(); ++i)
                names.push_back("algo" + std::to_string(i + 1));
            Eigen::VectorXd r = Eigen::Map<const Eigen::VectorXd>(
                cfg.avg_ranks.data(), static_cast<Eigen::Index>(cfg.avg_ranks.size()));
            detail::print_stats_block(out, names, r, cfg.n_datasets, cfg.alpha);
            return exit_ok;
        }
        csv_table t = read_csv(cfg.summary_path);
        const auto ds_col = t.column_index("dataset");
        const auto alg_col = t.column_index("algorithm");
        const auto mean_col = t.column_index("mean");
        std::vector<std::string> datasets, algorithms;
        std::map<std::pair<std::string, std::string>, double> cell;
        for (const auto& row : t.rows) {
            const auto& d = row[ds_col];
            const auto& a = row[alg_col];
            if (std::find(datasets.begin(), datasets.end(), d) == datasets.end())
                datasets.push_back(d);
            if (std::find(algorithms.begin(), algorithms.end(), a) == algorithms.end())
                algorithms.push_back(a);
            cell[{d, a}] = parse_double(row[mean_col], 0, mean_col);
        }
        if (datasets.size() < 2 || algorithms.size() < 2)
            throw config_error("stats needs >= 2 datasets and >= 2 algorithms");
        Eigen::MatrixXd scores(datasets.size(), algorithms.size());
        for (std::size_t i = 0; i < datasets.size(); ++i)
            for (std::size_t j = 0; j < algorithms.size(); ++j) {
                auto it = cell.find({datasets[i], algorithms[j]});
                if (it == cell.end())
                    throw missing_entry(datasets[i] + " x " + algorithms[j]);
                scores(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    it->second;
            }
        const rank_table table = average_ranks(algorithms, datasets, scores);
        out << "rank table (1 = best):\n";
        for (std::size_t i = 0; i < datasets.size(); ++i) {
            out << "  " << datasets[i] << ":";
            for (std::size_t j = 0; j < algorithms.size(); ++j)
                out << ' ' << format_double(table.ranks(static_cast<Eigen::Index>(i),
                                                        static_cast<Eigen::Index>(j)));
            out << "\n";
        }
        detail::print_stats_block(out, algorithms, table.average_ranks,
                                  static_cast<int>(datasets.size()), cfg.alpha);
        return exit_ok;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config_error;
    }
}

/// Re-run the benchmark on derived datasets with the requested imbalance
/// ratios; emits one summary per IR plus a plot-ready sweep CSV.
inline int cmd_irsweep(const std::string& manifest_path,
                       const std::vector<double>& irs, const bench_config& cfg) {
    try {
        if (cfg.algorithms.empty()) throw config_error("no algorithms selected");
        std::vector<algorithm> algos;
        for (const auto& name : cfg.algorithms) algos.push_back(parse_algorithm(name));
        const labeled_dataset base = load_dataset(load_manifest(manifest_path));
        std::filesystem::create_directories(cfg.output_dir);
        auto sweep = detail::open_output(std::filesystem::path(cfg.output_dir) /
                                         (base.name + "_irsweep.csv"));
        sweep << "ir,algorithm,mean_gmeans\n";
        int failures = 0;
        for (std::size_t t = 0; t < irs.size(); ++t) {
            const double ir = irs[t];
            labeled_dataset derived;
            try {
                derived = subsample_to_ir(base, ir, derive_seed(cfg.seed, "irsweep", t));
            } catch (const unachievable_ir& e) {
                std::cerr << "[triwin] " << base.name << " ir=" << ir
                          << " skipped: " << e.what() << "\n";
                continue;
            }
            derived.name = base.name;
            auto per_ir = detail::open_output(
                std::filesystem::path(cfg.output_dir) /
                (base.name + "_ir" + format_double(ir) + ".csv"));
            per_ir << "dataset,algorithm,mean,std,best_params\n";
            grid_spec grid = cfg.grid;
            if (cfg.sigma2_heuristic)
                grid.sigma2s = {sigma2_heuristic(derived.features)};
            for (algorithm algo : algos) {
                // seeded exactly like cmd_bench, so the IR == current row
                // reproduces the plain benchmark on the original data
                experiment_result r = grid_search_cv(derived, algo, grid, cfg.folds,
                                                     cfg.seed, cfg.options);
                failures += r.fold_failures;
                sweep << format_double(ir) << ',' << r.algorithm_label << ','
                      << format_double(r.mean) << '\n';
                per_ir << r.dataset << ',' << r.algorithm_label << ','
                       << format_double(r.mean) << ',' << format_double(r.stddev)
                       << ',' << detail::params_to_string(r.params) << '\n';
            }
        }
        return failures > 0 ? exit_partial_failure : exit_ok;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config_error;
    }
}

/// Emit the per-sample membership breakdown CSV:
/// sample_index, label, entropy, region, twf, kf, membership.
inline int cmd_membership(const std::string& manifest_path, int k, double sigma2,
                          const std::string& output_dir) {
    try {
        const labeled_dataset ds = load_dataset(load_manifest(manifest_path));
        if (k >= ds.size()) throw k_too_large(k, static_cast<int>(ds.size()));
        const double s2 = sigma2 > 0.0 ? sigma2 : sigma2_heuristic(ds.features);
        const kernel_spec spec = kernel_spec::rbf(s2);
        const auto th = thresholds_from_k(k);
        const Eigen::VectorXd s = three_way_membership(ds, k, spec);
        const gram_matrix Kc =
            center_gram(gram(ds.features, ds.features, spec, "X", "X"));

        std::filesystem::create_directories(output_dir);
        auto out = detail::open_output(std::filesystem::path(output_dir) /
                                       (ds.name + "_membership.csv"));
        out << "sample_index,label,entropy,region,twf,kf,membership\n";
        for (Eigen::Index i = 0; i < ds.size(); ++i) {
            const neighbor_profile p = knn_profile(ds, i, k);
            out << i << ',' << ds.labels[i] << ',' << format_double(p.entropy)
                << ',' << region_name(region_of(p.entropy, th)) << ','
                << format_double(twf(p, th)) << ','
                << format_double(kf(Kc, ds.labels, i, p)) << ','
                << format_double(s[i]) << '\n';
        }
        return exit_ok;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config_error;
    }
}

} // namespace triwin

#endif
