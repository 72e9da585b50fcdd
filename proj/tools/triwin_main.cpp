#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "triwin/bench.hpp"

namespace {

triwin::denom_mode parse_denominator(const std::string& text) {
    if (text == "class-gram") return triwin::denom_mode::class_gram;
    if (text == "full-gram") return triwin::denom_mode::full_gram;
    throw triwin::config_error("denominator must be class-gram or full-gram");
}

std::vector<std::string> all_algorithm_names() {
    std::vector<std::string> names;
    for (const auto& [name, alg] : triwin::algorithm_names()) names.push_back(name);
    return names;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"triwin: twin SVM benchmark harness for imbalanced binary "
                 "classification"};
    app.require_subcommand(1);

    // bench
    auto* bench = app.add_subcommand("bench", "grid-search benchmark over datasets");
    triwin::bench_config bcfg;
    std::string grid_text = "default";
    std::string denominator = "class-gram";
    std::string sigma2_mode = "grid";
    bcfg.algorithms = all_algorithm_names();
    bench->add_option("--manifests", bcfg.manifests, "dataset manifest JSON files")
        ->required();
    bench->add_option("--algorithms", bcfg.algorithms,
                      "subset of: svm ros-svm rus-svm smote-svm fsvm cka-fsvm "
                      "tsvm twftsvm");
    bench->add_option("--folds", bcfg.folds, "cross-validation folds (default 10)");
    bench->add_option("--seed", bcfg.seed, "master seed");
    bench->add_option("--grid", grid_text, "default | tiny | key=v1,v2;... overrides");
    bench->add_option("--out", bcfg.output_dir, "output directory");
    bench->add_option("--denominator", denominator,
                      "kernel decision denominator: class-gram | full-gram");
    bench->add_option("--sigma2-mode", sigma2_mode,
                      "grid (default) or heuristic (mean squared pairwise distance)");

    // stats
    auto* stats = app.add_subcommand("stats", "Friedman / Nemenyi rank report");
    triwin::stats_config scfg;
    std::vector<double> ranks;
    stats->add_option("summary", scfg.summary_path, "summary.csv from bench");
    stats->add_option("--ranks", ranks, "rank-input mode: average ranks per algorithm");
    stats->add_option("--n", scfg.n_datasets, "rank-input mode: number of datasets");
    stats->add_option("--alpha", scfg.alpha, "significance level (0.1 tabulated)");

    // irsweep
    auto* irsweep = app.add_subcommand("irsweep",
                                       "benchmark derived datasets at fixed IRs");
    std::string ir_manifest;
    std::vector<double> irs = {2, 3, 4, 5, 6, 7, 8};
    triwin::bench_config icfg;
    std::string igrid_text = "default";
    std::string idenominator = "class-gram";
    std::string isigma2_mode = "grid";
    icfg.algorithms = all_algorithm_names();
    irsweep->add_option("--manifests", ir_manifest, "dataset manifest JSON file")
        ->required();
    irsweep->add_option("--irs", irs, "target imbalance ratios");
    irsweep->add_option("--algorithms", icfg.algorithms, "algorithm subset");
    irsweep->add_option("--folds", icfg.folds, "cross-validation folds");
    irsweep->add_option("--seed", icfg.seed, "master seed");
    irsweep->add_option("--grid", igrid_text, "grid selection or overrides");
    irsweep->add_option("--out", icfg.output_dir, "output directory");
    irsweep->add_option("--denominator", idenominator, "class-gram | full-gram");
    irsweep->add_option("--sigma2-mode", isigma2_mode, "grid | heuristic");

    // membership
    auto* membership = app.add_subcommand("membership",
                                          "per-sample membership breakdown CSV");
    std::string m_manifest;
    int m_k = 11;
    double m_sigma2 = 0.0; // 0 selects the heuristic
    std::string m_out = ".";
    membership->add_option("--manifests", m_manifest, "dataset manifest JSON file")
        ->required();
    membership->add_option("--k", m_k, "neighbor count (default 11)");
    membership->add_option("--sigma2", m_sigma2,
                           "rbf width; omit to use the heuristic");
    membership->add_option("--out", m_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (bench->parsed()) {
            bcfg.grid = triwin::parse_grid(grid_text);
            bcfg.options.denominator = parse_denominator(denominator);
            if (sigma2_mode == "heuristic") bcfg.sigma2_heuristic = true;
            else if (sigma2_mode != "grid")
                throw triwin::config_error("sigma2-mode must be grid or heuristic");
            return triwin::cmd_bench(bcfg);
        }
        if (stats->parsed()) {
            scfg.avg_ranks = ranks;
            if (scfg.summary_path.empty() && ranks.empty())
                throw triwin::config_error(
                    "stats needs a summary.csv path or --ranks");
            return triwin::cmd_stats(scfg);
        }
        if (irsweep->parsed()) {
            icfg.grid = triwin::parse_grid(igrid_text);
            icfg.options.denominator = parse_denominator(idenominator);
            if (isigma2_mode == "heuristic") icfg.sigma2_heuristic = true;
            else if (isigma2_mode != "grid")
                throw triwin::config_error("sigma2-mode must be grid or heuristic");
            return triwin::cmd_irsweep(ir_manifest, irs, icfg);
        }
        if (membership->parsed()) {
            return triwin::cmd_membership(m_manifest, m_k, m_sigma2, m_out);
        }
    } catch (const triwin::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return triwin::exit_config_error;
    }
    return triwin::exit_config_error;
}
