// bench: experiment driver for the extended-neighbourhood-rule kNN ensemble.
//
//   bench run --config FILE [--datasets ...] [--methods ...] [--reps N] [--seed N]
//             [--k 3,5,7] [--B N] [--tune] [--scale] [--threads N] [--out DIR]
//   bench scenario --id S1 --seed N --out FILE
//   bench plot --metric accuracy --in results.csv --out DIR

#include <cstdio>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "exnrule/bench.hpp"
#include "exnrule/error.hpp"

namespace {

using namespace exn;
using namespace exn::bench;

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& s : items) out += (out.empty() ? "" : ",") + s;
    return out;
}

void print_summary(const ResultsTable& table) {
    fmt::print("{:<10} {:<12} {:>6} {:>5} {:>9} {:>9} {:>9}\n", "method", "dataset", "k", "reps", "accuracy",
               "kappa", "brier");
    for (const auto& s : table.summary())
        fmt::print("{:<10} {:<12} {:>6} {:>5} {:>9.3f} {:>9.3f} {:>9.3f}\n", s.method, s.dataset,
                   s.k == 0 ? std::string("tuned") : std::to_string(s.k), s.count, s.accuracy, s.kappa, s.brier);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Benchmark driver for the extended-neighbourhood-rule kNN ensemble"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run repeated train/test evaluations and write result tables");
    std::string config_file, out_dir;
    std::vector<std::string> datasets, methods;
    std::vector<std::size_t> k_values;
    std::size_t reps = 0, ensemble = 0;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    std::string feature_rule;
    double q = 0.0, train_fraction = 0.0;
    run->add_option("--config", config_file, "Flat key = value configuration file");
    run->add_option("--datasets", datasets, "Scenario ids (S1..S6), name=path.csv, or path.csv")->delimiter(',');
    run->add_option("--methods", methods, "Subset of exnrule,knn,wknn,rknn")->delimiter(',');
    run->add_option("--reps", reps, "Repetitions (default 50)");
    run->add_option("--seed", seed, "Master seed");
    run->add_option("--k", k_values, "Comma-separated k values (default 3)")->delimiter(',');
    run->add_option("--B", ensemble, "Ensemble size (default 500)");
    run->add_option("--train-fraction", train_fraction, "Training share of each split (default 0.7)");
    run->add_option("--feature-rule", feature_rule, "sqrt, p/2 .. p/5, or a count (default sqrt)");
    run->add_option("--q", q, "Minkowski exponent (default 2)");
    auto* tune_flag = run->add_flag("--tune", "Tune k for knn/wknn/rknn by 5-fold CV over 1..10");
    auto* scale_flag = run->add_flag("--scale", "z-score features using training statistics");
    run->add_option("--threads", threads, "Worker threads, 0 = all cores (default 0)");
    run->add_option("--out", out_dir, "Output directory");

    auto* scenario = app.add_subcommand("scenario", "Write one synthetic scenario as CSV");
    std::string scenario_id, scenario_out;
    std::uint64_t scenario_seed = 1;
    scenario->add_option("--id", scenario_id, "S1..S6")->required();
    scenario->add_option("--seed", scenario_seed, "Seed");
    scenario->add_option("--out", scenario_out, "Output CSV path")->required();

    auto* plot = app.add_subcommand("plot", "Emit boxplot TSV and SVG from a results.csv");
    std::string plot_metric, plot_in, plot_out;
    plot->add_option("--metric", plot_metric, "accuracy, kappa or brier")->required();
    plot->add_option("--in", plot_in, "results.csv")->required();
    plot->add_option("--out", plot_out, "Output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            ExperimentConfig cfg;
            if (!config_file.empty()) cfg = load_config_file(config_file, cfg);
            if (run->count("--datasets")) cfg.set("datasets", join(datasets));
            if (run->count("--methods")) cfg.set("methods", join(methods));
            if (run->count("--reps")) cfg.repetitions = reps;
            if (run->count("--seed")) cfg.master_seed = seed;
            if (run->count("--k")) cfg.k_values = k_values;
            if (run->count("--B")) cfg.ensemble_size = ensemble;
            if (run->count("--train-fraction")) cfg.train_fraction = train_fraction;
            if (run->count("--feature-rule")) cfg.set("feature_rule", feature_rule);
            if (run->count("--q")) cfg.minkowski_q = q;
            if (tune_flag->count()) cfg.tune = true;
            if (scale_flag->count()) cfg.scale = true;
            if (run->count("--threads")) cfg.threads = threads;
            if (run->count("--out")) cfg.output_dir = out_dir;
            if (cfg.datasets.empty()) cfg.set("datasets", "S1,S2,S3,S4,S5,S6");

            const auto table = run_experiment(cfg);
            print_summary(table);
            if (!cfg.output_dir.empty()) fmt::print("wrote {}\n", cfg.output_dir.string());
        } else if (*scenario) {
            dump_scenario(scenario_id, scenario_seed, scenario_out);
        } else if (*plot) {
            const auto metric = parse_metric(plot_metric);
            const auto table = read_results_csv(plot_in);
            const std::filesystem::path dir(plot_out);
            const auto stem = "box_" + to_string(metric);
            emit_boxplot_data(table, metric, dir / (stem + ".tsv"), dir / (stem + ".svg"));
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
