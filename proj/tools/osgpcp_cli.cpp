// osgpcp: run online GP conformal experiments and summarize their traces.

#include <cstdio>
#include <exception>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "osgpcp/bench.hpp"
#include "osgpcp/errors.hpp"

using namespace osgpcp;

namespace {

int run_command(const ExperimentConfig& config, const std::string& out) {
    const ExperimentResult result = run_experiment(config);
    write_trace(result.rows, out);
    write_sidecar(result, sidecar_path(out));

    const auto& hp = result.hyperparams;
    std::printf("fitted sigma_theta2=%.6g sigma_l2=%.6g sigma_n2=%.6g\n", hp.sigma_theta2, hp.sigma_l2,
                hp.sigma_n2);
    for (const auto& s : summarize(result.rows)) {
        std::printf("%-12s coverage=%.4f mean_size=%.4f\n", s.method.c_str(), s.final_coverage, s.mean_size);
    }
    std::size_t resets = 0;
    for (const auto& r : result.rows) {
        if (r.reset) {
            std::printf("reset at slot %zu\n", r.t);
            ++resets;
        }
    }
    std::printf("wrote %zu rows to %s (%zu resets)\n", result.rows.size(), out.c_str(), resets);
    return 0;
}

int summarize_command(const std::string& path) {
    const auto rows = read_trace(path);
    std::printf("%zu rows\n", rows.size());
    for (const auto& s : summarize(rows)) {
        std::printf("%-12s coverage=%.4f mean_size=%.4f infinite=%zu empty=%zu\n", s.method.c_str(),
                    s.final_coverage, s.mean_size, s.infinite_sets, s.empty_sets);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Online scalable GP with adaptive conformal prediction"};
    app.require_subcommand(1);

    ExperimentConfig config;
    std::string out = "trace.csv";
    std::string csv_features = "open,high,low";
    char delimiter = ',';

    const std::map<std::string, Dataset> datasets{
        {"iid", Dataset::Iid}, {"shift", Dataset::Shift}, {"csv", Dataset::Csv}};
    const std::map<std::string, EtaMode> eta_modes{{"constant", EtaMode::Constant},
                                                   {"decaying_with_reset", EtaMode::DecayingWithReset},
                                                   {"decaying", EtaMode::DecayingWithReset}};

    auto* run = app.add_subcommand("run", "Run an experiment and write a trace CSV plus JSON sidecar");
    run->add_option("--dataset", config.dataset, "iid | shift | csv")
        ->transform(CLI::CheckedTransformer(datasets, CLI::ignore_case));
    run->add_option("--csv-path", config.csv_path, "Input CSV for --dataset csv");
    run->add_option("--csv-features", csv_features, "Comma-separated feature column names");
    run->add_option("--csv-target", config.csv_target, "Target column name");
    run->add_option("--csv-delimiter", delimiter, "CSV delimiter");
    run->add_option("-n,--samples", config.n, "Stream length for synthetic datasets");
    run->add_option("--alpha", config.alpha, "Target miscoverage");
    run->add_option("--features", config.num_features, "Number of spectral features D");
    run->add_option("--warmup", config.warmup, "Records used to fit hyperparameters");
    run->add_option("--eta-mode", config.eta_mode, "constant | decaying_with_reset")
        ->transform(CLI::CheckedTransformer(eta_modes, CLI::ignore_case));
    run->add_option("--eta", config.eta_const, "Constant learning rate");
    run->add_option("--window", config.window, "Change-point window W");
    run->add_option("--consecutive", config.consecutive, "Consecutive increases r");
    run->add_option("--clip-b", config.clip_bound, "Score clip bound B");
    run->add_option("--seed-features", config.seed_features, "Seed of the frequency stream");
    run->add_option("--seed-data", config.seed_data, "Seed of the synthetic data stream");
    run->add_option("--out", out, "Trace CSV path");

    std::string trace_path;
    auto* summ = app.add_subcommand("summarize", "Print final coverage and mean set size per method");
    summ->add_option("trace", trace_path, "Trace CSV")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            config.csv_delimiter = delimiter;
            config.csv_features.clear();
            std::size_t start = 0;
            while (start <= csv_features.size()) {
                const auto end = csv_features.find(',', start);
                const auto name = csv_features.substr(start, end == std::string::npos ? end : end - start);
                if (!name.empty()) config.csv_features.push_back(name);
                if (end == std::string::npos) break;
                start = end + 1;
            }
            if (config.dataset == Dataset::Csv && config.csv_path.empty()) {
                throw InputError("--dataset csv requires --csv-path");
            }
            return run_command(config, out);
        }
        return summarize_command(trace_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
