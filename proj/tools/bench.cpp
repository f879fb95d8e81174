#include "krongcrf/bench.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>

namespace {

using namespace krongcrf;

std::vector<std::pair<Index, Index>> parse_sizes(const std::string& text) {
    std::vector<std::pair<Index, Index>> sizes;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto x = item.find('x');
        if (x == std::string::npos) {
            throw CLI::ValidationError("--sizes", "expected entries like 30x50");
        }
        sizes.emplace_back(std::stol(item.substr(0, x)), std::stol(item.substr(x + 1)));
    }
    if (sizes.empty()) {
        throw CLI::ValidationError("--sizes", "needs at least one size");
    }
    return sizes;
}

std::vector<double> parse_doubles(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(std::stod(item));
    }
    return out;
}

std::vector<Model> parse_models(const std::string& text) {
    std::vector<Model> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(model_from_string(item));
    }
    return out;
}

struct CliOptions {
    std::string graph = "er";
    std::string sizes;
    std::string densities;
    std::string noises;
    std::string nkp_noises;
    std::string models;
    std::string pairing = "sorted";
    std::string out_dir = "bench_out";
    int reps = -1;
    std::uint64_t seed = 0;
    int workers = 0;
    double p_rewire = 0.1;
    long dense_cap = kDefaultDenseCap;
    bool beta_zero_smoke = false;
};

void add_common_options(CLI::App* cmd, CliOptions& opt) {
    cmd->add_option("--graph", opt.graph, "Graph family: er, ba or ws")
        ->check(CLI::IsMember({"er", "ba", "ws"}));
    cmd->add_option("--sizes", opt.sizes, "Comma-separated factor orders, e.g. 30x50,50x100");
    cmd->add_option("--densities", opt.densities, "Comma-separated edge densities");
    cmd->add_option("--noises", opt.noises, "Comma-separated output noise stds");
    cmd->add_option("--nkp-noises", opt.nkp_noises,
                    "Comma-separated added-edge fractions (nkp suite)");
    cmd->add_option("--models", opt.models,
                    "Comma-separated subset of base,base_svd,laplace_vec,norm_laplace_vec,msn");
    cmd->add_option("--reps", opt.reps, "Repetitions per cell");
    cmd->add_option("--seed", opt.seed, "Base seed");
    cmd->add_option("--pairing", opt.pairing, "Eigenvalue/degree pairing: sorted or vertex-order")
        ->check(CLI::IsMember({"sorted", "vertex-order"}));
    cmd->add_option("--out", opt.out_dir, "Output directory");
    cmd->add_option("--workers", opt.workers, "Worker threads (0 = hardware)");
    cmd->add_option("--p-rewire", opt.p_rewire, "Watts-Strogatz rewiring probability");
    cmd->add_option("--dense-cap", opt.dense_cap, "Dense product-order cap");
    cmd->add_flag("--beta-zero-smoke", opt.beta_zero_smoke,
                  "Debug: predict with beta = 0 (returns the unstructured predictor)");
}

SuiteConfig build_config(Suite suite, const CliOptions& opt) {
    SuiteConfig cfg;
    cfg.suite = suite;
    cfg.graph = graph_family_from_string(opt.graph);
    cfg.base_seed = opt.seed;
    cfg.pairing = opt.pairing == "sorted" ? PairingMode::Sorted : PairingMode::VertexOrder;
    cfg.ws_rewire = opt.p_rewire;
    cfg.workers = opt.workers;
    cfg.dense_cap = opt.dense_cap;
    cfg.beta_zero_smoke = opt.beta_zero_smoke;

    switch (suite) {
        case Suite::Fitness:
            cfg.sizes = {{30, 50}};
            cfg.densities = {0.1, 0.3, 0.5, 0.65, 0.8};
            cfg.output_noises = {0.33};
            cfg.reps = 100;
            break;
        case Suite::Robustness:
            cfg.sizes = {{30, 50}};
            cfg.densities = {0.5};
            cfg.output_noises = {0.0, 0.25, 0.33, 0.5};
            cfg.reps = 100;
            break;
        case Suite::Timing:
            cfg.sizes = {{50, 30}, {50, 100}, {100, 200}};
            cfg.densities = {0.3};
            cfg.output_noises = {0.33};
            cfg.reps = 3;
            break;
        case Suite::Nkp:
            cfg.sizes = {{30, 50}};
            cfg.densities = {0.1, 0.2, 0.3};
            cfg.output_noises = {0.33};
            cfg.models.push_back(Model::BaseSvd);
            cfg.reps = 100;
            break;
    }
    if (!opt.sizes.empty()) cfg.sizes = parse_sizes(opt.sizes);
    if (!opt.densities.empty()) cfg.densities = parse_doubles(opt.densities);
    if (!opt.noises.empty()) cfg.output_noises = parse_doubles(opt.noises);
    if (!opt.nkp_noises.empty()) cfg.nkp_noises = parse_doubles(opt.nkp_noises);
    if (!opt.models.empty()) cfg.models = parse_models(opt.models);
    if (opt.reps > 0) cfg.reps = opt.reps;
    return cfg;
}

int run(Suite suite, const CliOptions& opt) {
    const SuiteConfig cfg = build_config(suite, opt);
    const SuiteResult result = run_suite(cfg);

    namespace fs = std::filesystem;
    fs::create_directories(opt.out_dir);
    write_runs_csv(opt.out_dir + "/runs.csv", result.records);
    const auto cells = summarize(result.records);
    write_summary_csv(opt.out_dir + "/summary.csv", cells);
    write_plotdata(opt.out_dir + "/plotdata", cells);
    if (!result.nkp_residuals.empty()) {
        write_nkp_residuals_csv(opt.out_dir + "/nkp_residuals.csv", result.nkp_residuals);
    }

    std::printf("%-10s %-5s %9s %6s %6s %9s %12s %10s %8s\n", "suite", "graph", "size", "rho",
                "sigma", "model", "trimmed_mse", "ci_width", "time_s");
    for (const auto& c : cells) {
        std::printf("%-10s %-5s %4ldx%-4ld %6.3f %6.3f %16s %12.5f %10.5f %8.3f\n",
                    to_string(c.suite).c_str(), to_string(c.graph).c_str(),
                    static_cast<long>(c.n1), static_cast<long>(c.n2), c.rho1, c.sigma,
                    to_string(c.model).c_str(), c.trimmed_mse, c.ci_high - c.ci_low,
                    c.mean_runtime_s);
    }

    if (result.any_failed()) {
        std::fprintf(stderr, "warning: some runs failed; see %s/runs.csv\n", opt.out_dir.c_str());
        return 2;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"GCRF benchmark harness for Kronecker-structured networks"};
    app.require_subcommand(1);

    CliOptions opt;
    CLI::App* fitness = app.add_subcommand("fitness", "MSE as a function of edge density");
    CLI::App* robustness = app.add_subcommand("robustness", "MSE as a function of output noise");
    CLI::App* timing = app.add_subcommand("timing", "Wall-clock preprocessing + learning time");
    CLI::App* nkp =
        app.add_subcommand("nkp", "Near-Kronecker pipeline: violate, decompose, sparsify, fit");
    for (CLI::App* cmd : {fitness, robustness, timing, nkp}) {
        add_common_options(cmd, opt);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(fitness)) return run(Suite::Fitness, opt);
        if (app.got_subcommand(robustness)) return run(Suite::Robustness, opt);
        if (app.got_subcommand(timing)) return run(Suite::Timing, opt);
        return run(Suite::Nkp, opt);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
