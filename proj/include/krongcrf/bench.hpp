#pragma once

#include "krongcrf/gcrf.hpp"
#include "krongcrf/synthdata.hpp"

#include <string>
#include <vector>

namespace krongcrf {

enum class Suite { Fitness, Robustness, Timing, Nkp };
enum class Model { Base, BaseSvd, LaplaceVec, NormLaplaceVec, Msn };

std::string to_string(Suite s);
std::string to_string(Model m);
Suite suite_from_string(const std::string& s);
Model model_from_string(const std::string& s);

struct SuiteConfig {
    Suite suite = Suite::Fitness;
    GraphFamily graph = GraphFamily::ErdosRenyi;
    std::vector<std::pair<Index, Index>> sizes = {{30, 50}};
    std::vector<double> densities = {0.1, 0.3, 0.5, 0.65, 0.8};
    std::vector<double> output_noises = {0.33}; // evaluation noise stds added to outputs
    std::vector<double> nkp_noises = {0.0, 0.05, 0.1, 0.15, 0.2, 0.4, 0.6};
    std::vector<Model> models = {Model::Base, Model::LaplaceVec, Model::NormLaplaceVec,
                                 Model::Msn};
    int reps = 100;
    std::uint64_t base_seed = 0;
    PairingMode pairing = PairingMode::Sorted;
    double ws_rewire = 0.1;
    int workers = 0; // 0 = hardware concurrency; timing always runs 1
    Index dense_cap = kDefaultDenseCap;
    Index streaming_threshold = 8192;
    FitOptions fit;
    bool beta_zero_smoke = false; // debug: predict with beta = 0
};

/// One repetition of one model in one experiment cell. A failed run carries
/// mse = NaN and is excluded from aggregation.
struct RunRecord {
    Suite suite = Suite::Fitness;
    GraphFamily graph = GraphFamily::ErdosRenyi;
    Index n1 = 0, n2 = 0;
    double rho1 = 0.0, rho2 = 0.0;
    double sigma = 0.0;     // evaluation noise std
    double nkp_noise = 0.0; // added-edge fraction (nkp suite only)
    Model model = Model::Base;
    int rep = 0;
    std::uint64_t seed = 0;
    double mse = 0.0;
    double runtime_s = 0.0;
    int iterations = 0;

    bool failed() const;
};

/// NKP residuals before/after factor sparsification, one row per repetition.
struct NkpResidualRecord {
    GraphFamily graph = GraphFamily::ErdosRenyi;
    Index n1 = 0, n2 = 0;
    double rho1 = 0.0, rho2 = 0.0;
    double frac = 0.0;
    int rep = 0;
    double residual_before = 0.0;
    double residual_after = 0.0;
};

struct SuiteResult {
    std::vector<RunRecord> records;
    std::vector<NkpResidualRecord> nkp_residuals;

    bool any_failed() const;
};

struct Aggregate {
    double trimmed_mean = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    int used = 0;
};

/// 5th-95th percentile trimmed mean (linear-interpolation percentiles, kept
/// range inclusive) with a 1.96 s/sqrt(k) normal CI. Throws TooFewRecords
/// below 3 values.
Aggregate aggregate(std::vector<double> values);

/// Linear-interpolation percentile of a sample, p in [0, 100].
double percentile(std::vector<double> values, double p);

struct CellSummary {
    Suite suite;
    GraphFamily graph;
    Index n1, n2;
    double rho1, rho2;
    double sigma;
    double nkp_noise;
    Model model;
    int reps_total = 0;
    int reps_used = 0;
    double trimmed_mse = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double mean_runtime_s = 0.0;
    double mean_iterations = 0.0;
};

std::vector<CellSummary> summarize(const std::vector<RunRecord>& records);

SuiteResult run_fitness(const SuiteConfig& cfg);
SuiteResult run_robustness(const SuiteConfig& cfg);
SuiteResult run_timing(const SuiteConfig& cfg);
SuiteResult run_nkp(const SuiteConfig& cfg);
SuiteResult run_suite(const SuiteConfig& cfg);

/// Deterministic per-repetition stream shared by every suite touching the same
/// cell, so a zero-violation nkp cell reproduces the fitness cell exactly.
std::uint64_t cell_stream(GraphFamily graph, Index n1, Index n2, double rho1, double rho2,
                          int rep);

void write_runs_csv(const std::string& path, const std::vector<RunRecord>& records);
std::vector<RunRecord> read_runs_csv(const std::string& path);
void write_summary_csv(const std::string& path, const std::vector<CellSummary>& cells);
void write_nkp_residuals_csv(const std::string& path,
                             const std::vector<NkpResidualRecord>& rows);
/// One two-column series (x, trimmed MSE) per (suite, graph, size, model).
void write_plotdata(const std::string& dir, const std::vector<CellSummary>& cells);

} // namespace krongcrf
