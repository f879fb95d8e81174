#include "krongcrf/bench.hpp"

#include "krongcrf/nkp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

namespace krongcrf {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::uint64_t hash_double(double v) {
    return mix64(static_cast<std::uint64_t>(std::llround(v * 1e9)));
}

constexpr std::uint64_t kEvalNoiseTrainTag = 1001;
constexpr std::uint64_t kEvalNoiseTestTag = 1002;
constexpr std::uint64_t kNkpStartTag = 1003;

Vector eval_noise(Index n, double sigma, RngStream rng) {
    Vector v = Vector::Zero(n);
    if (sigma > 0.0) {
        for (Index i = 0; i < n; ++i) v[i] = rng.normal(0.0, sigma);
    }
    return v;
}

struct ModelRun {
    double mse = std::numeric_limits<double>::quiet_NaN();
    double runtime_s = 0.0;
    int iterations = 0;
};

// Preprocessing (basis + projection) and fitting are timed; prediction and
// scoring are not, matching how the execution-time tables are defined.
ModelRun execute_model(const SuiteConfig& cfg, const BasisPtr& basis_input,
                       double shared_time, const Vector& z_train, const Vector& r_train,
                       const Vector& z_test, const Vector& r_test) {
    ModelRun out;
    const auto t0 = Clock::now();
    GcrfProblem problem = build_problem(basis_input, z_train, r_train);
    const FitResult fitres = fit(problem, cfg.fit);
    out.runtime_s = shared_time + seconds_since(t0);
    out.iterations = fitres.iterations;
    const double beta = cfg.beta_zero_smoke ? 0.0 : fitres.beta;
    const Vector yhat = predict(*basis_input, fitres.alpha, beta, r_test);
    out.mse = mse(yhat, z_test);
    return out;
}

BasisPtr build_model_basis(const SuiteConfig& cfg, Model model, const SimilarityMatrix& s1,
                           const SimilarityMatrix& s2,
                           const std::optional<SimilarityMatrix>& dense_s) {
    const ExactBasisOptions opts{cfg.dense_cap, cfg.streaming_threshold};
    switch (model) {
        case Model::Base:
            return dense_s ? exact_basis_from_similarity(*dense_s, opts)
                           : exact_kron_basis(s1, s2, opts);
        case Model::BaseSvd:
            return exact_kron_basis(s1, s2, opts);
        case Model::LaplaceVec:
            return approx_laplace_vec(s1, s2, cfg.pairing);
        case Model::NormLaplaceVec:
            return approx_norm_laplace_vec(s1, s2, cfg.pairing);
        case Model::Msn:
            return approx_msn(s1, s2);
    }
    throw KronGcrfError("unknown model");
}

struct Cell {
    Index n1, n2;
    double rho;
    double sigma;
    double frac;
};

// Runs every model of one repetition on a shared dataset.
void run_rep(const SuiteConfig& cfg, const Cell& cell, int rep, RunRecord* out) {
    const std::uint64_t stream = cell_stream(cfg.graph, cell.n1, cell.n2, cell.rho, cell.rho, rep);
    RngStream rng(cfg.base_seed, stream);

    RunRecord proto;
    proto.suite = cfg.suite;
    proto.graph = cfg.graph;
    proto.n1 = cell.n1;
    proto.n2 = cell.n2;
    proto.rho1 = cell.rho;
    proto.rho2 = cell.rho;
    proto.sigma = cell.sigma;
    proto.nkp_noise = cell.frac;
    proto.rep = rep;
    proto.seed = stream;
    for (std::size_t m = 0; m < cfg.models.size(); ++m) {
        out[m] = proto;
        out[m].model = cfg.models[m];
    }

    try {
        DatasetParams params;
        params.family = cfg.graph;
        params.n1 = cell.n1;
        params.n2 = cell.n2;
        params.rho1 = cell.rho;
        params.rho2 = cell.rho;
        params.ws_rewire = cfg.ws_rewire;
        params.violation_frac = cell.frac;
        params.materialize_product = cfg.suite == Suite::Nkp;
        params.dense_cap = cfg.dense_cap;
        const Dataset data = gen_dataset(params, rng);

        const std::uint64_t sig_tag = hash_double(cell.sigma);
        const Vector z_train =
            data.y_train + eval_noise(data.order(), cell.sigma,
                                      rng.substream(kEvalNoiseTrainTag ^ sig_tag));
        const Vector z_test =
            data.y_test + eval_noise(data.order(), cell.sigma,
                                     rng.substream(kEvalNoiseTestTag ^ sig_tag));

        // The nkp pipeline (decomposition + sparsification) is shared by every
        // model that consumes the recovered factors; its time counts for them.
        double nkp_time = 0.0;
        const SimilarityMatrix* s1 = &data.s1;
        const SimilarityMatrix* s2 = &data.s2;
        std::optional<std::pair<SimilarityMatrix, SimilarityMatrix>> recovered;
        if (cfg.suite == Suite::Nkp) {
            const auto t0 = Clock::now();
            RngStream nkp_rng = rng.substream(kNkpStartTag);
            const KronFactors factors =
                nearest_kron(data.s->entries(), cell.n1, cell.n2, nkp_rng);
            recovered = sparsify_factors(factors, cell.rho, cell.rho);
            nkp_time = seconds_since(t0);
            s1 = &recovered->first;
            s2 = &recovered->second;
        }

        for (std::size_t m = 0; m < cfg.models.size(); ++m) {
            const Model model = cfg.models[m];
            try {
                const auto t0 = Clock::now();
                const bool uses_factors = model != Model::Base;
                const BasisPtr basis = build_model_basis(
                    cfg, model, uses_factors ? *s1 : data.s1, uses_factors ? *s2 : data.s2,
                    model == Model::Base ? data.s : std::nullopt);
                const double basis_time = seconds_since(t0);
                const double shared = (cfg.suite == Suite::Nkp && model != Model::Base)
                                          ? nkp_time + basis_time
                                          : basis_time;
                const ModelRun r = execute_model(cfg, basis, shared, z_train, data.r_train,
                                                 z_test, data.r_test);
                out[m].mse = r.mse;
                out[m].runtime_s = r.runtime_s;
                out[m].iterations = r.iterations;
            } catch (const std::exception&) {
                out[m].mse = std::numeric_limits<double>::quiet_NaN();
            }
        }
    } catch (const std::exception&) {
        for (std::size_t m = 0; m < cfg.models.size(); ++m) {
            out[m].mse = std::numeric_limits<double>::quiet_NaN();
        }
    }
}

std::vector<RunRecord> run_cells(const SuiteConfig& cfg, const std::vector<Cell>& cells,
                                 bool force_serial) {
    const std::size_t per_rep = cfg.models.size();
    std::vector<RunRecord> records(cells.size() * static_cast<std::size_t>(cfg.reps) * per_rep);

    unsigned workers = cfg.workers > 0 ? static_cast<unsigned>(cfg.workers)
                                       : std::max(1u, std::thread::hardware_concurrency());
    if (force_serial) workers = 1;

    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
        RunRecord* cell_base = records.data() + ci * static_cast<std::size_t>(cfg.reps) * per_rep;
        if (workers <= 1) {
            for (int rep = 0; rep < cfg.reps; ++rep) {
                run_rep(cfg, cells[ci], rep, cell_base + static_cast<std::size_t>(rep) * per_rep);
            }
        } else {
            std::vector<std::thread> pool;
            pool.reserve(workers);
            for (unsigned w = 0; w < workers; ++w) {
                pool.emplace_back([&, w]() {
                    for (int rep = static_cast<int>(w); rep < cfg.reps;
                         rep += static_cast<int>(workers)) {
                        run_rep(cfg, cells[ci], rep,
                                cell_base + static_cast<std::size_t>(rep) * per_rep);
                    }
                });
            }
            for (auto& t : pool) t.join();
        }
    }
    return records;
}

} // namespace

bool RunRecord::failed() const { return std::isnan(mse); }

bool SuiteResult::any_failed() const {
    return std::any_of(records.begin(), records.end(),
                       [](const RunRecord& r) { return r.failed(); });
}

std::uint64_t cell_stream(GraphFamily graph, Index n1, Index n2, double rho1, double rho2,
                          int rep) {
    std::uint64_t h = mix64(static_cast<std::uint64_t>(graph) + 1);
    h = mix64(h ^ mix64(static_cast<std::uint64_t>(n1)));
    h = mix64(h ^ mix64(static_cast<std::uint64_t>(n2)));
    h = mix64(h ^ hash_double(rho1));
    h = mix64(h ^ hash_double(rho2));
    h = mix64(h ^ mix64(static_cast<std::uint64_t>(rep) + 0x51ULL));
    return h;
}

double percentile(std::vector<double> values, double p) {
    if (values.empty()) {
        throw TooFewRecords("percentile of an empty sample");
    }
    std::sort(values.begin(), values.end());
    const double h = p / 100.0 * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= values.size()) {
        return values.back();
    }
    const double frac = h - static_cast<double>(lo);
    return values[lo] + frac * (values[lo + 1] - values[lo]);
}

Aggregate aggregate(std::vector<double> values) {
    values.erase(std::remove_if(values.begin(), values.end(),
                                [](double v) { return std::isnan(v); }),
                 values.end());
    if (values.size() < 3) {
        throw TooFewRecords("aggregate needs at least 3 records, got " +
                            std::to_string(values.size()));
    }
    const double p5 = percentile(values, 5.0);
    const double p95 = percentile(values, 95.0);
    std::vector<double> kept;
    kept.reserve(values.size());
    for (double v : values) {
        if (v >= p5 && v <= p95) kept.push_back(v);
    }
    const auto k = static_cast<double>(kept.size());
    const double mean = std::accumulate(kept.begin(), kept.end(), 0.0) / k;
    double var = 0.0;
    for (double v : kept) var += (v - mean) * (v - mean);
    const double sd = kept.size() > 1 ? std::sqrt(var / (k - 1.0)) : 0.0;
    const double half = 1.96 * sd / std::sqrt(k);
    return {mean, mean - half, mean + half, static_cast<int>(kept.size())};
}

SuiteResult run_fitness(const SuiteConfig& cfg) {
    const double sigma = cfg.output_noises.empty() ? 0.33 : cfg.output_noises.front();
    std::vector<Cell> cells;
    for (const auto& [n1, n2] : cfg.sizes) {
        for (double rho : cfg.densities) {
            cells.push_back({n1, n2, rho, sigma, 0.0});
        }
    }
    return {run_cells(cfg, cells, false), {}};
}

SuiteResult run_robustness(const SuiteConfig& cfg) {
    std::vector<Cell> cells;
    for (const auto& [n1, n2] : cfg.sizes) {
        for (double rho : cfg.densities) {
            for (double sigma : cfg.output_noises) {
                cells.push_back({n1, n2, rho, sigma, 0.0});
            }
        }
    }
    return {run_cells(cfg, cells, false), {}};
}

SuiteResult run_timing(const SuiteConfig& cfg) {
    const double sigma = cfg.output_noises.empty() ? 0.33 : cfg.output_noises.front();
    std::vector<Cell> cells;
    for (const auto& [n1, n2] : cfg.sizes) {
        for (double rho : cfg.densities) {
            cells.push_back({n1, n2, rho, sigma, 0.0});
        }
    }
    // Single worker keeps the wall-clock measurements clean.
    return {run_cells(cfg, cells, true), {}};
}

SuiteResult run_nkp(const SuiteConfig& cfg) {
    const double sigma = cfg.output_noises.empty() ? 0.33 : cfg.output_noises.front();
    std::vector<Cell> cells;
    for (const auto& [n1, n2] : cfg.sizes) {
        for (double rho : cfg.densities) {
            for (double frac : cfg.nkp_noises) {
                cells.push_back({n1, n2, rho, sigma, frac});
            }
        }
    }
    SuiteResult result{run_cells(cfg, cells, false), {}};

    // Residual table recomputed per repetition outside the timed path.
    for (const Cell& cell : cells) {
        if (cell.frac <= 0.0) continue;
        for (int rep = 0; rep < cfg.reps; ++rep) {
            const std::uint64_t stream =
                cell_stream(cfg.graph, cell.n1, cell.n2, cell.rho, cell.rho, rep);
            RngStream rng(cfg.base_seed, stream);
            DatasetParams params;
            params.family = cfg.graph;
            params.n1 = cell.n1;
            params.n2 = cell.n2;
            params.rho1 = cell.rho;
            params.rho2 = cell.rho;
            params.ws_rewire = cfg.ws_rewire;
            params.violation_frac = cell.frac;
            params.materialize_product = true;
            params.dense_cap = cfg.dense_cap;
            try {
                const Dataset data = gen_dataset(params, rng);
                RngStream nkp_rng = rng.substream(kNkpStartTag);
                const KronFactors factors =
                    nearest_kron(data.s->entries(), cell.n1, cell.n2, nkp_rng);
                const auto sparse = sparsify_factors(factors, cell.rho, cell.rho);
                const double after = kron_residual_fro(
                    data.s->entries(), sparse.first.entries(), sparse.second.entries());
                result.nkp_residuals.push_back({cfg.graph, cell.n1, cell.n2, cell.rho, cell.rho,
                                                cell.frac, rep, factors.residual_fro, after});
            } catch (const std::exception&) {
                // The corresponding run records already carry the failure.
            }
        }
    }
    return result;
}

SuiteResult run_suite(const SuiteConfig& cfg) {
    switch (cfg.suite) {
        case Suite::Fitness: return run_fitness(cfg);
        case Suite::Robustness: return run_robustness(cfg);
        case Suite::Timing: return run_timing(cfg);
        case Suite::Nkp: return run_nkp(cfg);
    }
    throw KronGcrfError("unknown suite");
}

std::string to_string(Suite s) {
    switch (s) {
        case Suite::Fitness: return "fitness";
        case Suite::Robustness: return "robustness";
        case Suite::Timing: return "timing";
        case Suite::Nkp: return "nkp";
    }
    return "?";
}

std::string to_string(Model m) {
    switch (m) {
        case Model::Base: return "base";
        case Model::BaseSvd: return "base_svd";
        case Model::LaplaceVec: return "laplace_vec";
        case Model::NormLaplaceVec: return "norm_laplace_vec";
        case Model::Msn: return "msn";
    }
    return "?";
}

Suite suite_from_string(const std::string& s) {
    if (s == "fitness") return Suite::Fitness;
    if (s == "robustness") return Suite::Robustness;
    if (s == "timing") return Suite::Timing;
    if (s == "nkp") return Suite::Nkp;
    throw KronGcrfError("unknown suite: " + s);
}

Model model_from_string(const std::string& s) {
    if (s == "base") return Model::Base;
    if (s == "base_svd" || s == "baseSVD") return Model::BaseSvd;
    if (s == "laplace_vec") return Model::LaplaceVec;
    if (s == "norm_laplace_vec") return Model::NormLaplaceVec;
    if (s == "msn") return Model::Msn;
    throw KronGcrfError("unknown model: " + s);
}

std::vector<CellSummary> summarize(const std::vector<RunRecord>& records) {
    using Key = std::tuple<int, int, Index, Index, double, double, double, double, int>;
    std::map<Key, std::vector<const RunRecord*>> cells;
    for (const auto& r : records) {
        cells[{static_cast<int>(r.suite), static_cast<int>(r.graph), r.n1, r.n2, r.rho1, r.rho2,
               r.sigma, r.nkp_noise, static_cast<int>(r.model)}]
            .push_back(&r);
    }
    std::vector<CellSummary> out;
    for (const auto& [key, rs] : cells) {
        CellSummary c{static_cast<Suite>(std::get<0>(key)),
                      static_cast<GraphFamily>(std::get<1>(key)),
                      std::get<2>(key),
                      std::get<3>(key),
                      std::get<4>(key),
                      std::get<5>(key),
                      std::get<6>(key),
                      std::get<7>(key),
                      static_cast<Model>(std::get<8>(key))};
        c.reps_total = static_cast<int>(rs.size());
        std::vector<double> mses;
        double runtime = 0.0;
        double iters = 0.0;
        int ok = 0;
        for (const auto* r : rs) {
            if (r->failed()) continue;
            mses.push_back(r->mse);
            runtime += r->runtime_s;
            iters += r->iterations;
            ++ok;
        }
        if (ok > 0) {
            c.mean_runtime_s = runtime / ok;
            c.mean_iterations = iters / ok;
        }
        try {
            const Aggregate agg = aggregate(mses);
            c.reps_used = agg.used;
            c.trimmed_mse = agg.trimmed_mean;
            c.ci_low = agg.ci_low;
            c.ci_high = agg.ci_high;
        } catch (const TooFewRecords&) {
            c.reps_used = 0;
            c.trimmed_mse = std::numeric_limits<double>::quiet_NaN();
            c.ci_low = c.ci_high = c.trimmed_mse;
        }
        out.push_back(c);
    }
    return out;
}

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

void write_runs_csv(const std::string& path, const std::vector<RunRecord>& records) {
    std::ofstream out(path);
    if (!out) {
        throw KronGcrfError("cannot open " + path + " for writing");
    }
    out << "suite,graph_type,n1,n2,rho1,rho2,sigma,nkp_noise,model,rep,seed,mse,runtime_s,"
           "iterations\n";
    for (const auto& r : records) {
        out << to_string(r.suite) << ',' << to_string(r.graph) << ',' << r.n1 << ',' << r.n2
            << ',' << fmt(r.rho1) << ',' << fmt(r.rho2) << ',' << fmt(r.sigma) << ','
            << fmt(r.nkp_noise) << ',' << to_string(r.model) << ',' << r.rep << ',' << r.seed
            << ',' << fmt(r.mse) << ',' << fmt(r.runtime_s) << ',' << r.iterations << '\n';
    }
}

std::vector<RunRecord> read_runs_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw KronGcrfError("cannot open " + path);
    }
    std::vector<RunRecord> records;
    std::string line;
    std::getline(in, line); // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cols;
        while (std::getline(ss, cell, ',')) cols.push_back(cell);
        if (cols.size() != 14) {
            throw KronGcrfError("bad runs.csv row: " + line);
        }
        RunRecord r;
        r.suite = suite_from_string(cols[0]);
        r.graph = graph_family_from_string(cols[1]);
        r.n1 = std::stol(cols[2]);
        r.n2 = std::stol(cols[3]);
        r.rho1 = std::stod(cols[4]);
        r.rho2 = std::stod(cols[5]);
        r.sigma = std::stod(cols[6]);
        r.nkp_noise = std::stod(cols[7]);
        r.model = model_from_string(cols[8]);
        r.rep = std::stoi(cols[9]);
        r.seed = std::stoull(cols[10]);
        r.mse = std::stod(cols[11]);
        r.runtime_s = std::stod(cols[12]);
        r.iterations = std::stoi(cols[13]);
        records.push_back(r);
    }
    return records;
}

void write_summary_csv(const std::string& path, const std::vector<CellSummary>& cells) {
    std::ofstream out(path);
    if (!out) {
        throw KronGcrfError("cannot open " + path + " for writing");
    }
    out << "suite,graph_type,n1,n2,rho1,rho2,sigma,nkp_noise,model,reps,used,trimmed_mse,"
           "ci_low,ci_high,mean_runtime_s,mean_iterations\n";
    for (const auto& c : cells) {
        out << to_string(c.suite) << ',' << to_string(c.graph) << ',' << c.n1 << ',' << c.n2
            << ',' << fmt(c.rho1) << ',' << fmt(c.rho2) << ',' << fmt(c.sigma) << ','
            << fmt(c.nkp_noise) << ',' << to_string(c.model) << ',' << c.reps_total << ','
            << c.reps_used << ',' << fmt(c.trimmed_mse) << ',' << fmt(c.ci_low) << ','
            << fmt(c.ci_high) << ',' << fmt(c.mean_runtime_s) << ',' << fmt(c.mean_iterations)
            << '\n';
    }
}

void write_nkp_residuals_csv(const std::string& path,
                             const std::vector<NkpResidualRecord>& rows) {
    std::ofstream out(path);
    if (!out) {
        throw KronGcrfError("cannot open " + path + " for writing");
    }
    out << "graph_type,n1,n2,rho1,rho2,frac,rep,residual_before,residual_after\n";
    for (const auto& r : rows) {
        out << to_string(r.graph) << ',' << r.n1 << ',' << r.n2 << ',' << fmt(r.rho1) << ','
            << fmt(r.rho2) << ',' << fmt(r.frac) << ',' << r.rep << ','
            << fmt(r.residual_before) << ',' << fmt(r.residual_after) << '\n';
    }
}

void write_plotdata(const std::string& dir, const std::vector<CellSummary>& cells) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    // Key: (suite, graph, size, model [, rho when rho is not the x-axis]).
    std::map<std::string, std::vector<std::pair<double, double>>> series;
    for (const auto& c : cells) {
        std::ostringstream name;
        name << to_string(c.suite) << '_' << to_string(c.graph) << '_' << c.n1 << 'x' << c.n2;
        double x = 0.0;
        switch (c.suite) {
            case Suite::Fitness: x = c.rho1; break;
            case Suite::Robustness:
                name << "_rho" << c.rho1;
                x = c.sigma;
                break;
            case Suite::Nkp:
                name << "_rho" << c.rho1;
                x = c.nkp_noise;
                break;
            case Suite::Timing: x = static_cast<double>(c.n1 * c.n2); break;
        }
        name << '_' << to_string(c.model);
        series[name.str()].emplace_back(x, c.trimmed_mse);
    }
    for (auto& [name, points] : series) {
        std::sort(points.begin(), points.end());
        std::ofstream out(dir + "/" + name + ".csv");
        out << "x,trimmed_mse\n";
        for (const auto& [x, y] : points) {
            out << fmt(x) << ',' << fmt(y) << '\n';
        }
    }
}

} // namespace krongcrf
