#include "krongcrf/synthdata.hpp"

#include "krongcrf/csv.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

namespace krongcrf {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Sub-stream tags for the independent draws inside one dataset.
enum StreamTag : std::uint64_t {
    kTopology1 = 1,
    kTopology2 = 2,
    kSignal1 = 3,
    kSignal2 = 4,
    kOutputNoiseTrain = 5,
    kOutputNoiseTest = 6,
    kAttrNoise1 = 7,
    kAttrNoise2 = 8,
    kViolation = 9,
};

Vector draw_normal(Index n, double stddev, RngStream rng) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) {
        v[i] = rng.normal(0.0, stddev);
    }
    return v;
}

GraphTopology gen_topology(GraphFamily family, Index n, double rho, double ws_rewire,
                           RngStream rng) {
    switch (family) {
        case GraphFamily::ErdosRenyi: return gen_erdos_renyi(n, rho, rng);
        case GraphFamily::BarabasiAlbert: return gen_barabasi_albert(n, rho, rng);
        case GraphFamily::WattsStrogatz: return gen_watts_strogatz(n, rho, ws_rewire, rng);
    }
    throw KronGcrfError("unknown graph family");
}

Vector kron_vec(const Vector& a, const Vector& b) {
    Vector out(a.size() * b.size());
    for (Index i = 0; i < a.size(); ++i) {
        out.segment(i * b.size(), b.size()) = a[i] * b;
    }
    return out;
}

} // namespace

std::string to_string(GraphFamily f) {
    switch (f) {
        case GraphFamily::ErdosRenyi: return "er";
        case GraphFamily::BarabasiAlbert: return "ba";
        case GraphFamily::WattsStrogatz: return "ws";
    }
    return "?";
}

GraphFamily graph_family_from_string(const std::string& s) {
    if (s == "er") return GraphFamily::ErdosRenyi;
    if (s == "ba") return GraphFamily::BarabasiAlbert;
    if (s == "ws") return GraphFamily::WattsStrogatz;
    throw KronGcrfError("unknown graph family: " + s);
}

std::tuple<Vector, Vector, Vector> gen_outputs(Index n1, Index n2, double sigma1,
                                               RngStream& rng) {
    if (n1 < 2 || n2 < 2 || sigma1 < 0.0) {
        throw InvalidMatrix("gen_outputs needs n1, n2 >= 2 and sigma1 >= 0");
    }
    Vector y1(n1), y2(n2);
    for (Index i = 0; i < n1; ++i) y1[i] = rng.normal();
    for (Index j = 0; j < n2; ++j) y2[j] = rng.normal();
    Vector y = kron_vec(y1, y2);
    if (sigma1 > 0.0) {
        for (Index k = 0; k < y.size(); ++k) y[k] += rng.normal(0.0, sigma1);
    }
    return {y1, y2, y};
}

Vector apply_product_laplacian(const Dataset& d, const Vector& y) {
    if (y.size() != d.order()) {
        throw DimensionMismatch("apply_product_laplacian: length mismatch");
    }
    if (d.s) {
        Vector deg = d.s->degrees();
        return deg.cwiseProduct(y) - d.s->entries() * y;
    }
    const Index n1 = d.meta.n1;
    const Index n2 = d.meta.n2;
    // (S1 (x) S2) y via the reshaped product S1 * Y * S2 (factors symmetric).
    Eigen::Map<const RowMat> grid(y.data(), n1, n2);
    RowMat sy = d.s1.entries() * grid * d.s2.entries();
    const Vector deg = kron_vec(d.s1.degrees(), d.s2.degrees());
    return deg.cwiseProduct(y) - Eigen::Map<const Vector>(sy.data(), sy.size());
}

SimilarityMatrix violate_kron(const SimilarityMatrix& s, const Vector& y1_attr,
                              const Vector& y2_attr, double frac, RngStream& rng) {
    if (frac < 0.0) {
        throw InvalidMatrix("violate_kron: negative fraction");
    }
    const Index n2 = y2_attr.size();
    const Index n = s.size();
    if (y1_attr.size() * n2 != n) {
        throw DimensionMismatch("violate_kron: attribute lengths do not factor the order");
    }
    Matrix entries = s.entries();

    Index edge_count = 0;
    std::vector<std::pair<Index, Index>> zeros;
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < i; ++j) {
            if (entries(i, j) > 1e-12) {
                ++edge_count;
            } else {
                zeros.emplace_back(j, i);
            }
        }
    }
    const auto add = static_cast<Index>(std::floor(frac * static_cast<double>(edge_count)));
    if (add == 0) {
        return s;
    }
    if (add > static_cast<Index>(zeros.size())) {
        throw InsufficientZeros("violate_kron: requested " + std::to_string(add) +
                                " new edges but only " + std::to_string(zeros.size()) +
                                " zero positions remain");
    }
    for (Index k = 0; k < add; ++k) {
        const auto pick =
            k + static_cast<Index>(rng.below(static_cast<std::uint64_t>(zeros.size()) - k));
        std::swap(zeros[static_cast<std::size_t>(k)], zeros[static_cast<std::size_t>(pick)]);
        const auto [i, j] = zeros[static_cast<std::size_t>(k)];
        const Index i1 = i / n2, j1 = i % n2;
        const Index i2 = j / n2, j2 = j % n2;
        const double w = std::exp(-std::abs(y1_attr[i1] - y1_attr[i2])) *
                         std::exp(-std::abs(y2_attr[j1] - y2_attr[j2]));
        entries(i, j) = w;
        entries(j, i) = w;
    }
    return SimilarityMatrix(std::move(entries));
}

Dataset gen_dataset(const DatasetParams& params, const RngStream& rng) {
    const GraphTopology g = gen_topology(params.family, params.n1, params.rho1,
                                         params.ws_rewire, rng.substream(kTopology1));
    const GraphTopology h = gen_topology(params.family, params.n2, params.rho2,
                                         params.ws_rewire, rng.substream(kTopology2));

    RngStream sig1 = rng.substream(kSignal1);
    RngStream sig2 = rng.substream(kSignal2);
    Vector y1(params.n1), y2(params.n2);
    for (Index i = 0; i < params.n1; ++i) y1[i] = sig1.normal();
    for (Index j = 0; j < params.n2; ++j) y2[j] = sig2.normal();

    const Vector y1_attr =
        y1 + draw_normal(params.n1, params.sigma_attr, rng.substream(kAttrNoise1));
    const Vector y2_attr =
        y2 + draw_normal(params.n2, params.sigma_attr, rng.substream(kAttrNoise2));

    Dataset d{assign_weights(g, y1_attr), assign_weights(h, y2_attr), std::nullopt,
              y1,  y2,  y1_attr, y2_attr, {}, {}, {}, {}, params,
              rng.seed(), rng.stream()};

    const Vector signal = kron_vec(y1, y2);
    d.y_train = signal + draw_normal(d.order(), params.sigma_output,
                                     rng.substream(kOutputNoiseTrain));
    d.y_test = signal + draw_normal(d.order(), params.sigma_output,
                                    rng.substream(kOutputNoiseTest));

    if (params.materialize_product || params.violation_frac > 0.0) {
        SimilarityMatrix s = kronecker(d.s1, d.s2, params.dense_cap);
        if (params.violation_frac > 0.0) {
            RngStream vrng = rng.substream(kViolation);
            s = violate_kron(s, y1_attr, y2_attr, params.violation_frac, vrng);
        }
        d.s.emplace(std::move(s));
    }

    // R = (alpha I + beta L) Y / alpha, so the GCRF mean at the generating
    // parameters returns Y exactly.
    const double ratio = params.beta / params.alpha;
    d.r_train = d.y_train + ratio * apply_product_laplacian(d, d.y_train);
    d.r_test = d.y_test + ratio * apply_product_laplacian(d, d.y_test);
    return d;
}

void save_dataset(const Dataset& d, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    write_matrix_csv(dir + "/S1.csv", d.s1.entries());
    write_matrix_csv(dir + "/S2.csv", d.s2.entries());
    if (d.s) {
        write_matrix_csv(dir + "/S.csv", d.s->entries());
    }
    write_vector_csv(dir + "/y_train.csv", d.y_train);
    write_vector_csv(dir + "/y_test.csv", d.y_test);
    write_vector_csv(dir + "/R_train.csv", d.r_train);
    write_vector_csv(dir + "/R_test.csv", d.r_test);

    std::ofstream meta(dir + "/meta.txt");
    meta << "graph_type=" << to_string(d.meta.family) << '\n'
         << "n1=" << d.meta.n1 << '\n'
         << "n2=" << d.meta.n2 << '\n'
         << "rho1=" << d.meta.rho1 << '\n'
         << "rho2=" << d.meta.rho2 << '\n'
         << "sigma_output=" << d.meta.sigma_output << '\n'
         << "sigma_attr=" << d.meta.sigma_attr << '\n'
         << "alpha=" << d.meta.alpha << '\n'
         << "beta=" << d.meta.beta << '\n'
         << "ws_rewire=" << d.meta.ws_rewire << '\n'
         << "violation_frac=" << d.meta.violation_frac << '\n'
         << "seed=" << d.seed << '\n'
         << "stream=" << d.stream << '\n';
}

} // namespace krongcrf
