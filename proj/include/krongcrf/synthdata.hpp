#pragma once

#include "krongcrf/randnet.hpp"

#include <optional>
#include <string>
#include <tuple>

namespace krongcrf {

enum class GraphFamily { ErdosRenyi, BarabasiAlbert, WattsStrogatz };

std::string to_string(GraphFamily f);
GraphFamily graph_family_from_string(const std::string& s);

struct DatasetParams {
    GraphFamily family = GraphFamily::ErdosRenyi;
    Index n1 = 30;
    Index n2 = 50;
    double rho1 = 0.1;
    double rho2 = 0.1;
    double sigma_output = 0.33; // nu1: std of the noise baked into y_train/y_test
    double sigma_attr = 0.25;   // nu2: std of the attribute noise behind the weights
    double alpha = 1.0;         // generating GCRF parameters for R
    double beta = 5.0;
    double ws_rewire = 0.1;
    double violation_frac = 0.0; // off-pattern edges added as a fraction of |E(K)|
    bool materialize_product = false;
    Index dense_cap = kDefaultDenseCap;
};

/// One synthetic experiment instance. The unstructured predictor satisfies
/// (alpha I + beta L(S)) y = alpha R exactly, so predicting at the generating
/// parameters with the exact basis reproduces the outputs.
struct Dataset {
    SimilarityMatrix s1;
    SimilarityMatrix s2;
    std::optional<SimilarityMatrix> s; // product (possibly violated); absent in factored-only runs
    Vector y1, y2;                     // factor signals
    Vector y1_attr, y2_attr;           // noisy attributes the weights were built from
    Vector y_train, y_test;
    Vector r_train, r_test;
    DatasetParams meta;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;

    Index order() const { return meta.n1 * meta.n2; }
};

/// y1 ~ N(0,1)^n1, y2 ~ N(0,1)^n2, Y = y1 (x) y2 + nu with nu ~ N(0, sigma1^2).
std::tuple<Vector, Vector, Vector> gen_outputs(Index n1, Index n2, double sigma1,
                                               RngStream& rng);

Dataset gen_dataset(const DatasetParams& params, const RngStream& rng);

/// Adds floor(frac * |E(K)|) symmetric edges at uniformly chosen zero
/// off-diagonal positions of the product similarity matrix, each valued as
/// the product of the two factor kernels at its decoded indices. Throws
/// InsufficientZeros when not enough zero positions remain.
SimilarityMatrix violate_kron(const SimilarityMatrix& s, const Vector& y1_attr,
                              const Vector& y2_attr, double frac, RngStream& rng);

/// Writes S1/S2/S/y/R as CSV files plus meta.txt (key=value) into dir.
void save_dataset(const Dataset& d, const std::string& dir);

/// L(S) y without materializing S when the dataset is factored.
Vector apply_product_laplacian(const Dataset& d, const Vector& y);

} // namespace krongcrf
