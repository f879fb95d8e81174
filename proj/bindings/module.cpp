#include "krongcrf/bench.hpp"
#include "krongcrf/csv.hpp"
#include "krongcrf/gcrf.hpp"
#include "krongcrf/nkp.hpp"
#include "krongcrf/randnet.hpp"
#include "krongcrf/spectral.hpp"
#include "krongcrf/synthdata.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace krongcrf;

PYBIND11_MODULE(_krongcrf, m) {
    m.doc() = "GCRF structured regression on Kronecker-product networks";

    py::register_exception<DimensionMismatch>(m, "DimensionMismatchError");
    py::register_exception<IsolatedVertex>(m, "IsolatedVertexError");
    py::register_exception<SizeOverflow>(m, "SizeOverflowError");
    py::register_exception<DegreeOutOfRange>(m, "DegreeOutOfRangeError");
    py::register_exception<NoConvergence>(m, "NoConvergenceError");
    py::register_exception<NonPositiveParam>(m, "NonPositiveParamError");
    py::register_exception<BadFactorization>(m, "BadFactorizationError");
    py::register_exception<AsymmetricFactor>(m, "AsymmetricFactorError");
    py::register_exception<InsufficientZeros>(m, "InsufficientZerosError");
    py::register_exception<TooFewRecords>(m, "TooFewRecordsError");
    py::register_exception<InvalidMatrix>(m, "InvalidMatrixError");

    py::class_<SimilarityMatrix>(m, "SimilarityMatrix")
        .def(py::init<Matrix>(), py::arg("entries"))
        .def_property_readonly("n", &SimilarityMatrix::size)
        .def_property_readonly("entries",
                               [](const SimilarityMatrix& s) { return s.entries(); })
        .def("degrees", &SimilarityMatrix::degrees)
        .def_static("zero", &SimilarityMatrix::zero, py::arg("n"));

    m.def("laplacian", &laplacian, py::arg("s"));
    m.def("normalized_laplacian", &normalized_laplacian, py::arg("s"));
    m.def(
        "kronecker",
        [](const Matrix& a, const Matrix& b, Index cap) { return kronecker(a, b, cap); },
        py::arg("a"), py::arg("b"), py::arg("dense_cap") = kDefaultDenseCap);
    m.def("edge_density", &edge_density, py::arg("s"), py::arg("zero_tol") = 1e-12);

    py::class_<RngStream>(m, "RngStream")
        .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("seed"), py::arg("stream") = 0)
        .def("normal", &RngStream::normal, py::arg("mean") = 0.0, py::arg("stddev") = 1.0)
        .def("uniform", &RngStream::uniform)
        .def("substream", &RngStream::substream, py::arg("tag"));

    py::class_<GraphTopology>(m, "GraphTopology")
        .def_readonly("n", &GraphTopology::n)
        .def_readonly("edges", &GraphTopology::edges)
        .def("edge_count", &GraphTopology::edge_count);

    m.def("gen_erdos_renyi", &gen_erdos_renyi, py::arg("n"), py::arg("rho"), py::arg("rng"));
    m.def("gen_watts_strogatz", &gen_watts_strogatz, py::arg("n"), py::arg("rho"),
          py::arg("p_rewire"), py::arg("rng"));
    m.def("gen_barabasi_albert", &gen_barabasi_albert, py::arg("n"), py::arg("rho"),
          py::arg("rng"));
    m.def("assign_weights", &assign_weights, py::arg("g"), py::arg("y_noisy"));

    m.def("sym_eig", [](const Matrix& mat) {
        EigenSystem sys = sym_eig(mat);
        return py::make_tuple(sys.values, sys.vectors);
    });

    py::enum_<BasisKind>(m, "BasisKind")
        .value("ExactDense", BasisKind::ExactDense)
        .value("LaplaceVec", BasisKind::LaplaceVec)
        .value("NormLaplaceVec", BasisKind::NormLaplaceVec)
        .value("Msn", BasisKind::Msn);

    py::enum_<PairingMode>(m, "PairingMode")
        .value("Sorted", PairingMode::Sorted)
        .value("VertexOrder", PairingMode::VertexOrder);

    py::class_<SpectralBasis, std::shared_ptr<SpectralBasis>>(m, "SpectralBasis")
        .def_property_readonly("kind", &SpectralBasis::kind)
        .def_property_readonly("n", &SpectralBasis::size)
        .def_property_readonly("eigenvalues",
                               [](const SpectralBasis& b) { return b.eigenvalues(); })
        .def("project", &SpectralBasis::project_vec, py::arg("x"))
        .def("back_project", &SpectralBasis::back_project_vec, py::arg("z"));

    auto mutable_basis = [](BasisPtr b) {
        return std::const_pointer_cast<SpectralBasis>(b);
    };
    m.def(
        "exact_kron_basis",
        [mutable_basis](const SimilarityMatrix& s1, const SimilarityMatrix& s2) {
            return mutable_basis(exact_kron_basis(s1, s2));
        },
        py::arg("s1"), py::arg("s2"));
    m.def(
        "exact_basis_from_similarity",
        [mutable_basis](const SimilarityMatrix& s) {
            return mutable_basis(exact_basis_from_similarity(s));
        },
        py::arg("s"));
    m.def(
        "approx_laplace_vec",
        [mutable_basis](const SimilarityMatrix& s1, const SimilarityMatrix& s2,
                        PairingMode pairing) {
            return mutable_basis(approx_laplace_vec(s1, s2, pairing));
        },
        py::arg("s1"), py::arg("s2"), py::arg("pairing") = PairingMode::Sorted);
    m.def(
        "approx_norm_laplace_vec",
        [mutable_basis](const SimilarityMatrix& s1, const SimilarityMatrix& s2,
                        PairingMode pairing) {
            return mutable_basis(approx_norm_laplace_vec(s1, s2, pairing));
        },
        py::arg("s1"), py::arg("s2"), py::arg("pairing") = PairingMode::Sorted);
    m.def(
        "approx_msn",
        [mutable_basis](const SimilarityMatrix& s1, const SimilarityMatrix& s2) {
            return mutable_basis(approx_msn(s1, s2));
        },
        py::arg("s1"), py::arg("s2"));

    py::class_<GcrfProblem>(m, "GcrfProblem")
        .def_readonly("c", &GcrfProblem::c)
        .def_readonly("r", &GcrfProblem::r)
        .def_property_readonly("mu_hat", &GcrfProblem::mu_hat);

    py::class_<FitOptions>(m, "FitOptions")
        .def(py::init<>())
        .def_readwrite("tol", &FitOptions::tol)
        .def_readwrite("max_iter", &FitOptions::max_iter)
        .def_readwrite("init_step", &FitOptions::init_step)
        .def_readwrite("init_alpha", &FitOptions::init_alpha)
        .def_readwrite("init_beta", &FitOptions::init_beta);

    py::class_<FitResult>(m, "FitResult")
        .def_readonly("alpha", &FitResult::alpha)
        .def_readonly("beta", &FitResult::beta)
        .def_readonly("iterations", &FitResult::iterations)
        .def_readonly("final_loglik", &FitResult::final_loglik)
        .def_readonly("converged", &FitResult::converged)
        .def("__repr__", [](const FitResult& r) {
            return "FitResult(alpha=" + std::to_string(r.alpha) +
                   ", beta=" + std::to_string(r.beta) +
                   ", iterations=" + std::to_string(r.iterations) + ")";
        });

    m.def(
        "build_problem",
        [](const std::shared_ptr<SpectralBasis>& basis, const Vector& y, const Vector& r) {
            return build_problem(basis, y, r);
        },
        py::arg("basis"), py::arg("y"), py::arg("r"));
    m.def("log_likelihood", &log_likelihood, py::arg("problem"), py::arg("alpha"),
          py::arg("beta"));
    m.def("gradients", &gradients, py::arg("problem"), py::arg("alpha"), py::arg("beta"));
    m.def("fit", &fit, py::arg("problem"), py::arg("options") = FitOptions{});
    m.def(
        "predict",
        [](const std::shared_ptr<SpectralBasis>& basis, double alpha, double beta,
           const Vector& r) { return predict(*basis, alpha, beta, r); },
        py::arg("basis"), py::arg("alpha"), py::arg("beta"), py::arg("r"));
    m.def("mse", &mse, py::arg("yhat"), py::arg("y"));

    py::class_<KronFactors>(m, "KronFactors")
        .def_readonly("b", &KronFactors::b)
        .def_readonly("c", &KronFactors::c)
        .def_readonly("sigma1", &KronFactors::sigma1)
        .def_readonly("residual_fro", &KronFactors::residual_fro);

    m.def("vec_op", &vec_op, py::arg("m"));
    m.def("rearrange", &rearrange, py::arg("a"), py::arg("m1"), py::arg("n1"), py::arg("m2"),
          py::arg("n2"));
    m.def(
        "dominant_singular_triple",
        [](const Matrix& mat, RngStream& rng, double tol, int max_iter) {
            SingularTriple t = dominant_singular_triple(mat, rng, tol, max_iter);
            return py::make_tuple(t.sigma, t.u, t.v);
        },
        py::arg("m"), py::arg("rng"), py::arg("tol") = 1e-10, py::arg("max_iter") = 5000);
    m.def("nearest_kron", &nearest_kron, py::arg("a"), py::arg("n1"), py::arg("n2"),
          py::arg("rng"), py::arg("tol") = 1e-10, py::arg("max_iter") = 5000);
    m.def("kron_residual_fro", &kron_residual_fro, py::arg("a"), py::arg("b"), py::arg("c"));
    m.def("sparsify_factors", &sparsify_factors, py::arg("factors"), py::arg("rho1"),
          py::arg("rho2"));

    py::enum_<GraphFamily>(m, "GraphFamily")
        .value("ErdosRenyi", GraphFamily::ErdosRenyi)
        .value("BarabasiAlbert", GraphFamily::BarabasiAlbert)
        .value("WattsStrogatz", GraphFamily::WattsStrogatz);

    py::class_<DatasetParams>(m, "DatasetParams")
        .def(py::init<>())
        .def_readwrite("family", &DatasetParams::family)
        .def_readwrite("n1", &DatasetParams::n1)
        .def_readwrite("n2", &DatasetParams::n2)
        .def_readwrite("rho1", &DatasetParams::rho1)
        .def_readwrite("rho2", &DatasetParams::rho2)
        .def_readwrite("sigma_output", &DatasetParams::sigma_output)
        .def_readwrite("sigma_attr", &DatasetParams::sigma_attr)
        .def_readwrite("alpha", &DatasetParams::alpha)
        .def_readwrite("beta", &DatasetParams::beta)
        .def_readwrite("ws_rewire", &DatasetParams::ws_rewire)
        .def_readwrite("violation_frac", &DatasetParams::violation_frac)
        .def_readwrite("materialize_product", &DatasetParams::materialize_product);

    py::class_<Dataset>(m, "Dataset")
        .def_readonly("s1", &Dataset::s1)
        .def_readonly("s2", &Dataset::s2)
        .def_property_readonly("s",
                               [](const Dataset& d) -> py::object {
                                   if (!d.s) return py::none();
                                   return py::cast(*d.s);
                               })
        .def_readonly("y1", &Dataset::y1)
        .def_readonly("y2", &Dataset::y2)
        .def_readonly("y_train", &Dataset::y_train)
        .def_readonly("y_test", &Dataset::y_test)
        .def_readonly("r_train", &Dataset::r_train)
        .def_readonly("r_test", &Dataset::r_test);

    m.def("gen_outputs", &gen_outputs, py::arg("n1"), py::arg("n2"), py::arg("sigma1"),
          py::arg("rng"));
    m.def("gen_dataset", &gen_dataset, py::arg("params"), py::arg("rng"));
    m.def("violate_kron", &violate_kron, py::arg("s"), py::arg("y1_attr"), py::arg("y2_attr"),
          py::arg("frac"), py::arg("rng"));
    m.def("save_dataset", &save_dataset, py::arg("dataset"), py::arg("dir"));

    m.def("aggregate", [](std::vector<double> values) {
        const Aggregate a = aggregate(std::move(values));
        return py::make_tuple(a.trimmed_mean, a.ci_low, a.ci_high, a.used);
    });
    m.def("write_matrix_csv", &write_matrix_csv, py::arg("path"), py::arg("m"));
    m.def("read_matrix_csv", &read_matrix_csv, py::arg("path"));
}
