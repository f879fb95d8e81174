#include "krongcrf/synthdata.hpp"
#include "krongcrf/csv.hpp"
#include "krongcrf/gcrf.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>

using namespace krongcrf;

TEST_CASE("gen_outputs") {
    RngStream rng(90, 0);

    SUBCASE("zero noise gives the exact product") {
        auto [y1, y2, y] = gen_outputs(4, 6, 0.0, rng);
        for (Index i = 0; i < 4; ++i)
            for (Index j = 0; j < 6; ++j)
                CHECK(y[i * 6 + j] == doctest::Approx(y1[i] * y2[j]));
    }
    SUBCASE("noise variance is near sigma^2 over many entries") {
        auto [y1, y2, y] = gen_outputs(100, 100, 0.33, rng);
        Vector clean(10000);
        for (Index i = 0; i < 100; ++i)
            for (Index j = 0; j < 100; ++j) clean[i * 100 + j] = y1[i] * y2[j];
        const Vector noise = y - clean;
        const double var = noise.squaredNorm() / 10000.0 - std::pow(noise.mean(), 2);
        CHECK(var == doctest::Approx(0.33 * 0.33).epsilon(0.10));
    }
}

TEST_CASE("dataset construction identity at the generating parameters") {
    DatasetParams params;
    params.n1 = 4;
    params.n2 = 6;
    params.rho1 = params.rho2 = 0.4;
    const Dataset d = gen_dataset(params, RngStream(91, 0));

    const auto basis = exact_kron_basis(d.s1, d.s2);
    const Vector yhat = predict(*basis, params.alpha, params.beta, d.r_train);
    CHECK((yhat - d.y_train).cwiseAbs().maxCoeff() < 1e-8);
    const Vector yhat_test = predict(*basis, params.alpha, params.beta, d.r_test);
    CHECK((yhat_test - d.y_test).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("beta = 0 in the generator makes R equal the outputs") {
    DatasetParams params;
    params.n1 = 3;
    params.n2 = 5;
    params.rho1 = params.rho2 = 0.5;
    params.beta = 0.0;
    const Dataset d = gen_dataset(params, RngStream(92, 0));
    CHECK((d.r_train - d.y_train).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("factored and dense Laplacian applications agree") {
    DatasetParams params;
    params.n1 = 4;
    params.n2 = 5;
    params.rho1 = params.rho2 = 0.5;
    params.materialize_product = true;
    const Dataset dense = gen_dataset(params, RngStream(93, 0));
    params.materialize_product = false;
    const Dataset factored = gen_dataset(params, RngStream(93, 0));

    CHECK((dense.y_train - factored.y_train).cwiseAbs().maxCoeff() == 0.0);
    CHECK((dense.r_train - factored.r_train).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("dataset invariants and edge densities for the ER setting") {
    DatasetParams params;
    params.n1 = 30;
    params.n2 = 50;
    params.rho1 = params.rho2 = 0.1;
    const Dataset d = gen_dataset(params, RngStream(94, 0));
    CHECK(edge_density(d.s1) == doctest::Approx(43.0 / 435.0));
    CHECK(edge_density(d.s2) == doctest::Approx(122.0 / 1225.0));
    CHECK(d.y_train.size() == 1500);
    CHECK(d.r_test.size() == 1500);
}

TEST_CASE("determinism: identical streams give identical datasets") {
    DatasetParams params;
    params.n1 = 5;
    params.n2 = 7;
    params.rho1 = params.rho2 = 0.4;
    const Dataset a = gen_dataset(params, RngStream(95, 3));
    const Dataset b = gen_dataset(params, RngStream(95, 3));
    CHECK((a.s1.entries() - b.s1.entries()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.y_train - b.y_train).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.r_test - b.r_test).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("violate_kron") {
    DatasetParams params;
    params.n1 = 6;
    params.n2 = 8;
    params.rho1 = params.rho2 = 0.3;
    params.materialize_product = true;
    const Dataset d = gen_dataset(params, RngStream(96, 0));
    const SimilarityMatrix& s = *d.s;

    Index edges = 0;
    for (Index i = 0; i < s.size(); ++i)
        for (Index j = 0; j < i; ++j)
            if (s(i, j) > 0.0) ++edges;

    SUBCASE("zero fraction returns the input unchanged") {
        RngStream rng(96, 1);
        const SimilarityMatrix out = violate_kron(s, d.y1_attr, d.y2_attr, 0.0, rng);
        CHECK((out.entries() - s.entries()).cwiseAbs().maxCoeff() == 0.0);
    }

    SUBCASE("added entries follow the decoded-index kernel and the exact count") {
        RngStream rng(96, 2);
        const double frac = 0.2;
        const SimilarityMatrix out = violate_kron(s, d.y1_attr, d.y2_attr, frac, rng);

        Index added = 0;
        for (Index i = 0; i < s.size(); ++i) {
            for (Index j = 0; j < i; ++j) {
                if (s(i, j) > 0.0) {
                    CHECK(out(i, j) == s(i, j)); // existing entries untouched
                } else if (out(i, j) > 0.0) {
                    ++added;
                    const Index i1 = i / 8, j1 = i % 8;
                    const Index i2 = j / 8, j2 = j % 8;
                    const double expected = std::exp(-std::abs(d.y1_attr[i1] - d.y1_attr[i2])) *
                                            std::exp(-std::abs(d.y2_attr[j1] - d.y2_attr[j2]));
                    CHECK(out(i, j) == doctest::Approx(expected));
                }
            }
        }
        CHECK(added == static_cast<Index>(std::floor(frac * static_cast<double>(edges))));
    }

    SUBCASE("requesting more edges than zero positions fails") {
        RngStream rng(96, 3);
        CHECK_THROWS_AS(violate_kron(s, d.y1_attr, d.y2_attr, 1e6, rng), InsufficientZeros);
    }
}

TEST_CASE("kronecker zero pattern decodes through the factor supports") {
    DatasetParams params;
    params.n1 = 5;
    params.n2 = 6;
    params.rho1 = params.rho2 = 0.4;
    params.materialize_product = true;
    const Dataset d = gen_dataset(params, RngStream(97, 0));
    for (Index i = 0; i < d.order(); ++i) {
        for (Index j = 0; j < d.order(); ++j) {
            if (i == j) continue;
            const Index i1 = i / 6, j1 = i % 6;
            const Index i2 = j / 6, j2 = j % 6;
            const bool zero = (*d.s)(i, j) == 0.0;
            const bool factor_zero = d.s1(i1, i2) == 0.0 || d.s2(j1, j2) == 0.0;
            CHECK(zero == factor_zero);
        }
    }
}

TEST_CASE("save_dataset writes the directory layout") {
    DatasetParams params;
    params.n1 = 3;
    params.n2 = 4;
    params.rho1 = params.rho2 = 0.5;
    params.materialize_product = true;
    const Dataset d = gen_dataset(params, RngStream(98, 0));

    namespace fs = std::filesystem;
    const std::string dir = (fs::temp_directory_path() / "krongcrf_dataset_test").string();
    save_dataset(d, dir);
    for (const char* name : {"S1.csv", "S2.csv", "S.csv", "y_train.csv", "y_test.csv",
                             "R_train.csv", "R_test.csv", "meta.txt"}) {
        CHECK(fs::exists(dir + "/" + name));
    }
    const Matrix s1 = read_matrix_csv(dir + "/S1.csv");
    CHECK((s1 - d.s1.entries()).cwiseAbs().maxCoeff() == 0.0);
    fs::remove_all(dir);
}
