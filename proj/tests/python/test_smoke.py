import numpy as np
import pytest

import krongcrf as kg


def weighted_er(n, rho, seed, stream):
    rng = kg.RngStream(seed, stream)
    g = kg.gen_erdos_renyi(n, rho, rng)
    y = np.array([rng.normal() for _ in range(n)])
    return kg.assign_weights(g, y)


def test_graph_basics():
    s = kg.SimilarityMatrix(np.array([[0.0, 2.0], [2.0, 0.0]]))
    lap = kg.laplacian(s)
    assert np.allclose(lap, [[2.0, -2.0], [-2.0, 2.0]])
    assert np.allclose(lap.sum(axis=1), 0.0)
    assert kg.edge_density(s) == 1.0

    with pytest.raises(kg.InvalidMatrixError):
        kg.SimilarityMatrix(np.eye(2))


def test_generators_reproduce_published_edge_counts():
    rng = kg.RngStream(0, 0)
    assert kg.gen_erdos_renyi(50, 0.10, rng).edge_count() == 122
    assert kg.gen_barabasi_albert(100, 0.10, rng).edge_count() == 475
    assert kg.gen_watts_strogatz(100, 0.202, 0.1, rng).edge_count() == 1000


def test_spectral_approximations_are_exact_on_regular_factors():
    ring = np.zeros((6, 6))
    for i in range(6):
        ring[i, (i + 1) % 6] = ring[(i + 1) % 6, i] = 1.0
    c6 = kg.SimilarityMatrix(ring)

    exact = np.sort(kg.exact_kron_basis(c6, c6).eigenvalues)
    lv = np.sort(kg.approx_laplace_vec(c6, c6).eigenvalues)
    assert np.allclose(exact, lv, atol=1e-8)


def test_fit_and_predict_roundtrip():
    s1 = weighted_er(5, 0.6, 7, 0)
    s2 = weighted_er(8, 0.5, 7, 1)
    basis = kg.exact_kron_basis(s1, s2)

    params = kg.DatasetParams()
    params.n1, params.n2 = 5, 8
    params.rho1 = params.rho2 = 0.6
    data = kg.gen_dataset(params, kg.RngStream(7, 2))

    # Construction identity at the generating parameters.
    basis = kg.exact_kron_basis(data.s1, data.s2)
    yhat = kg.predict(basis, 1.0, 5.0, data.r_train)
    assert np.max(np.abs(yhat - data.y_train)) < 1e-8

    # beta = 0 returns the unstructured predictor.
    assert np.max(np.abs(kg.predict(basis, 1.0, 0.0, data.r_test) - data.r_test)) < 1e-10

    problem = kg.build_problem(basis, data.y_train, data.r_train)
    result = kg.fit(problem)
    assert result.alpha > 0 and result.beta > 0

    m = kg.mse(kg.predict(basis, result.alpha, result.beta, data.r_test), data.y_test)
    assert m < kg.mse(data.r_test, data.y_test)


def test_nearest_kron_recovery():
    s1 = weighted_er(5, 0.5, 9, 0)
    s2 = weighted_er(6, 0.5, 9, 1)
    a = kg.kronecker(s1.entries, s2.entries)
    f = kg.nearest_kron(a, 5, 6, kg.RngStream(9, 2))
    assert f.residual_fro < 1e-8 * np.linalg.norm(a)
    assert np.allclose(np.kron(f.b, f.c), a, atol=1e-8)


def test_aggregate_matches_numpy_percentiles():
    values = list(range(1, 101))
    mean, lo, hi, used = kg.aggregate([float(v) for v in values])
    kept = [v for v in values if np.percentile(values, 5) <= v <= np.percentile(values, 95)]
    assert used == len(kept)
    assert mean == pytest.approx(np.mean(kept))
    assert lo < mean < hi
