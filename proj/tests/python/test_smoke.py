import numpy as np
import pytest

import drazinkit as dk


def test_example4_index_and_solution():
    A, b, a = dk.example("ex4")
    assert a == 1
    assert dk.index_of(A) == 1
    x = dk.drazin_solution(A, b)
    # A^2 x = A b and x lies in range(A) = span(e1, e2, e3)
    assert np.allclose(A @ A @ x, A @ b, atol=1e-12)
    assert abs(x[3]) < 1e-13


def test_drazin_inverse_axioms_on_example1():
    A, _, a = dk.example("ex1")
    X = dk.drazin_inverse(A)
    Aa = np.linalg.matrix_power(A, a)
    assert np.allclose(Aa @ A @ X, Aa, atol=1e-10)
    assert np.allclose(X @ A @ X, X, atol=1e-10)
    assert np.allclose(A @ X, X @ A, atol=1e-10)
    assert X[6, 6] == pytest.approx(1 / 7)


def test_solvers_converge_to_oracle():
    A, b, a = dk.example("ex4")
    ref = dk.drazin_solution(A, b)
    for run in (dk.dgmres(A, b, index=a, m=2), dk.adgmres(A, b, index=a, m=2, k=1)):
        assert run["converged"]
        assert run["cycle"][0] == 0
        assert np.linalg.norm(run["x"] - ref) <= 1e-6 * np.linalg.norm(ref)


def test_adgmres_matches_dgmres_on_example4():
    A, b, a = dk.example("ex4")
    d = dk.dgmres(A, b, index=a, m=2, eps=1e-300, max_cycles=50)
    ad = dk.adgmres(A, b, index=a, m=2, k=1, eps=1e-300, max_cycles=50)
    assert np.allclose(d["seminorm"], ad["seminorm"], rtol=1e-10, atol=0)


def test_errors_are_mapped():
    A, b, a = dk.example("ex1")
    with pytest.raises(dk.ConfigError):
        dk.dgmres(A, b, index=a, m=2)
    with pytest.raises(dk.UsageError):
        dk.example("ex9")
    with pytest.raises(dk.DimensionError):
        dk.dgmres(A, b[:5], index=a, m=5)
