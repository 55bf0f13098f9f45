import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fasttwosample import core
from fasttwosample.errors import DomainError, SingularMatrixError


def test_splitmix_reference_values():
    # first outputs of the reference SplitMix64 generator seeded with 0
    state = 0
    expected = [0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]
    for want in expected:
        assert core.splitmix64(state) == want
        state = (state + 0x9E3779B97F4A7C15) & core.MASK64


def test_mix_is_deterministic_and_index_sensitive():
    assert core.mix(5, 1, 2) == core.mix(5, 1, 2)
    seen = {core.mix(5, i, j) for i in range(20) for j in range(20)}
    assert len(seen) == 400
    assert core.mix(5, 1, 2) != core.mix(5, 2, 1)
    assert 0 <= core.mix(2**64 - 1, -1) < 2**64


def test_rng_rejects_out_of_range_seed():
    with pytest.raises(DomainError):
        core.rng(-1)
    with pytest.raises(DomainError):
        core.rng(2**64)


def test_draw_frequencies_deterministic():
    a = core.draw_frequencies(3, 2, 11)
    b = core.draw_frequencies(3, 2, 11)
    assert a.shape == (3, 2)
    np.testing.assert_array_equal(a, b)


def test_draw_frequencies_moments():
    T = core.draw_frequencies(1000, 1, 123)
    assert abs(T.mean()) < 0.1
    assert abs(T.var() - 1) < 0.15


def test_draw_frequencies_seeds_differ():
    assert not np.array_equal(core.draw_frequencies(2, 3, 1), core.draw_frequencies(2, 3, 2))


def test_draw_frequencies_rows_distinct():
    T = core.draw_frequencies(50, 1, 9)
    assert len(np.unique(T, axis=0)) == 50


def test_draw_frequencies_domain():
    with pytest.raises(DomainError):
        core.draw_frequencies(0, 2, 1)


def test_scale_data():
    X = np.array([[2.0, 4.0]])
    np.testing.assert_array_equal(core.scale_data(X, 1.0), X)
    np.testing.assert_array_equal(core.scale_data(X, 2.0), [[1.0, 2.0]])
    with pytest.raises(DomainError):
        core.scale_data(X, 0.0)
    with pytest.raises(DomainError):
        core.scale_data(X, -1.0)


@given(st.floats(0.1, 10), st.floats(0.1, 10))
def test_scale_data_composes(a, b):
    X = np.array([[1.5, -3.0], [0.25, 7.0]])
    np.testing.assert_allclose(core.scale_data(core.scale_data(X, a), b), core.scale_data(X, a * b), rtol=4e-16)


def test_as_samples():
    assert core.as_samples([1.0, 2.0, 3.0]).shape == (3, 1)
    with pytest.raises(DomainError):
        core.as_samples([[np.nan, 1.0]])
    with pytest.raises(DomainError):
        core.as_samples(np.zeros((0, 2)))


def test_solve_spd_examples():
    np.testing.assert_allclose(core.solve_spd(np.eye(3), np.array([1.0, 2, 3])), [1, 2, 3])
    np.testing.assert_allclose(core.solve_spd(np.diag([2.0, 4.0]), np.array([2.0, 4.0])), [1, 1])
    M = np.ones((2, 2))
    w = core.solve_spd(M, np.ones(2), 1e-6)
    assert np.linalg.norm((M + 1e-6 * np.eye(2)) @ w - np.ones(2)) <= 1e-8


def test_solve_spd_residual_on_random_spd():
    gen = np.random.default_rng(0)
    for _ in range(1000):
        p = gen.integers(1, 21)
        A = gen.standard_normal((p, p))
        M = A @ A.T + 0.1 * np.eye(p)
        v = gen.standard_normal(p)
        w = core.solve_spd(M, v)
        assert np.linalg.norm(M @ w - v) <= 1e-8 * np.linalg.norm(M, 2) * np.linalg.norm(w)


def test_solve_spd_escalates_ridge_for_semidefinite():
    u = np.array([1.0, 2.0, 3.0])
    M = np.outer(u, u)  # rank one
    v = np.array([1.0, -1.0, 0.5])
    w = core.solve_spd(M, v)
    assert np.all(np.isfinite(w))


def test_solve_spd_gives_up():
    M = np.zeros((2, 2))
    with pytest.raises(SingularMatrixError) as info:
        core.solve_spd(M, np.ones(2))
    assert info.value.ridge >= 0
    M = np.diag([1.0, -1.0])
    with pytest.raises(SingularMatrixError):
        core.solve_spd(M, np.ones(2))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**64 - 1))
def test_same_seed_same_stream(seed):
    np.testing.assert_array_equal(core.rng(seed).standard_normal(5), core.rng(seed).standard_normal(5))
