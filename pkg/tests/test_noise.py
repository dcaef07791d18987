import numpy as np
import pytest

from satkf.core.errors import InvalidVariance, NotPSD
from satkf.estimation.noise import (
    NoiseSpec,
    SeededRng,
    draw,
    gaussian,
    gaussian_vec,
    role_streams,
    run_rng,
)


def samples(rng, count, mean=0.0, variance=1.0):
    return np.array([gaussian(rng, mean, variance) for _ in range(count)])


def test_same_seed_same_sequence():
    a = samples(SeededRng(42), 50)
    b = samples(SeededRng(42), 50)
    assert np.array_equal(a, b)


def test_different_seeds_differ():
    assert not np.array_equal(samples(SeededRng(1), 20), samples(SeededRng(2), 20))


def test_seed_is_reduced_to_64_bits():
    assert SeededRng(2**64 + 5).seed == 5


def test_split_streams_are_independent_of_draw_order():
    parent = run_rng(7, 3)
    streams = role_streams(parent)
    first = samples(streams.measurement, 10)

    other = role_streams(run_rng(7, 3))
    samples(other.process, 1000)
    assert np.array_equal(samples(other.measurement, 10), first)


def test_runs_get_distinct_streams():
    a = samples(role_streams(run_rng(0, 0)).measurement, 20)
    b = samples(role_streams(run_rng(0, 1)).measurement, 20)
    assert not np.array_equal(a, b)


def test_uniform_range():
    rng = SeededRng(3)
    u = np.array([rng.uniform() for _ in range(1000)])
    assert np.all((u >= 0.0) & (u < 1.0))


def test_gaussian_moments():
    x = samples(SeededRng(11), 100_000, variance=0.1)
    assert abs(x.mean()) < 0.01
    assert x.var() == pytest.approx(0.1, abs=0.005)


def test_gaussian_zero_variance_returns_mean():
    rng = SeededRng(0)
    assert gaussian(rng, 1.25, 0.0) == 1.25


def test_gaussian_negative_variance():
    with pytest.raises(InvalidVariance):
        gaussian(SeededRng(0), 0.0, -1e-3)


def test_gaussian_vec_moments():
    rng = SeededRng(5)
    mean = np.array([1.0, -1.0, 0.0, 0.5])
    x = np.array([gaussian_vec(rng, mean, 0.1 * np.eye(4)) for _ in range(20_000)])

    assert np.allclose(x.mean(axis=0), mean, atol=0.01)
    assert np.allclose(x.var(axis=0), 0.1, atol=0.005)

    corr = np.corrcoef(x.T)
    off_diagonal = corr[~np.eye(4, dtype=bool)]
    assert np.max(np.abs(off_diagonal)) < 0.03


def test_gaussian_vec_semidefinite_covariance():
    rng = SeededRng(9)
    cov = np.diag([0.1, 0.0, 0.1, 0.0])
    x = np.array([gaussian_vec(rng, np.zeros(4), cov) for _ in range(100)])
    assert np.all(x[:, 1] == 0.0) and np.all(x[:, 3] == 0.0)


def test_gaussian_vec_rejects_indefinite_covariance():
    with pytest.raises(NotPSD):
        gaussian_vec(SeededRng(0), np.zeros(4), np.diag([1.0, -1.0, 1.0, 1.0]))


def test_draw_dispatches_on_covariance_rank():
    rng = SeededRng(0)
    assert isinstance(draw(rng, NoiseSpec(mean=0.0, covariance=0.5)), float)
    assert draw(rng, NoiseSpec(mean=np.zeros(4), covariance=np.eye(4))).shape == (4,)


def test_draw_reuses_spec_factor():
    cov = np.diag([1.0, 0.5, 0.0, 2.0])
    spec = NoiseSpec(mean=np.ones(4), covariance=cov)
    assert spec.factor is spec.factor
    assert np.array_equal(draw(SeededRng(3), spec), gaussian_vec(SeededRng(3), np.ones(4), cov))
