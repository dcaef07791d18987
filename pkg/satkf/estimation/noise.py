"""
Seedable Gaussian noise for initial states, process noise and the two
measurement channels.

Uniform variates come from numpy's PCG64 bit generator seeded through a
``SeedSequence``. Independent streams are derived from one master seed by
spawn keys ``(run_index, role)``, so every run and every noise role has its
own generator and no state is shared between them. Normals use the polar
Box-Muller method.
"""

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numpy.typing import ArrayLike

from satkf.core.errors import InvalidVariance
from satkf.estimation.smallmat import DIM, Vector4, cholesky_psd, matrix4, vector4

MASK64 = (1 << 64) - 1

# Role tags mixed into the spawn key
ROLE_INIT = 1
ROLE_PROCESS = 2
ROLE_MEASUREMENT = 3


class SeededRng:
    """
    Single-owner Gaussian source. Identical (seed, spawn_key) pairs give
    identical sample sequences.
    """

    def __init__(self, seed: int, spawn_key: tuple[int, ...] = ()):
        self.seed = int(seed) & MASK64
        self.spawn_key = tuple(spawn_key)
        sequence = np.random.SeedSequence(self.seed, spawn_key=self.spawn_key)
        self._gen = np.random.Generator(np.random.PCG64(sequence))
        self._spare: float | None = None

    def split(self, *key: int) -> "SeededRng":
        """child generator for a sub-stream"""
        return SeededRng(self.seed, self.spawn_key + tuple(key))

    def uniform(self) -> float:
        return float(self._gen.random())

    def standard_normal(self) -> float:
        if self._spare is not None:
            z, self._spare = self._spare, None
            return z

        while True:
            u = 2.0 * self.uniform() - 1.0
            v = 2.0 * self.uniform() - 1.0
            s = u * u + v * v
            if 0.0 < s < 1.0:
                break

        factor = math.sqrt(-2.0 * math.log(s) / s)
        self._spare = v * factor
        return u * factor


@dataclass(frozen=True)
class NoiseSpec:
    mean: float | Vector4
    covariance: float | np.ndarray

    @cached_property
    def factor(self) -> np.ndarray:
        """Cholesky factor of a matrix covariance, computed once per spec"""
        return cholesky_psd(matrix4(self.covariance))


@dataclass
class RunStreams:
    init: SeededRng
    process: SeededRng
    measurement: SeededRng


def run_rng(seed: int, run_index: int) -> SeededRng:
    """master generator of one Monte Carlo run"""
    return SeededRng(seed).split(run_index)


def role_streams(rng: SeededRng) -> RunStreams:
    """the three independent streams hanging off a run generator"""
    return RunStreams(
        init=rng.split(ROLE_INIT),
        process=rng.split(ROLE_PROCESS),
        measurement=rng.split(ROLE_MEASUREMENT),
    )


def gaussian(rng: SeededRng, mean: float, variance: float) -> float:
    """one draw from N(mean, variance); variance 0 returns mean exactly"""
    if variance < 0:
        raise InvalidVariance(f"Variance {variance} is negative")
    if variance == 0:
        return float(mean)
    return float(mean) + math.sqrt(variance) * rng.standard_normal()


def gaussian_vec(rng: SeededRng, mean: ArrayLike, covariance: ArrayLike) -> Vector4:
    """mean + L z with L the (semidefinite-tolerant) Cholesky factor"""
    return _correlated(rng, vector4(mean), cholesky_psd(matrix4(covariance)))


def _correlated(rng: SeededRng, mean: Vector4, L: np.ndarray) -> Vector4:
    z = np.array([rng.standard_normal() for _ in range(DIM)])
    return mean + L @ z


def draw(rng: SeededRng, spec: NoiseSpec) -> float | Vector4:
    """draw according to a NoiseSpec, scalar or vector"""
    if np.ndim(spec.covariance) == 0:
        return gaussian(rng, float(spec.mean), float(spec.covariance))
    return _correlated(rng, np.asarray(spec.mean, dtype=float), spec.factor)
