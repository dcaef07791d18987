"""
Error collection and mean square estimation error statistics.

For one run of N steps the per-state MSEE is (1/N) Σ_k |x_k - x̂_k|², kept
separately for the centralized filter (kappa) and the information filter
(Gamma). AMSEE averages those over the Monte Carlo runs.
"""

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from satkf.core.errors import DegenerateSeries, EmptySequence, EmptyTrace, LengthMismatch
from satkf.estimation.smallmat import Vector4


@dataclass(frozen=True)
class ErrorTrace:
    beta: np.ndarray  # (N, 4) centralized filter
    gamma: np.ndarray  # (N, 4) information filter

    def __len__(self) -> int:
        return len(self.beta)


@dataclass(frozen=True)
class MseeRecord:
    kappa: Vector4
    Gamma: Vector4
    run_index: int = 0


@dataclass(frozen=True)
class AmseeRecord:
    Xi_kappa: Vector4
    Xi_Gamma: Vector4
    phi: int
    spread_kappa: Vector4
    spread_Gamma: Vector4


def _states(seq: ArrayLike, what: str) -> np.ndarray:
    arr = np.asarray(seq, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 4:
        raise LengthMismatch(f"{what} must be a sequence of 4-vectors, got shape {arr.shape}")
    return arr


def collect_errors(truth: ArrayLike, est_ckf: ArrayLike, est_mukf: ArrayLike) -> ErrorTrace:
    """elementwise |truth - estimate| per step for both filters"""
    x = _states(truth, "truth")
    a = _states(est_ckf, "centralized estimates")
    b = _states(est_mukf, "information estimates")
    if not len(x) == len(a) == len(b):
        raise LengthMismatch(
            f"Lengths differ: truth {len(x)}, centralized {len(a)}, information {len(b)}",
            data={"lengths": (len(x), len(a), len(b))},
        )
    return ErrorTrace(beta=np.abs(x - a), gamma=np.abs(x - b))


def msee(trace: ErrorTrace, run_index: int = 0) -> MseeRecord:
    if len(trace) == 0:
        raise EmptyTrace("Cannot average an empty error trace")
    return MseeRecord(
        kappa=np.mean(trace.beta**2, axis=0),
        Gamma=np.mean(trace.gamma**2, axis=0),
        run_index=run_index,
    )


def amsee(records: Sequence[MseeRecord]) -> AmseeRecord:
    if not records:
        raise EmptySequence("No MSEE records to average")
    kappa = np.vstack([r.kappa for r in records])
    gamma = np.vstack([r.Gamma for r in records])
    ddof = 1 if len(records) > 1 else 0
    return AmseeRecord(
        Xi_kappa=kappa.mean(axis=0),
        Xi_Gamma=gamma.mean(axis=0),
        phi=len(records),
        spread_kappa=kappa.std(axis=0, ddof=ddof),
        spread_Gamma=gamma.std(axis=0, ddof=ddof),
    )


def innovation_autocorr(
    innovations: ArrayLike, max_lag: int, include_zero: bool = False
) -> np.ndarray:
    """
    Normalized sample autocorrelation of a mean-removed series for lags
    1..max_lag (0..max_lag with include_zero).
    """
    e = np.asarray(innovations, dtype=float)
    if len(e) <= max_lag:
        raise LengthMismatch(f"Series of length {len(e)} is too short for lag {max_lag}")

    d = e - e.mean()
    denom = float(d @ d)
    if denom / len(e) < 1e-300:
        raise DegenerateSeries("Innovation series has zero sample variance")

    start = 0 if include_zero else 1
    return np.array([float(d[: len(d) - lag] @ d[lag:]) / denom for lag in range(start, max_lag + 1)])


def prediction_msee(truth: ArrayLike, predictions: ArrayLike) -> Vector4:
    """per-state mean square error of a sequence of state predictions"""
    x = _states(truth, "truth")
    p = _states(predictions, "predictions")
    if len(x) != len(p):
        raise LengthMismatch(f"Lengths differ: truth {len(x)}, predictions {len(p)}")
    if len(x) == 0:
        raise EmptyTrace("Cannot average an empty prediction sequence")
    return np.mean((x - p) ** 2, axis=0)
