"""
Estimators for the linear orbit model.

- ckf_predict / ckf_update: the time-varying (centralized) Kalman filter.
- mukf_step: the same recursion in information form,
      S = Hᵀ R⁻¹ H,  M = (P⁻¹ + S)⁻¹,  z = Hᵀ R⁻¹ y,
      x_m = x̄ + M (z - S x̄),  P⁺ = F M Fᵀ + B Q Bᵀ,  x̄⁺ = F x_m.
  By the matrix inversion lemma x_m and M equal the CKF posterior.
- solve_are / steady_predict: the constant-gain predictor.

Operands are validated once, when a FilterModel is built and when the
harness seeds the recursion; the per-step functions use plain array
arithmetic on those checked arrays.
"""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from satkf.core.errors import (
    DegenerateInnovation,
    InvalidVariance,
    NoConvergence,
    NotPSD,
    SingularMatrix,
)
from satkf.core.logger import get_logger
from satkf.estimation.smallmat import (
    DIM,
    Matrix4,
    RowVector4,
    Vector4,
    identity,
    invert,
    is_psd,
    matrix4,
    max_abs,
    row4,
    spectral_radius,
    vector4,
)

logger = get_logger(__name__)

INNOVATION_FLOOR = 1e-14
# closed-loop radius this close to 1 means the steady gain is effectively zero
MARGINAL_BAND = 1e-4


def _sym(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.T)


@dataclass(frozen=True)
class FilterModel:
    F: Matrix4
    H: RowVector4
    Q: Matrix4
    R: float
    u_s: Vector4 = field(default_factory=lambda: np.zeros(4))
    u_o: float = 0.0
    B: Matrix4 = field(default_factory=identity)
    jitter: float = 1e-12

    def __post_init__(self):
        object.__setattr__(self, "F", matrix4(self.F))
        object.__setattr__(self, "H", row4(self.H))
        object.__setattr__(self, "Q", matrix4(self.Q))
        object.__setattr__(self, "u_s", vector4(self.u_s))
        object.__setattr__(self, "B", matrix4(self.B))
        if not self.R > 0:
            raise InvalidVariance(f"Measurement variance {self.R} must be positive")
        if not is_psd(self.Q):
            raise NotPSD("Process covariance must be symmetric positive semi-definite")

    @cached_property
    def information(self) -> Matrix4:
        """S = Hᵀ R⁻¹ H"""
        return np.outer(self.H, self.H) / self.R

    @cached_property
    def shaped_process(self) -> Matrix4:
        """B Q Bᵀ"""
        return _sym(self.B @ self.Q @ self.B.T)


@dataclass(frozen=True)
class FilterEstimate:
    x_pred: Vector4
    P_pred: Matrix4
    x_post: Vector4
    P_post: Matrix4
    gain: Vector4
    innovation: float


@dataclass(frozen=True)
class MicroEstimate:
    x_bar: Vector4
    P: Matrix4
    S: Matrix4
    M: Matrix4
    gain: Vector4
    x_m: Vector4
    P_plus: Matrix4
    x_bar_plus: Vector4
    jittered: bool = False


@dataclass(frozen=True)
class SteadyState:
    P_inf: Matrix4
    K_inf: Vector4
    rho: float
    iterations: int
    residual: float
    converged: bool = True
    unobservable: tuple[int, ...] = ()

    @property
    def stabilizing(self) -> bool:
        return self.rho < 1.0

    @property
    def marginal(self) -> bool:
        return abs(1.0 - self.rho) < MARGINAL_BAND


# ------------------------------------------------------------------
# Centralized Kalman filter
# ------------------------------------------------------------------


def ckf_predict(
    x_post: Vector4, P_post: Matrix4, m: FilterModel
) -> tuple[Vector4, Matrix4]:
    x_pred = m.F @ x_post + m.u_s
    P_pred = _sym(m.F @ P_post @ m.F.T + m.Q)
    return x_pred, P_pred


def ckf_update(x_pred: Vector4, P_pred: Matrix4, m: FilterModel, y: float) -> FilterEstimate:
    PHt = P_pred @ m.H
    T = float(m.H @ PHt) + m.R
    if T <= INNOVATION_FLOOR:
        raise DegenerateInnovation(f"Innovation variance {T:.3e} is not positive")

    e = float(y) - (float(m.H @ x_pred) + m.u_o)
    K = PHt / T
    x_post = x_pred + K * e
    P_post = _sym(P_pred - np.outer(PHt, PHt) / T)

    return FilterEstimate(
        x_pred=x_pred,
        P_pred=P_pred,
        x_post=x_post,
        P_post=P_post,
        gain=K,
        innovation=e,
    )


# ------------------------------------------------------------------
# Information-form (micro) Kalman filter
# ------------------------------------------------------------------


def _information(P: Matrix4, jitter: float) -> tuple[Matrix4, bool]:
    try:
        return invert(P), False
    except SingularMatrix:
        if jitter <= 0:
            raise
        logger.debug("prior covariance singular, adding %.1e on the diagonal", jitter)
        return invert(P + jitter * identity()), True


def mukf_step(x_bar: Vector4, P: Matrix4, m: FilterModel, y: float) -> MicroEstimate:
    P_inv, jittered = _information(P, m.jitter)

    S = m.information
    z = m.H * (float(y) - m.u_o) / m.R
    M = _sym(invert(P_inv + S))

    x_m = x_bar + M @ (z - S @ x_bar)
    P_plus = _sym(m.F @ M @ m.F.T + m.shaped_process)
    x_bar_plus = m.F @ x_m + m.u_s

    return MicroEstimate(
        x_bar=x_bar,
        P=P,
        S=S,
        M=M,
        gain=M @ m.H / m.R,
        x_m=x_m,
        P_plus=P_plus,
        x_bar_plus=x_bar_plus,
        jittered=jittered,
    )


# ------------------------------------------------------------------
# Steady state
# ------------------------------------------------------------------


def riccati_step(P: Matrix4, m: FilterModel) -> Matrix4:
    """P <- F [P - P Hᵀ (H P Hᵀ + R)⁻¹ H P] Fᵀ + Q"""
    PHt = P @ m.H
    T = float(m.H @ PHt) + m.R
    return _sym(m.F @ (P - np.outer(PHt, PHt) / T) @ m.F.T + m.Q)


def predictor_gain(P: Matrix4, m: FilterModel) -> Vector4:
    """K = F P Hᵀ (H P Hᵀ + R)⁻¹"""
    PHt = P @ m.H
    return m.F @ PHt / (float(m.H @ PHt) + m.R)


def steady_state(
    P: Matrix4,
    m: FilterModel,
    iterations: int,
    residual: float,
    converged: bool = True,
    unobservable: tuple[int, ...] = (),
) -> SteadyState:
    """gain and closed-loop spectral radius for a Riccati iterate"""
    K = predictor_gain(P, m)
    rho = spectral_radius(m.F - np.outer(K, m.H))
    return SteadyState(
        P_inf=P,
        K_inf=K,
        rho=rho,
        iterations=iterations,
        residual=residual,
        converged=converged,
        unobservable=tuple(unobservable),
    )


def solve_are(
    m: FilterModel,
    tol: float = 1e-10,
    max_iter: int = 200_000,
    P0: Matrix4 | None = None,
) -> SteadyState:
    """
    Fixed-point iteration of the one-step Riccati recursion from P0.

    Stops when successive iterates differ by less than `tol` in max-norm.
    States no measurement ever sees are left out of that norm: their
    variance never settles (it random-walks under process noise) and no gain
    can affect it. After `max_iter` steps raises NoConvergence carrying the
    last residual and iterate. The returned rho is the spectral radius of
    F - K H; rho >= 1 means the solution is not stabilizing.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")

    hidden = tuple(unobservable_states(m.F, m.H))
    seen = [j for j in range(DIM) if j not in hidden] or list(range(DIM))
    block = np.ix_(seen, seen)
    if hidden:
        logger.warning(
            "states %s are unobservable; convergence is measured on the rest",
            [j + 1 for j in hidden],
        )

    P = matrix4(P0) if P0 is not None else identity()
    residual = float("inf")

    for iteration in range(1, max_iter + 1):
        P_next = riccati_step(P, m)
        residual = float(np.max(np.abs((P_next - P)[block])))
        P = P_next
        if residual < tol:
            break
    else:
        raise NoConvergence(
            f"Riccati recursion did not reach {tol:g} in {max_iter} iterations "
            f"(last residual {residual:.3e})",
            data={"residual": residual, "iterations": max_iter, "P": P, "unobservable": hidden},
        )

    steady = steady_state(P, m, iteration, residual, unobservable=hidden)
    logger.info(
        "riccati converged in %d iterations, residual %.2e, rho %.6f",
        iteration,
        residual,
        steady.rho,
    )
    return steady


def steady_predict(
    x_hat: Vector4, K_inf: Vector4, e: float, m: FilterModel
) -> tuple[Vector4, float]:
    """x_next = F x̂ + K e; y_next = H x_next"""
    x_next = m.F @ x_hat + K_inf * e + m.u_s
    y_next = float(m.H @ x_next) + m.u_o
    return x_next, y_next


# ------------------------------------------------------------------
# Structure checks
# ------------------------------------------------------------------


def observability_matrix(F: Matrix4, H: RowVector4) -> np.ndarray:
    """rows H, H F, H F², H F³"""
    rows = [row4(H)]
    for _ in range(3):
        rows.append(rows[-1] @ F)
    return np.vstack(rows)


def observability_rank(F: Matrix4, H: RowVector4) -> int:
    return int(np.linalg.matrix_rank(observability_matrix(F, H)))


def unobservable_states(F: Matrix4, H: RowVector4, tol: float = 1e-12) -> list[int]:
    """indices of states no measurement ever sees (zero observability columns)"""
    O = observability_matrix(F, H)
    return [j for j in range(O.shape[1]) if max_abs(O[:, j]) < tol]
