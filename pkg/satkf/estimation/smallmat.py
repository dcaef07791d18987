"""
Fixed-size dense kernel for the four-state filters.

A Matrix4 is a (4, 4) float array, a Vector4 a (4,) array and a RowVector4 a
(4,) array read as a 1x4 row. Every function returns a new array and never
mutates its inputs, so they are safe to share between threads.
"""

import numpy as np
from numpy.typing import ArrayLike, NDArray

from satkf.core.errors import (
    NoConvergence,
    NonFiniteEntries,
    NotPSD,
    ShapeMismatch,
    SingularMatrix,
)

Matrix4 = NDArray[np.float64]
Vector4 = NDArray[np.float64]
RowVector4 = NDArray[np.float64]

DIM = 4
PIVOT_FLOOR = 1e-12
TAYLOR_FLOOR = 1e-16
MAX_SQUARINGS = 64
PSD_FLOOR = 1e-10


def _checked(value: ArrayLike, shape: tuple[int, ...], what: str) -> NDArray[np.float64]:
    arr = np.array(value, dtype=float)
    if arr.shape != shape:
        raise ShapeMismatch(f"{what} must have shape {shape}, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteEntries(f"{what} holds NaN or Inf entries")
    return arr


def matrix4(value: ArrayLike) -> Matrix4:
    """validated 4x4 matrix"""
    return _checked(value, (DIM, DIM), "Matrix4")


def vector4(value: ArrayLike) -> Vector4:
    """validated 4-vector"""
    return _checked(value, (DIM,), "Vector4")


def row4(value: ArrayLike) -> RowVector4:
    """validated 1x4 row, stored flat"""
    return _checked(np.ravel(value), (DIM,), "RowVector4")


def identity() -> Matrix4:
    return np.eye(DIM)


def _finite(arr: NDArray[np.float64]) -> NDArray[np.float64]:
    if not np.all(np.isfinite(arr)):
        raise NonFiniteEntries("Result overflowed to NaN or Inf")
    return arr


# ------------------------------------------------------------------
# Arithmetic suite
# ------------------------------------------------------------------


def mat_mul(a: ArrayLike, b: ArrayLike) -> Matrix4:
    return _finite(matrix4(a) @ matrix4(b))


def mat_add(a: ArrayLike, b: ArrayLike) -> Matrix4:
    return _finite(matrix4(a) + matrix4(b))


def mat_sub(a: ArrayLike, b: ArrayLike) -> Matrix4:
    return _finite(matrix4(a) - matrix4(b))


def transpose(a: ArrayLike) -> Matrix4:
    return matrix4(a).T.copy()


def mat_vec(a: ArrayLike, v: ArrayLike) -> Vector4:
    return _finite(matrix4(a) @ vector4(v))


def outer(u: ArrayLike, v: ArrayLike | None = None) -> Matrix4:
    """u vᵀ, or u uᵀ when v is omitted"""
    u = vector4(u)
    return _finite(np.outer(u, u if v is None else vector4(v)))


def scale(c: float, a: ArrayLike) -> NDArray[np.float64]:
    return _finite(float(c) * np.asarray(a, dtype=float))


def symmetrize(a: ArrayLike) -> Matrix4:
    """(A + Aᵀ) / 2"""
    m = matrix4(a)
    return 0.5 * (m + m.T)


def max_abs(a: ArrayLike) -> float:
    """max-norm of an array"""
    return float(np.max(np.abs(np.asarray(a, dtype=float))))


def inf_norm(a: ArrayLike) -> float:
    """max absolute row sum"""
    return float(np.max(np.sum(np.abs(np.asarray(a, dtype=float)), axis=1)))


def is_psd(a: ArrayLike, tol: float = PSD_FLOOR) -> bool:
    m = matrix4(a)
    if max_abs(m - m.T) > 1e-12:
        return False
    return bool(np.min(np.linalg.eigvalsh(m)) >= -tol)


# ------------------------------------------------------------------
# Decompositions
# ------------------------------------------------------------------


def invert(m: ArrayLike) -> Matrix4:
    """
    Gauss-Jordan elimination with partial pivoting.

    Raises SingularMatrix when the largest available pivot of a column falls
    below PIVOT_FLOOR.
    """
    a = matrix4(m)
    aug = np.hstack([a, np.eye(DIM)])

    for col in range(DIM):
        pivot = col + int(np.argmax(np.abs(aug[col:, col])))
        if abs(aug[pivot, col]) < PIVOT_FLOOR:
            raise SingularMatrix(
                f"Pivot {aug[pivot, col]:.3e} in column {col} is below {PIVOT_FLOOR:g}",
                data={"column": col},
            )
        if pivot != col:
            aug[[col, pivot]] = aug[[pivot, col]]

        row = aug[col] / aug[col, col]
        aug -= np.outer(aug[:, col], row)
        aug[col] = row

    return _finite(aug[:, DIM:])


def cholesky_psd(m: ArrayLike, floor: float = PSD_FLOOR) -> Matrix4:
    """
    Lower factor L with L Lᵀ = m for symmetric PSD m.

    Pivots within `floor` of zero are semidefinite directions and leave
    their column of L at zero; a pivot below -floor raises NotPSD.
    """
    a = symmetrize(m)
    L = np.zeros_like(a)

    for j in range(DIM):
        d = a[j, j] - L[j, :j] @ L[j, :j]
        if d < -floor:
            raise NotPSD(f"Cholesky pivot {d:.3e} at index {j}", data={"index": j})
        if d <= floor:
            continue
        L[j, j] = np.sqrt(d)
        L[j + 1 :, j] = (a[j + 1 :, j] - L[j + 1 :, :j] @ L[j, :j]) / L[j, j]

    return L


# ------------------------------------------------------------------
# Matrix functions
# ------------------------------------------------------------------


def expm(m: ArrayLike, tol: float = TAYLOR_FLOOR) -> Matrix4:
    """
    Matrix exponential by scaled Taylor series and repeated squaring.

    The argument is halved until its infinity norm is at most 1/2, the series
    runs until a term's max-abs entry drops below `tol`, then the result is
    squared back.
    """
    a = matrix4(m)
    norm = inf_norm(a)
    squarings = int(np.ceil(np.log2(norm / 0.5))) if norm > 0.5 else 0
    scaled = a / 2.0**squarings

    result = np.eye(DIM)
    term = np.eye(DIM)
    for k in range(1, 100):
        term = term @ scaled / k
        result = result + term
        if max_abs(term) < tol:
            break

    for _ in range(squarings):
        result = result @ result

    return _finite(result)


def spectral_radius(m: ArrayLike, tol: float = 1e-9) -> float:
    """
    max |eigenvalue| as the limit of ||m^(2^k)||^(1/2^k).

    The power is renormalized after every squaring and its scale carried in
    log space. Returns once consecutive estimates differ by less than `tol`.
    """
    a = matrix4(m)
    norm = inf_norm(a)
    if norm == 0.0:
        return 0.0

    b = a / norm
    log_scale = float(np.log(norm))
    estimate: float | None = None

    for k in range(1, MAX_SQUARINGS + 1):
        b = b @ b
        n = inf_norm(b)
        if n == 0.0:
            # nilpotent
            return 0.0
        b /= n
        log_scale = 2.0 * log_scale + float(np.log(n))
        nxt = float(np.exp(log_scale / 2.0**k))
        if estimate is not None and abs(nxt - estimate) < tol:
            return nxt
        estimate = nxt

    raise NoConvergence(
        f"Spectral radius estimate did not settle within {MAX_SQUARINGS} squarings",
        data={"last_estimate": estimate},
    )
