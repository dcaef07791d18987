"""
Satellite dynamics about a nominally circular orbit.

Polar equations
    r'' = r θ'² - G0 / r²
    θ'' = -2 θ' r' / r
with G0 = R³ω², and the deviation state
    x = [r - R, r', R(θ - ωt), R(θ' - ω)].
"""

from dataclasses import dataclass, replace
from enum import StrEnum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from satkf.core.errors import DomainError
from satkf.estimation.smallmat import Matrix4, RowVector4, Vector4, expm, row4, scale

PHI_DEFAULT = 0.1
PSI_DEFAULT = 0.5


class MeasurementType(StrEnum):
    TYPE1 = "type1"  # range deviation x1
    TYPE2 = "type2"  # scaled angle deviation x3


class OrbitParams(BaseModel):
    '''
    Nominal orbit. G0 is derived from R and ω; passing an inconsistent g0 is
    rejected since no circular nominal solution would exist.
    '''

    model_config = ConfigDict(frozen=True)

    radius: float = Field(1.0, gt=0, description="Nominal radius R")
    omega: float = Field(1.0, description="Nominal angular rate ω")
    h: float = Field(0.01, gt=0, description="Sample period")
    g0: float | None = Field(None, description="Gravitational constant, R³ω² when omitted")

    @model_validator(mode="after")
    def check_circular(self) -> "OrbitParams":
        if self.omega == 0:
            raise ValueError("omega must be nonzero")
        expected = self.radius**3 * self.omega**2
        if self.g0 is not None and not np.isclose(self.g0, expected, rtol=1e-12, atol=0.0):
            raise ValueError(f"g0={self.g0} is inconsistent with R³ω²={expected}")
        return self

    @property
    def G0(self) -> float:
        return self.radius**3 * self.omega**2


@dataclass(frozen=True, slots=True)
class PolarState:
    r: float
    r_dot: float
    theta: float
    theta_dot: float


def nonlinear_derivative(
    s: PolarState, p: OrbitParams
) -> tuple[float, float, float, float]:
    """(r', r'', θ', θ'') of the polar equations"""
    if s.r <= 0:
        raise DomainError(f"Radius {s.r} is not positive")
    r_ddot = s.r * s.theta_dot**2 - p.G0 / s.r**2
    theta_ddot = -2.0 * s.theta_dot * s.r_dot / s.r
    return s.r_dot, r_ddot, s.theta_dot, theta_ddot


def _shifted(s: PolarState, k: tuple[float, float, float, float], c: float) -> PolarState:
    return PolarState(
        r=s.r + c * k[0],
        r_dot=s.r_dot + c * k[1],
        theta=s.theta + c * k[2],
        theta_dot=s.theta_dot + c * k[3],
    )


def rk4_step(s: PolarState, p: OrbitParams, dt: float) -> PolarState:
    """one classic Runge-Kutta step of the polar equations"""
    if dt < 0:
        raise DomainError(f"Step {dt} is negative")
    if dt == 0:
        return replace(s)

    k1 = nonlinear_derivative(s, p)
    k2 = nonlinear_derivative(_shifted(s, k1, dt / 2), p)
    k3 = nonlinear_derivative(_shifted(s, k2, dt / 2), p)
    k4 = nonlinear_derivative(_shifted(s, k3, dt), p)

    incr = tuple((a + 2 * b + 2 * c + d) / 6.0 for a, b, c, d in zip(k1, k2, k3, k4))
    out = _shifted(s, incr, dt)
    if out.r <= 0:
        raise DomainError(f"Step drove the radius to {out.r}")
    return out


def to_deviation(s: PolarState, t: float, p: OrbitParams) -> Vector4:
    return np.array(
        [
            s.r - p.radius,
            s.r_dot,
            p.radius * (s.theta - p.omega * t),
            p.radius * (s.theta_dot - p.omega),
        ]
    )


def from_deviation(x: Vector4, t: float, p: OrbitParams) -> PolarState:
    """inverse of to_deviation"""
    return PolarState(
        r=p.radius + float(x[0]),
        r_dot=float(x[1]),
        theta=p.omega * t + float(x[2]) / p.radius,
        theta_dot=p.omega + float(x[3]) / p.radius,
    )


def circular_state(t: float, p: OrbitParams) -> PolarState:
    """the nominal solution at time t"""
    return PolarState(r=p.radius, r_dot=0.0, theta=p.omega * t, theta_dot=p.omega)


def linearized_matrix(w: float) -> Matrix4:
    """A for nominal rate w; w = 0 leaves only the integrator couplings"""
    return np.array(
        [
            [0.0, 1.0, 0.0, 0.0],
            [3.0 * w**2, 0.0, 0.0, 2.0 * w],
            [0.0, 0.0, 0.0, 1.0],
            [0.0, -2.0 * w, 0.0, 0.0],
        ]
    )


def build_A(p: OrbitParams) -> Matrix4:
    """continuous-time linearization about the circular orbit"""
    return linearized_matrix(p.omega)


def discretize(A: Matrix4, h: float) -> Matrix4:
    """F = exp(A h)"""
    if h <= 0:
        raise DomainError(f"Sample period {h} is not positive")
    return expm(scale(h, A))


def measurement_matrix(
    t: MeasurementType, phi: float = PHI_DEFAULT, psi: float = PSI_DEFAULT
) -> tuple[RowVector4, float]:
    """observation row and channel variance for a measurement type"""
    match MeasurementType(t):
        case MeasurementType.TYPE1:
            return row4([1.0, 0.0, 0.0, 0.0]), phi
        case MeasurementType.TYPE2:
            return row4([0.0, 0.0, 1.0, 0.0]), psi
