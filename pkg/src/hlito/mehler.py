"""The OU semigroup P_t: closed-form Mehler kernel, eigen-series, quadrature action.

With u = exp(-r t) in (0, 1), the transition operator has the kernel
density against the stationary measure

    K_u(x, y) = (1 - u^2)^(-1) *
                exp(-(u^2 |y|^2 + u^2 |x|^2 - 2 u <R(u) x, y>) / (rho (1 - u^2)))

where R(u) is the rotation by angle -c log(u).  The same operator acts
diagonally on the eigenpolynomials, J_{m,n} -> u^(m+n+i(m-n)c) J_{m,n},
which resums to K_u; both routes are implemented and cross-validated.
The eigen-series here carries the conjugate on its second factor,

    sum u^(m+n+i(m-n)c) J_{m,n}(zx) conj(J_{m,n}(zy)) / (m! n! rho^(m+n)),

the form that actually reproduces the closed kernel (the non-conjugated
variant evaluates the kernel at the reflected point ybar instead).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .expansion import QuadratureGrid
from .poly import ComplexPoly, OUParams

__all__ = [
    "MehlerPoint",
    "SeriesConvergenceWarning",
    "rotation",
    "mehler_kernel",
    "mehler_series",
    "semigroup_apply",
    "symmetric_relation_check",
]

MAX_SERIES_LEVEL = 60


class SeriesConvergenceWarning(UserWarning):
    """Partial sums converge slowly for u close to 1."""


@dataclass(frozen=True)
class MehlerPoint:
    """Evaluation point of the kernel: time parameter u = exp(-rt) and x, y in R^2."""

    u: float
    x: tuple[float, float]
    y: tuple[float, float]

    def __post_init__(self):
        if not 0.0 < self.u < 1.0:
            raise ValueError(f"u must lie in (0, 1), got {self.u}")

    @property
    def zx(self) -> complex:
        return complex(self.x[0], self.x[1])

    @property
    def zy(self) -> complex:
        return complex(self.y[0], self.y[1])


def rotation(u: float, params: OUParams) -> np.ndarray:
    """Rotation matrix accumulated over the time -log(u)/r, angle -c*log(u)."""
    if not 0.0 < u <= 1.0:
        raise ValueError(f"u must lie in (0, 1], got {u}")
    theta = -params.c * math.log(u)
    ct, st = math.cos(theta), math.sin(theta)
    return np.array([[ct, st], [-st, ct]])


def mehler_kernel(pt: MehlerPoint, params: OUParams) -> float:
    """Closed-form transition kernel density against the stationary measure."""
    u = pt.u
    rho = params.rho
    x = np.asarray(pt.x, dtype=float)
    y = np.asarray(pt.y, dtype=float)
    rot_x = rotation(u, params) @ x
    quad_form = u * u * (y @ y) + u * u * (x @ x) - 2.0 * u * (rot_x @ y)
    return float(np.exp(-quad_form / (rho * (1.0 - u * u))) / (1.0 - u * u))


def mehler_series(pt: MehlerPoint, params: OUParams, nmax: int) -> complex:
    """Partial sum of the eigen-series over total degree m + n <= nmax.

    The result is mathematically real; the small imaginary part of the
    returned complex value measures rounding noise.
    """
    if not 0 <= nmax <= MAX_SERIES_LEVEL:
        raise ValueError(f"nmax must lie in [0, {MAX_SERIES_LEVEL}], got {nmax}")
    if pt.u >= 0.9:
        warnings.warn(
            f"u = {pt.u} is close to 1; the degree-{nmax} partial sum may be far "
            "from the kernel",
            SeriesConvergenceWarning,
            stacklevel=2,
        )
    out = _kernels.mehler_series_points(
        np.array([pt.zx]), np.array([pt.zy]), pt.u, params.c, params.rho, nmax
    )
    return complex(out[0])


def _as_callable(f):
    if isinstance(f, ComplexPoly):
        return f.eval, f.degree
    return f, None


def semigroup_apply(
    f, t: float, x, params: OUParams, grid: QuadratureGrid
) -> complex:
    """P_t f at the point x, as a Gaussian quadrature over the stationary measure.

    Uses the representation P_t f(x) = E[f(e^{-rt} R x + sqrt(1-e^{-2rt}) Z)]
    with Z distributed as the stationary measure, so a polynomial f of
    degree within the grid's exactness is integrated exactly.
    """
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    fn, degree = _as_callable(f)
    if degree is not None:
        grid.check_exactness(degree)
    u = math.exp(-params.r * t)
    x = np.asarray(x, dtype=float)
    rot_x = rotation(u, params) @ x
    center = complex(rot_x[0], rot_x[1]) * u
    shifted = center + math.sqrt(1.0 - u * u) * grid.points
    return grid.integrate(np.asarray(fn(shifted), dtype=complex))


def symmetric_relation_check(
    f, t: float, x, params: OUParams, grid: QuadratureGrid
) -> tuple[complex, complex]:
    """Both sides of P_t f(x) = P^s_t f(R(t) x), with P^s_t the non-rotating semigroup.

    Returns (lhs, rhs); the two agree for any f the grid integrates exactly.
    """
    lhs = semigroup_apply(f, t, x, params, grid)
    sym = OUParams(r=params.r, omega=0.0, sigma2=params.sigma2)
    u = math.exp(-params.r * t)
    x_rot = rotation(u, params) @ np.asarray(x, dtype=float)
    rhs = semigroup_apply(f, t, x_rot, sym, grid)
    return lhs, rhs
