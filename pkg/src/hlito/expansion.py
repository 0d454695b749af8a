"""Inner products and series expansions in L^2 of the stationary measure.

The stationary measure has density (pi*rho)^(-1) exp(-(x^2+y^2)/rho), a
product of two centered Gaussians of variance rho/2.  Tensorized
Gauss-Hermite quadrature therefore integrates polynomials of total degree
up to 2*nodes - 1 in each variable exactly, after the change of variable
x = s*sqrt(rho) from the e^(-s^2) weight.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .poly import ComplexPoly
from .spectral import EigenIndex

__all__ = [
    "QuadratureGrid",
    "QuadratureExactnessWarning",
    "build_grid",
    "inner_product",
    "expand",
    "evaluate_expansion",
    "parseval_check",
]


class QuadratureExactnessWarning(UserWarning):
    """The grid cannot integrate the requested polynomial degree exactly."""


@dataclass(frozen=True)
class QuadratureGrid:
    """Tensor Gauss-Hermite grid adapted to the stationary Gaussian measure."""

    nodes_1d: np.ndarray = field(repr=False)
    weights_1d: np.ndarray = field(repr=False)
    rho: float

    @property
    def n_nodes(self) -> int:
        return len(self.nodes_1d)

    @property
    def max_exact_degree(self) -> int:
        """Largest per-variable polynomial degree integrated exactly."""
        return 2 * self.n_nodes - 1

    @property
    def points(self) -> np.ndarray:
        """Complex grid points x + iy, shape (n_nodes, n_nodes)."""
        return self.nodes_1d[:, None] + 1j * self.nodes_1d[None, :]

    @property
    def weights(self) -> np.ndarray:
        """2-D probability weights, shape (n_nodes, n_nodes)."""
        return np.outer(self.weights_1d, self.weights_1d)

    def integrate(self, values: np.ndarray) -> complex:
        """Weighted sum of values sampled on :attr:`points`."""
        return complex(np.sum(self.weights * values))

    def check_exactness(self, degree: int) -> None:
        if degree > self.max_exact_degree:
            warnings.warn(
                f"integrand degree {degree} exceeds the grid's exact degree "
                f"{self.max_exact_degree}; the result is approximate",
                QuadratureExactnessWarning,
                stacklevel=3,
            )


def build_grid(nodes: int, rho: float) -> QuadratureGrid:
    """Gauss-Hermite grid rescaled to the stationary measure with scale rho."""
    if nodes < 1:
        raise ValueError(f"nodes must be >= 1, got {nodes}")
    if not rho > 0:
        raise ValueError(f"rho must be positive, got {rho}")
    s, w = np.polynomial.hermite.hermgauss(nodes)
    return QuadratureGrid(
        nodes_1d=s * math.sqrt(rho), weights_1d=w / math.sqrt(math.pi), rho=float(rho)
    )


def _sample(f, pts: np.ndarray) -> np.ndarray:
    if isinstance(f, ComplexPoly):
        return f.eval(pts)
    return np.asarray(f(pts), dtype=complex)


def inner_product(f, g, grid: QuadratureGrid) -> complex:
    """<f, g> = int f * conj(g) d(mu), by tensor quadrature.

    ``f`` and ``g`` are ComplexPoly instances or callables taking a complex
    ndarray.  When both are polynomials the grid's exactness is checked and
    a :class:`QuadratureExactnessWarning` is emitted if insufficient.
    """
    if isinstance(f, ComplexPoly) and isinstance(g, ComplexPoly):
        grid.check_exactness(max(f.degree, 0) + max(g.degree, 0))
    pts = grid.points
    return grid.integrate(_sample(f, pts) * np.conj(_sample(g, pts)))


def expand(f, max_level: int, grid: QuadratureGrid, rho: float | None = None):
    """Coefficients a_{m,n} = <f, J_{m,n}> for all m + n <= max_level.

    Returns a dict mapping :class:`EigenIndex` to the complex coefficient.
    The series reconstruction weights each term by 1/(m! n! rho^(m+n));
    see :func:`evaluate_expansion`.
    """
    if rho is None:
        rho = grid.rho
    pts = grid.points
    w = grid.weights
    fbar_w = np.conj(_sample(f, pts)) * w
    table = _kernels.jmn_table(pts.ravel(), rho, max_level)
    coeffs = {}
    for level in range(max_level + 1):
        for m in range(level + 1):
            n = level - m
            # <f, J> = conj(<J, f>) avoids conjugating the whole table
            val = np.sum(table[m, n] * fbar_w.ravel()).conjugate()
            coeffs[EigenIndex(m, n)] = complex(val)
    return coeffs


def evaluate_expansion(coeffs, z, rho: float):
    """Evaluate sum a_{m,n} J_{m,n}(z) / (m! n! rho^(m+n)) at complex z."""
    zarr = np.atleast_1d(np.asarray(z, dtype=complex))
    max_level = max((idx.level for idx in coeffs), default=0)
    table = _kernels.jmn_table(zarr.ravel(), rho, max_level)
    out = np.zeros(zarr.size, dtype=complex)
    for idx, a in sorted(coeffs.items()):
        out += (a / idx.norm_squared(rho)) * table[idx.m, idx.n]
    out = out.reshape(zarr.shape)
    return complex(out[0]) if np.ndim(z) == 0 else out


def parseval_check(f, max_level: int, grid: QuadratureGrid) -> tuple[float, float]:
    """Quadrature norm ||f||^2 and the truncated sum of |a_{m,n}|^2 / (m! n! rho^(m+n)).

    The partial sum is nondecreasing in ``max_level`` and bounded by the
    norm; equality holds once the expansion exhausts a polynomial f.
    """
    rho = grid.rho
    norm2 = inner_product(f, f, grid).real
    coeffs = expand(f, max_level, grid, rho)
    partial = sum(abs(a) ** 2 / idx.norm_squared(rho) for idx, a in coeffs.items())
    return norm2, float(partial)
