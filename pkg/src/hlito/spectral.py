"""Finite-dimensional spectral structure of the rotating OU generator.

Restricted to the degree-l eigenspace spanned by products
H_k(x, rho/2) H_{l-k}(y, rho/2), the skew part of the generator becomes an
(l+1) x (l+1) tridiagonal matrix M(lambda) with diagonal -lambda,
subdiagonal -(l-k+1) and superdiagonal k+1 in row k.  Its null vectors at
lambda = -(m-n)i are the coefficients of J_{m,n} in the Hermite-product
basis; this module computes the determinant (two ways), the null vectors,
and the change of basis in both directions.

Sign convention: with the seed beta_0 = 1, the null vector at
lambda = -(m-n)i expands to a scalar multiple of J_{m, l-m}; this is fixed
by checking the generator eigenrelation numerically, not by inspection of
any closed form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .poly import ComplexPoly, OUParams

__all__ = [
    "EigenIndex",
    "spectrum",
    "det_m",
    "tridiagonal_matrix",
    "null_vector",
    "beta_to_poly",
    "j_in_hermite_basis",
    "monomial_in_j_basis",
]


@dataclass(frozen=True, order=True)
class EigenIndex:
    """Index (m, n) of one eigenfunction J_{m,n}."""

    m: int
    n: int

    def __post_init__(self):
        if self.m < 0 or self.n < 0:
            raise ValueError("eigenindices must be nonnegative")

    def eigenvalue(self, params: OUParams) -> complex:
        """Generator eigenvalue -(m+n) r - i (m-n) omega, recomputed on demand."""
        return complex(
            -(self.m + self.n) * params.r, -(self.m - self.n) * params.omega
        )

    @property
    def level(self) -> int:
        return self.m + self.n

    def norm_squared(self, rho: float) -> float:
        """Squared L^2(mu) norm m! n! rho^(m+n) of J_{m,n}."""
        return math.factorial(self.m) * math.factorial(self.n) * rho ** (self.m + self.n)


def spectrum(params: OUParams, max_level: int) -> list[tuple[EigenIndex, complex]]:
    """All (index, eigenvalue) pairs with m + n <= max_level, sorted by (m+n, m-n)."""
    out = []
    for level in range(max_level + 1):
        for m in range(level + 1):
            idx = EigenIndex(m, level - m)
            out.append((idx, idx.eigenvalue(params)))
    return out


def tridiagonal_matrix(l: int, lam: complex) -> np.ndarray:
    """Dense M(lambda): diagonal -lambda, row-k subdiagonal -(l-k+1), superdiagonal k+1."""
    mat = np.zeros((l + 1, l + 1), dtype=complex)
    for k in range(l + 1):
        mat[k, k] = -lam
        if k >= 1:
            mat[k, k - 1] = -(l - (k - 1))
        if k < l:
            mat[k, k + 1] = k + 1
    return mat


def det_m(l: int, lam: complex) -> tuple[complex, complex]:
    """Determinant of M(lambda), by continuant recurrence and by product formula.

    Returns ``(direct, product)`` where ``direct`` runs the three-term
    recurrence D_k = a_k D_{k-1} - b_k c_{k-1} D_{k-2} down the matrix and
    ``product`` is (-1)^(l+1) * prod_{m=0}^{l} (lambda + (2m - l) i).
    """
    if l < 0:
        raise ValueError("l must be nonnegative")
    if l > 60:
        raise ValueError("l > 60 not supported")
    lam = complex(lam)
    d_prev2, d_prev = 1.0 + 0.0j, -lam
    for k in range(1, l + 1):
        sub_k = -(l - (k - 1))
        super_km1 = float(k)
        d_prev2, d_prev = d_prev, -lam * d_prev - sub_k * super_km1 * d_prev2
    product = (-1) ** (l + 1) * np.prod(
        [lam + (2 * m - l) * 1j for m in range(l + 1)]
    )
    return d_prev, complex(product)


def null_vector(l: int, m: int) -> np.ndarray:
    """Null vector of M(lambda) at lambda = -(m-n) i with n = l - m.

    Seeded with beta_0 = 1 (always valid: the top coefficient never
    vanishes at these lambda) and continued by
    beta_{k+1} = (lambda beta_k + (l-k+1) beta_{k-1}) / (k+1).
    """
    if not 0 <= m <= l:
        raise ValueError(f"need 0 <= m <= l, got m={m}, l={l}")
    n = l - m
    lam = -(m - n) * 1j
    beta = np.zeros(l + 1, dtype=complex)
    beta[0] = 1.0
    for k in range(l):
        prev = beta[k - 1] if k >= 1 else 0.0
        beta[k + 1] = (lam * beta[k] + (l - (k - 1)) * prev) / (k + 1)
    return beta


def _hermite_of_poly(k: int, arg: ComplexPoly, rho: float) -> ComplexPoly:
    # same three-term recursion as special.hermite, over polynomial arguments
    h_prev = ComplexPoly.one()
    if k == 0:
        return h_prev
    h_cur = arg
    for j in range(1, k):
        h_prev, h_cur = h_cur, arg * h_cur - (j * rho) * h_prev
    return h_cur


def beta_to_poly(beta, l: int, rho: float) -> ComplexPoly:
    """Expand sum_k beta_k H_k(x, rho/2) H_{l-k}(y, rho/2) into a (z, zbar) polynomial.

    Substitutes x = (z + zbar)/2 and y = (z - zbar)/(2i) symbolically.  For
    beta = null_vector(l, m) the result is a scalar multiple of
    hlito(m, l-m, rho).
    """
    beta = np.asarray(beta, dtype=complex)
    if beta.shape != (l + 1,):
        raise ValueError(f"beta must have length l + 1 = {l + 1}, got {beta.shape}")
    x_poly = ComplexPoly({(1, 0): 0.5, (0, 1): 0.5})
    y_poly = ComplexPoly({(1, 0): -0.5j, (0, 1): 0.5j})
    out = ComplexPoly.zero()
    for k in range(l + 1):
        if beta[k] == 0:
            continue
        out = out + complex(beta[k]) * (
            _hermite_of_poly(k, x_poly, rho / 2.0)
            * _hermite_of_poly(l - k, y_poly, rho / 2.0)
        )
    return out


def j_in_hermite_basis(m: int, l: int) -> np.ndarray:
    """Coefficients of J_{m, l-m} in the basis {H_k(x, rho/2) H_{l-k}(y, rho/2)}.

    beta_k = i^(l-k) * sum_{u+v=k} C(m, u) C(l-m, v) (-1)^(l-m-v)

    independent of rho; round-trips through :func:`beta_to_poly` to
    hlito(m, l-m, rho) exactly.
    """
    if not 0 <= m <= l:
        raise ValueError(f"need 0 <= m <= l, got m={m}, l={l}")
    n = l - m
    beta = np.zeros(l + 1, dtype=complex)
    for k in range(l + 1):
        acc = 0
        for u in range(max(0, k - n), min(m, k) + 1):
            v = k - u
            acc += math.comb(m, u) * math.comb(n, v) * (-1) ** (n - v)
        beta[k] = 1j ** (l - k) * acc
    return beta


def monomial_in_j_basis(m: int, n: int, rho: float) -> list[tuple[EigenIndex, float]]:
    """Expansion z^m zbar^n = sum_k C(m,k) C(n,k) k! rho^k J_{m-k, n-k}.

    Returns (index, coefficient) pairs for k = 0..min(m, n), in that order.
    """
    if m < 0 or n < 0:
        raise ValueError("m and n must be nonnegative")
    out = []
    for k in range(min(m, n) + 1):
        coef = math.comb(m, k) * math.comb(n, k) * math.factorial(k) * rho**k
        out.append((EigenIndex(m - k, n - k), coef))
    return out
