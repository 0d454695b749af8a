"""Sparse polynomial algebra in z and conj(z) over complex coefficients.

A :class:`ComplexPoly` stores a map from exponent pairs ``(p, q)`` --
meaning ``z**p * conj(z)**q`` -- to complex coefficients.  The
Hermite-Laguerre-Ito polynomials J_{m,n}, the creation/annihilation
operators, and the Ornstein-Uhlenbeck generator all act on this carrier
with exact coefficient arithmetic: binomial and factorial factors come
from integer arithmetic, and zero coefficients produced by integer
cancellation are dropped exactly (never by epsilon pruning, which would
mask bugs in the operator identities).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from types import MappingProxyType

import numpy as np

from . import _kernels

__all__ = [
    "ComplexPoly",
    "OUParams",
    "DegreeCapError",
    "hlito",
    "hlito_by_creation",
    "annihilate",
    "bar_annihilate",
    "creation_op",
    "bar_creation_op",
    "apply_generator",
    "conjugate",
    "generating_function_check",
]


class DegreeCapError(ValueError):
    """Raised when an operation would create a term above the degree cap."""


@dataclass(frozen=True)
class OUParams:
    """Model parameters of the rotating Ornstein-Uhlenbeck process.

    ``r`` is the radial decay rate, ``omega`` the rotation rate, and
    ``sigma2`` the diffusion strength.  The derived quantities are
    ``rho = 2*sigma2/r`` (stationary value of E|Z|^2) and ``c = omega/r``
    (rotation per unit decay).
    """

    r: float
    omega: float
    sigma2: float

    def __post_init__(self):
        if not self.r > 0:
            raise ValueError(f"r must be positive, got {self.r}")
        if not self.sigma2 > 0:
            raise ValueError(f"sigma2 must be positive, got {self.sigma2}")

    @property
    def rho(self) -> float:
        return 2.0 * self.sigma2 / self.r

    @property
    def c(self) -> float:
        return self.omega / self.r


class ComplexPoly:
    """Immutable sparse polynomial in (z, conj(z)).

    Terms live in a dict keyed by exponent pairs; no stored coefficient is
    exactly zero, and every key satisfies p + q <= ``degree_cap`` (a class
    attribute, default 64, settable per application).
    """

    __slots__ = ("_terms",)

    degree_cap: int = 64

    def __init__(self, terms=None):
        canon = {}
        cap = type(self).degree_cap
        if terms:
            for (p, q), coef in terms.items():
                p, q = int(p), int(q)
                if p < 0 or q < 0:
                    raise ValueError(f"negative exponent in term ({p}, {q})")
                if p + q > cap:
                    raise DegreeCapError(
                        f"term z^{p} zbar^{q} exceeds degree cap {cap}"
                    )
                coef = complex(coef)
                if coef != 0:
                    canon[(p, q)] = canon.get((p, q), 0.0 + 0.0j) + coef
                    if canon[(p, q)] == 0:
                        del canon[(p, q)]
        object.__setattr__(self, "_terms", canon)

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "ComplexPoly":
        return cls()

    @classmethod
    def one(cls) -> "ComplexPoly":
        return cls({(0, 0): 1.0})

    @classmethod
    def monomial(cls, p: int, q: int, coef: complex = 1.0) -> "ComplexPoly":
        return cls({(p, q): coef})

    # -- inspection --------------------------------------------------------

    @property
    def terms(self):
        """Read-only view of the exponent-to-coefficient map."""
        return MappingProxyType(self._terms)

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        return max(p + q for p, q in self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def max_abs_coeff(self) -> float:
        return max((abs(c) for c in self._terms.values()), default=0.0)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, float, complex)):
            other = ComplexPoly({(0, 0): other})
        if not isinstance(other, ComplexPoly):
            return NotImplemented
        out = dict(self._terms)
        for key, coef in other._terms.items():
            out[key] = out.get(key, 0.0 + 0.0j) + coef
        return ComplexPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return ComplexPoly({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, float, complex)):
            other = ComplexPoly({(0, 0): other})
        if not isinstance(other, ComplexPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return ComplexPoly({k: other * c for k, c in self._terms.items()})
        if not isinstance(other, ComplexPoly):
            return NotImplemented
        out: dict = {}
        for (p1, q1), c1 in self._terms.items():
            for (p2, q2), c2 in other._terms.items():
                key = (p1 + p2, q1 + q2)
                out[key] = out.get(key, 0.0 + 0.0j) + c1 * c2
        return ComplexPoly(out)

    __rmul__ = __mul__

    def conjugate(self) -> "ComplexPoly":
        """Complex conjugate: swaps exponents (p, q) -> (q, p), conjugates coefficients."""
        return ComplexPoly({(q, p): c.conjugate() for (p, q), c in self._terms.items()})

    # -- comparison --------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, float, complex)):
            other = ComplexPoly({(0, 0): other})
        if not isinstance(other, ComplexPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def allclose(self, other: "ComplexPoly", rtol: float = 1e-9) -> bool:
        """Coefficient-wise agreement relative to the largest coefficient magnitude."""
        scale = max(self.max_abs_coeff(), other.max_abs_coeff())
        if scale == 0.0:
            return True
        keys = set(self._terms) | set(other._terms)
        return all(
            abs(self._terms.get(k, 0.0) - other._terms.get(k, 0.0)) <= rtol * scale
            for k in keys
        )

    def max_coeff_diff(self, other: "ComplexPoly") -> float:
        keys = set(self._terms) | set(other._terms)
        return max(
            (abs(self._terms.get(k, 0.0) - other._terms.get(k, 0.0)) for k in keys),
            default=0.0,
        )

    # -- evaluation --------------------------------------------------------

    def __call__(self, z):
        return self.eval(z)

    def eval(self, z):
        """Evaluate at complex z (scalar or ndarray), with conj(z) for the bar slot."""
        if np.ndim(z) == 0:
            zv = complex(z)
            zb = zv.conjugate()
            return sum(
                (c * zv**p * zb**q for (p, q), c in self._terms.items()),
                start=0.0 + 0.0j,
            )
        ps, qs, coefs = self._term_arrays()
        return _kernels.poly_eval(ps, qs, coefs, np.asarray(z))

    def _term_arrays(self):
        items = self.sorted_terms()
        ps = np.array([p for (p, _), _ in items], dtype=np.int64)
        qs = np.array([q for (_, q), _ in items], dtype=np.int64)
        coefs = np.array([c for _, c in items], dtype=np.complex128)
        return ps, qs, coefs

    # -- serialization -----------------------------------------------------

    def sorted_terms(self):
        """Terms sorted by (total degree, p); the canonical output order."""
        return sorted(self._terms.items(), key=lambda kv: (kv[0][0] + kv[0][1], kv[0][0]))

    def to_json_dict(self) -> dict:
        return {
            "terms": [
                {"p": p, "q": q, "re": c.real, "im": c.imag}
                for (p, q), c in self.sorted_terms()
            ]
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "ComplexPoly":
        return cls(
            {(t["p"], t["q"]): complex(t["re"], t["im"]) for t in data["terms"]}
        )

    def __repr__(self):
        if not self._terms:
            return "ComplexPoly(0)"
        bits = []
        for (p, q), c in self.sorted_terms():
            mono = "".join(
                s for s in (f"z^{p}" if p else "", f"zb^{q}" if q else "") if s
            )
            bits.append(f"({c:.6g}){mono}" if mono else f"({c:.6g})")
        return "ComplexPoly(" + " + ".join(bits) + ")"


# ---------------------------------------------------------------------------
# Hermite-Laguerre-Ito polynomials and the operator algebra
# ---------------------------------------------------------------------------

def hlito(m: int, n: int, rho: float) -> ComplexPoly:
    """Hermite-Laguerre-Ito polynomial J_{m,n}(z, rho) in closed form.

    J_{m,n} = sum_{r=0}^{min(m,n)} (-1)^r r! C(m,r) C(n,r)
              z^(m-r) conj(z)^(n-r) rho^r

    The leading term z^m conj(z)^n always has coefficient exactly 1.
    """
    if m < 0 or n < 0:
        raise ValueError("m and n must be nonnegative")
    if m + n > ComplexPoly.degree_cap:
        raise DegreeCapError(f"m + n = {m + n} exceeds degree cap {ComplexPoly.degree_cap}")
    if not rho > 0:
        raise ValueError(f"rho must be positive, got {rho}")
    terms = {}
    for r in range(min(m, n) + 1):
        coef = (-1) ** r * math.factorial(r) * math.comb(m, r) * math.comb(n, r)
        terms[(m - r, n - r)] = coef * rho**r
    return ComplexPoly(terms)


def annihilate(p: ComplexPoly) -> ComplexPoly:
    """Formal d/dz: term (p, q) -> (p-1, q) with factor p; drops p = 0 terms."""
    return ComplexPoly(
        {(pp - 1, qq): pp * c for (pp, qq), c in p.terms.items() if pp > 0}
    )


def bar_annihilate(p: ComplexPoly) -> ComplexPoly:
    """Formal d/dzbar: term (p, q) -> (p, q-1) with factor q."""
    return ComplexPoly(
        {(pp, qq - 1): qq * c for (pp, qq), c in p.terms.items() if qq > 0}
    )


def creation_op(p: ComplexPoly, rho: float) -> ComplexPoly:
    """Adjoint of d/dz in L^2 of the stationary measure: -d/dzbar + (z/rho)."""
    return -bar_annihilate(p) + ComplexPoly.monomial(1, 0, 1.0 / rho) * p


def bar_creation_op(p: ComplexPoly, rho: float) -> ComplexPoly:
    """Adjoint of d/dzbar: -d/dz + (zbar/rho)."""
    return -annihilate(p) + ComplexPoly.monomial(0, 1, 1.0 / rho) * p


def hlito_by_creation(m: int, n: int, rho: float) -> ComplexPoly:
    """J_{m,n} built as rho^(m+n) (d/dz)*^m (d/dzbar)*^n applied to 1.

    Must agree coefficient-exactly with :func:`hlito`; kept as the second,
    independent construction route.
    """
    if m < 0 or n < 0:
        raise ValueError("m and n must be nonnegative")
    if m + n > ComplexPoly.degree_cap:
        raise DegreeCapError(f"m + n = {m + n} exceeds degree cap {ComplexPoly.degree_cap}")
    out = ComplexPoly.one()
    for _ in range(n):
        out = bar_creation_op(out, rho)
    for _ in range(m):
        out = creation_op(out, rho)
    return rho ** (m + n) * out


def apply_generator(p: ComplexPoly, params: OUParams) -> ComplexPoly:
    """Apply the OU generator A = -r[(1+ic) z d/dz + (1-ic) zbar d/dzbar - 2 rho d2/dzdzbar].

    Acts term by term: z d/dz and zbar d/dzbar scale a monomial by its
    exponents, the mixed second derivative lowers both exponents.
    """
    r, c, rho = params.r, params.c, params.rho
    out: dict = {}
    for (pp, qq), coef in p.terms.items():
        scale = -r * ((1 + 1j * c) * pp + (1 - 1j * c) * qq)
        if scale != 0:
            key = (pp, qq)
            out[key] = out.get(key, 0.0 + 0.0j) + scale * coef
        if pp > 0 and qq > 0:
            key = (pp - 1, qq - 1)
            out[key] = out.get(key, 0.0 + 0.0j) + 2.0 * r * rho * pp * qq * coef
    return ComplexPoly(out)


def conjugate(p: ComplexPoly) -> ComplexPoly:
    return p.conjugate()


def generating_function_check(
    lam: complex, z: complex, rho: float, nmax: int
) -> tuple[complex, complex]:
    """Both sides of the generating-function identity, truncated on the right.

    Returns (exp(lam*zbar + conj(lam)*z - rho*|lam|^2),
    sum_{m,n <= nmax} conj(lam)^m lam^n J_{m,n}(z, rho) / (m! n!)).
    """
    lam = complex(lam)
    z = complex(z)
    lhs = np.exp(lam * z.conjugate() + lam.conjugate() * z - rho * abs(lam) ** 2)
    table = _kernels.jmn_table(np.array([z]), rho, nmax)[:, :, 0]
    fact = np.ones(nmax + 1)
    for i in range(1, nmax + 1):
        fact[i] = fact[i - 1] * i
    lam_pow = lam ** np.arange(nmax + 1)
    lamc_pow = lam.conjugate() ** np.arange(nmax + 1)
    rhs = complex(
        np.einsum(
            "m,n,mn->", lamc_pow / fact, lam_pow / fact, table
        )
    )
    return complex(lhs), rhs
