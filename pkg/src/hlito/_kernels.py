"""Hot numeric kernels, each in a numba ``@njit`` and a pure-numpy variant.

Every public function here dispatches on :func:`hlito._backend.active_backend`
at call time.  The two variants are kept importable side by side
(``_nb_*`` / ``_np_*``) so the benchmark and the equivalence tests can
exercise both.

The polynomial-table recurrence used throughout is

    J[0, n]   = conj(z)**n
    J[m+1, n] = z * J[m, n] - n * rho * J[m, n-1]

which raises the first index one step at a time; tables are filled for all
pairs (m, n) up to a rectangular bound.
"""
from __future__ import annotations

import numpy as np

from ._backend import NUMBA_AVAILABLE, active_backend

if NUMBA_AVAILABLE:
    from numba import njit
else:  # pragma: no cover - numba is a declared dependency
    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap


# ---------------------------------------------------------------------------
# eigenpolynomial tables J[m, n, point]
# ---------------------------------------------------------------------------

def _np_jmn_table(z: np.ndarray, rho: float, nmax: int) -> np.ndarray:
    k = z.shape[0]
    zb = np.conj(z)
    table = np.zeros((nmax + 1, nmax + 1, k), dtype=np.complex128)
    table[0, 0] = 1.0
    for n in range(1, nmax + 1):
        table[0, n] = zb * table[0, n - 1]
    for n in range(nmax + 1):
        for m in range(nmax):
            if n >= 1:
                table[m + 1, n] = z * table[m, n] - (n * rho) * table[m, n - 1]
            else:
                table[m + 1, n] = z * table[m, n]
    return table


@njit(cache=True)
def _nb_jmn_table(z, rho, nmax):
    k = z.shape[0]
    table = np.zeros((nmax + 1, nmax + 1, k), dtype=np.complex128)
    for j in range(k):
        zv = z[j]
        zb = np.conj(zv)
        table[0, 0, j] = 1.0
        for n in range(1, nmax + 1):
            table[0, n, j] = zb * table[0, n - 1, j]
        for n in range(nmax + 1):
            for m in range(nmax):
                acc = zv * table[m, n, j]
                if n >= 1:
                    acc -= n * rho * table[m, n - 1, j]
                table[m + 1, n, j] = acc
    return table


def jmn_table(z: np.ndarray, rho: float, nmax: int) -> np.ndarray:
    """Values J_{m,n}(z_j, rho) for all m, n <= nmax; shape (nmax+1, nmax+1, len(z))."""
    z = np.ascontiguousarray(z, dtype=np.complex128)
    if active_backend() == "numba":
        return _nb_jmn_table(z, float(rho), int(nmax))
    return _np_jmn_table(z, float(rho), int(nmax))


# ---------------------------------------------------------------------------
# sparse polynomial evaluation at many points
# ---------------------------------------------------------------------------

def _np_poly_eval(ps, qs, coefs, z):
    zb = np.conj(z)
    pmax = int(ps.max()) if ps.size else 0
    qmax = int(qs.max()) if qs.size else 0
    zpow = np.empty((pmax + 1,) + z.shape, dtype=np.complex128)
    zbpow = np.empty((qmax + 1,) + z.shape, dtype=np.complex128)
    zpow[0] = 1.0
    zbpow[0] = 1.0
    for p in range(1, pmax + 1):
        zpow[p] = zpow[p - 1] * z
    for q in range(1, qmax + 1):
        zbpow[q] = zbpow[q - 1] * zb
    out = np.zeros(z.shape, dtype=np.complex128)
    for t in range(ps.shape[0]):
        out += coefs[t] * zpow[ps[t]] * zbpow[qs[t]]
    return out


@njit(cache=True)
def _nb_poly_eval(ps, qs, coefs, z):
    k = z.shape[0]
    nterms = ps.shape[0]
    pmax = 0
    qmax = 0
    for t in range(nterms):
        if ps[t] > pmax:
            pmax = ps[t]
        if qs[t] > qmax:
            qmax = qs[t]
    out = np.zeros(k, dtype=np.complex128)
    zpow = np.empty(pmax + 1, dtype=np.complex128)
    zbpow = np.empty(qmax + 1, dtype=np.complex128)
    for j in range(k):
        zv = z[j]
        zb = np.conj(zv)
        zpow[0] = 1.0
        for p in range(1, pmax + 1):
            zpow[p] = zpow[p - 1] * zv
        zbpow[0] = 1.0
        for q in range(1, qmax + 1):
            zbpow[q] = zbpow[q - 1] * zb
        acc = 0.0 + 0.0j
        for t in range(nterms):
            acc += coefs[t] * zpow[ps[t]] * zbpow[qs[t]]
        out[j] = acc
    return out


def poly_eval(ps: np.ndarray, qs: np.ndarray, coefs: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Evaluate sum_t coefs[t] * z**ps[t] * conj(z)**qs[t] over a point array."""
    shape = z.shape
    zf = np.ascontiguousarray(z, dtype=np.complex128).ravel()
    ps = np.ascontiguousarray(ps, dtype=np.int64)
    qs = np.ascontiguousarray(qs, dtype=np.int64)
    coefs = np.ascontiguousarray(coefs, dtype=np.complex128)
    if ps.size == 0:
        return np.zeros(shape, dtype=np.complex128)
    if active_backend() == "numba":
        out = _nb_poly_eval(ps, qs, coefs, zf)
    else:
        out = _np_poly_eval(ps, qs, coefs, zf)
    return out.reshape(shape)


# ---------------------------------------------------------------------------
# exact-transition path recursion
# ---------------------------------------------------------------------------

def _np_ou_paths(z0, mult, std, xi):
    n_paths, n_steps = xi.shape[0], xi.shape[1]
    out = np.empty((n_paths, n_steps + 1), dtype=np.complex128)
    out[:, 0] = z0
    for k in range(n_steps):
        noise = std * (xi[:, k, 0] + 1j * xi[:, k, 1])
        out[:, k + 1] = mult * out[:, k] + noise
    return out


@njit(cache=True)
def _nb_ou_paths(z0, mult, std, xi):
    n_paths, n_steps = xi.shape[0], xi.shape[1]
    out = np.empty((n_paths, n_steps + 1), dtype=np.complex128)
    for p in range(n_paths):
        zv = z0[p]
        out[p, 0] = zv
        for k in range(n_steps):
            zv = mult * zv + std * complex(xi[p, k, 0], xi[p, k, 1])
            out[p, k + 1] = zv
    return out


def ou_paths(z0: np.ndarray, mult: complex, std: float, xi: np.ndarray) -> np.ndarray:
    """Iterate z <- mult*z + std*(xi1 + i*xi2) over pre-drawn increments.

    ``xi`` has shape (n_paths, n_steps, 2); returns (n_paths, n_steps+1)
    including the initial state.
    """
    z0 = np.ascontiguousarray(z0, dtype=np.complex128)
    xi = np.ascontiguousarray(xi, dtype=np.float64)
    if active_backend() == "numba":
        return _nb_ou_paths(z0, complex(mult), float(std), xi)
    return _np_ou_paths(z0, complex(mult), float(std), xi)


# ---------------------------------------------------------------------------
# Mehler eigen-series partial sums
# ---------------------------------------------------------------------------

def _np_mehler_series(zx, zy, log_u, c, rho, nmax, inv_norm):
    jx = _np_jmn_table(zx, rho, nmax)
    jy = _np_jmn_table(zy, rho, nmax)
    out = np.zeros(zx.shape[0], dtype=np.complex128)
    for level in range(nmax + 1):
        for m in range(level + 1):
            n = level - m
            w = np.exp((level + 1j * (m - n) * c) * log_u) * inv_norm[m, n]
            out += w * jx[m, n] * np.conj(jy[m, n])
    return out


@njit(cache=True)
def _nb_mehler_series(zx, zy, log_u, c, rho, nmax, inv_norm):
    jx = _nb_jmn_table(zx, rho, nmax)
    jy = _nb_jmn_table(zy, rho, nmax)
    k = zx.shape[0]
    out = np.zeros(k, dtype=np.complex128)
    for level in range(nmax + 1):
        for m in range(level + 1):
            n = level - m
            w = np.exp((level + 1j * (m - n) * c) * log_u) * inv_norm[m, n]
            for j in range(k):
                out[j] += w * jx[m, n, j] * np.conj(jy[m, n, j])
    return out


def mehler_series_points(
    zx: np.ndarray,
    zy: np.ndarray,
    u: float,
    c: float,
    rho: float,
    nmax: int,
) -> np.ndarray:
    """Triangular partial sums (total degree <= nmax) of the Mehler eigen-series.

    Terms are accumulated level by level so the conjugate pair (m, n), (n, m)
    always lands in the same partial sum; the result is real up to rounding.
    """
    zx = np.ascontiguousarray(zx, dtype=np.complex128)
    zy = np.ascontiguousarray(zy, dtype=np.complex128)
    fact = np.ones(nmax + 1)
    for i in range(1, nmax + 1):
        fact[i] = fact[i - 1] * i
    inv_norm = 1.0 / (np.outer(fact, fact) * float(rho) ** np.add.outer(
        np.arange(nmax + 1), np.arange(nmax + 1)))
    args = (zx, zy, float(np.log(u)), float(c), float(rho), int(nmax), inv_norm)
    if active_backend() == "numba":
        return _nb_mehler_series(*args)
    return _np_mehler_series(*args)


def warmup() -> None:
    """Trigger JIT compilation of every kernel on tiny inputs."""
    z = np.array([0.3 + 0.1j, -0.2j])
    jmn_table(z, 1.0, 2)
    poly_eval(np.array([1, 0]), np.array([0, 1]), np.array([1.0 + 0j, 2.0 + 0j]), z)
    ou_paths(z, 0.9 - 0.1j, 0.5, np.zeros((2, 3, 2)))
    mehler_series_points(z, z, 0.5, 1.0, 1.0, 3)
