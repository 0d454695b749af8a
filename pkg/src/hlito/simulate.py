"""Monte Carlo dynamics: exact OU sampling, martingale checks, lattice diffusions.

The complex OU process dZ = -(r + i*omega) Z dt + sqrt(2 sigma2) d(zeta)
has a Gaussian transition kernel known in closed form, so paths are
sampled with zero discretization bias:

    Z_{t+dt} = exp(-(r + i*omega) dt) Z_t + G,

with G complex Gaussian, independent real/imaginary parts of variance
(sigma2/r) (1 - exp(-2 r dt)) each.  An Euler-Maruyama mode exists behind
``method="euler"`` for comparison only.

Randomness comes from numpy's counter-based Philox generator keyed by the
user seed; all increments for an ensemble are drawn as one
(n_paths, n_steps, 2) block in C order before any path arithmetic, so
path p always sees the same increments regardless of how many paths
follow it, of execution order, and of thread count.  Regeneration from
(seed, params, dt, n_steps, n_paths) is bit-identical.

Ensembles serialize to a small binary format (struct header + raw
float64 payload, documented in :meth:`PathEnsemble.save`) and to CSV.
"""
from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .poly import OUParams, hlito

__all__ = [
    "PathEnsemble",
    "LatticeModel",
    "LatticeBlock",
    "sample_ou",
    "sample_stationary",
    "semigroup_mc",
    "complex_bm_martingale",
    "lattice_decompose",
    "lattice_simulate_and_reassemble",
]

_MAGIC = b"HLITOENS"
_VERSION = 1
_HEADER = struct.Struct("<8sIQQdqddd")


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=np.uint64(seed)))


@dataclass(frozen=True)
class PathEnsemble:
    """A batch of simulated complex trajectories plus the metadata that made them."""

    paths: np.ndarray = field(repr=False)  # (n_paths, n_steps + 1) complex
    dt: float
    seed: int
    params: OUParams

    def __post_init__(self):
        self.paths.setflags(write=False)

    @property
    def n_paths(self) -> int:
        return self.paths.shape[0]

    @property
    def n_states(self) -> int:
        return self.paths.shape[1]

    @property
    def t_grid(self) -> np.ndarray:
        return np.arange(self.n_states) * self.dt

    def save(self, path) -> None:
        """Write the binary layout: header then row-major float64 (re, im) pairs.

        Header (little endian): magic ``HLITOENS`` (8 bytes), version
        uint32, n_paths uint64, n_states uint64, dt float64, seed int64,
        r/omega/sigma2 float64 each.  Payload: paths[p, k] as two float64.
        """
        header = _HEADER.pack(
            _MAGIC,
            _VERSION,
            self.n_paths,
            self.n_states,
            self.dt,
            self.seed,
            self.params.r,
            self.params.omega,
            self.params.sigma2,
        )
        flat = np.empty((self.n_paths, self.n_states, 2), dtype="<f8")
        flat[:, :, 0] = self.paths.real
        flat[:, :, 1] = self.paths.imag
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(flat.tobytes())

    @classmethod
    def load(cls, path) -> "PathEnsemble":
        with open(path, "rb") as fh:
            header = fh.read(_HEADER.size)
            magic, version, n_paths, n_states, dt, seed, r, omega, sigma2 = (
                _HEADER.unpack(header)
            )
            if magic != _MAGIC:
                raise ValueError(f"not an ensemble file (magic {magic!r})")
            if version != _VERSION:
                raise ValueError(f"unsupported ensemble version {version}")
            payload = np.frombuffer(fh.read(), dtype="<f8")
        flat = payload.reshape(n_paths, n_states, 2)
        return cls(
            paths=flat[:, :, 0] + 1j * flat[:, :, 1],
            dt=dt,
            seed=seed,
            params=OUParams(r=r, omega=omega, sigma2=sigma2),
        )

    def to_csv(self, path) -> None:
        """Plain CSV (path, step, t, re, im); intended for small runs."""
        with open(path, "w", newline="") as fh:
            fh.write("path,step,t,re,im\n")
            for p in range(self.n_paths):
                for k in range(self.n_states):
                    z = self.paths[p, k]
                    fh.write(f"{p},{k},{k * self.dt!r},{z.real!r},{z.imag!r}\n")


def _transition(params: OUParams, dt: float, method: str) -> tuple[complex, float]:
    # one-step multiplier and per-coordinate noise std
    alpha = complex(params.r, params.omega)
    if method == "exact":
        mult = np.exp(-alpha * dt)
        var = (params.sigma2 / params.r) * (1.0 - math.exp(-2.0 * params.r * dt))
    elif method == "euler":
        mult = 1.0 - alpha * dt
        var = 2.0 * params.sigma2 * dt
    else:
        raise ValueError(f"unknown method {method!r}")
    return complex(mult), math.sqrt(var)


def sample_ou(
    params: OUParams,
    z0,
    dt: float,
    n_steps: int,
    n_paths: int,
    seed: int,
    method: str = "exact",
) -> PathEnsemble:
    """Sample an ensemble of OU paths; ``z0`` is a complex scalar or (n_paths,) array."""
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if n_steps < 1 or n_paths < 1:
        raise ValueError("n_steps and n_paths must be positive")
    z0_arr = np.broadcast_to(np.asarray(z0, dtype=complex), (n_paths,)).copy()
    mult, std = _transition(params, dt, method)
    xi = _rng(seed).standard_normal((n_paths, n_steps, 2))
    paths = _kernels.ou_paths(z0_arr, mult, std, xi)
    return PathEnsemble(paths=paths, dt=float(dt), seed=int(seed), params=params)


def sample_stationary(params: OUParams, n: int, seed: int) -> np.ndarray:
    """Draw n points from the stationary measure (per-coordinate variance rho/2)."""
    xi = _rng(seed).standard_normal((n, 2))
    scale = math.sqrt(params.rho / 2.0)
    return scale * (xi[:, 0] + 1j * xi[:, 1])


def _mc_mean_stderr(samples: np.ndarray) -> tuple[complex, float]:
    est = complex(samples.mean())
    n = samples.size
    se_re = samples.real.std(ddof=1) / math.sqrt(n)
    se_im = samples.imag.std(ddof=1) / math.sqrt(n)
    return est, float(max(se_re, se_im))


def semigroup_mc(
    m: int,
    n: int,
    t: float,
    z0,
    params: OUParams,
    n_paths: int,
    seed: int,
) -> tuple[complex, float]:
    """Monte Carlo estimate of E[J_{m,n}(Z_t) | Z_0 = z0], with its standard error.

    One exact transition step jumps directly to time t.  ``z0`` may be a
    scalar or an (n_paths,) array (for stationary starts).  The estimate
    converges to exp(-((m+n) r + i (m-n) omega) t) * J_{m,n}(z0).
    """
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    z0_arr = np.broadcast_to(np.asarray(z0, dtype=complex), (n_paths,))
    mult, std = _transition(params, t, "exact")
    xi = _rng(seed).standard_normal((n_paths, 2))
    z_t = mult * z0_arr + std * (xi[:, 0] + 1j * xi[:, 1])
    samples = hlito(m, n, params.rho).eval(z_t)
    if m == 0 and n == 0:
        return 1.0 + 0.0j, 0.0
    return _mc_mean_stderr(samples)


def complex_bm_martingale(
    m: int, n: int, t: float, n_paths: int, seed: int
) -> tuple[complex, float]:
    """Ensemble mean of the complex-BM martingale F_{m,n} at time t.

    F_{m,n}(zeta_t) = ((-1)^(m n minimum) / (m! n!)) * J_{m,n}(zeta_t, 2t),
    where zeta is a complex Brownian motion started at 0 (independent
    standard components, E|zeta_t|^2 = 2t).  Being a martingale from 0,
    the expectation is 0 for every (m, n) != (0, 0).
    """
    if m == 0 and n == 0:
        raise ValueError("(m, n) = (0, 0) is the constant 1, not a test case")
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    xi = _rng(seed).standard_normal((n_paths, 2))
    zeta = math.sqrt(t) * (xi[:, 0] + 1j * xi[:, 1])
    scale = (-1) ** min(m, n) / (math.factorial(m) * math.factorial(n))
    samples = scale * hlito(m, n, 2.0 * t).eval(zeta)
    return _mc_mean_stderr(samples)


# ---------------------------------------------------------------------------
# circle-lattice coupling diffusion
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LatticeModel:
    """Coupled diffusion on the circle lattice with circulant coupling.

    The coupling matrix has first row (-(a+b), a, 0, ..., 0, b); the full
    drift is (coupling - r I).  The coupling matrix is normal (it commutes
    with its transpose), hence orthogonally similar to a block-diagonal
    matrix of rotation-scaling 2x2 blocks plus 1x1 blocks.
    """

    n: int
    a: float
    b: float
    r: float
    sigma2: float

    def __post_init__(self):
        if self.n < 3:
            raise ValueError(f"n must be >= 3, got {self.n}")
        if not self.r > 0:
            raise ValueError(f"r must be positive, got {self.r}")
        if not self.sigma2 > 0:
            raise ValueError(f"sigma2 must be positive, got {self.sigma2}")

    def coupling_matrix(self) -> np.ndarray:
        first_row = np.zeros(self.n)
        first_row[0] = -(self.a + self.b)
        first_row[1] = self.a
        first_row[-1] = self.b
        mat = np.empty((self.n, self.n))
        for i in range(self.n):
            mat[i] = np.roll(first_row, i)
        return mat

    def drift_matrix(self) -> np.ndarray:
        return self.coupling_matrix() - self.r * np.eye(self.n)


@dataclass(frozen=True)
class LatticeBlock:
    """One invariant block of the lattice drift: columns [offset, offset+size)."""

    k: int
    alpha: float  # drift eigenvalue real part
    beta: float  # drift eigenvalue imaginary part; 0 for 1x1 blocks
    size: int
    offset: int

    def eigenvalues(self) -> list[complex]:
        if self.size == 1:
            return [complex(self.alpha)]
        return [complex(self.alpha, self.beta), complex(self.alpha, -self.beta)]

    def matrix(self) -> np.ndarray:
        if self.size == 1:
            return np.array([[self.alpha]])
        return np.array([[self.alpha, self.beta], [-self.beta, self.alpha]])

    def propagator(self, dt: float) -> np.ndarray:
        """exp(dt * matrix): scaling by exp(alpha dt) composed with rotation by beta dt."""
        decay = math.exp(self.alpha * dt)
        if self.size == 1:
            return np.array([[decay]])
        ct, st = math.cos(self.beta * dt), math.sin(self.beta * dt)
        return decay * np.array([[ct, st], [-st, ct]])

    def noise_std(self, dt: float, sigma2: float) -> float:
        """Per-coordinate std of the exact transition noise over one step."""
        if self.alpha == 0.0:
            return math.sqrt(2.0 * sigma2 * dt)
        var = sigma2 * (math.exp(2.0 * self.alpha * dt) - 1.0) / self.alpha
        return math.sqrt(var)


def lattice_decompose(model: LatticeModel) -> tuple[list[LatticeBlock], np.ndarray]:
    """Blocks of the drift (coupling - r I) and the real orthogonal transform Q.

    Block k has diagonal -r + (a+b)(cos(2 pi k / n) - 1) and off-diagonal
    +/- (a-b) sin(2 pi k / n); k = 0 (and k = n/2 for even n) degenerate to
    1x1.  Q's columns are the normalized real and imaginary parts of the
    Fourier eigenvectors, so Q' (C - rI) Q is exactly block diagonal.
    """
    n, a, b, r = model.n, model.a, model.b, model.r
    q_cols = []
    blocks = []
    idx = np.arange(n)
    for k in range(n // 2 + 1):
        angle = 2.0 * math.pi * k / n
        alpha = -r + (a + b) * (math.cos(angle) - 1.0)
        beta = (a - b) * math.sin(angle)
        phase = 2.0 * math.pi * k * idx / n
        if k == 0 or (n % 2 == 0 and k == n // 2):
            col = np.cos(phase) / math.sqrt(n)
            blocks.append(
                LatticeBlock(k=k, alpha=alpha, beta=0.0, size=1, offset=len(q_cols))
            )
            q_cols.append(col)
        else:
            re = np.cos(phase) * math.sqrt(2.0 / n)
            im = np.sin(phase) * math.sqrt(2.0 / n)
            blocks.append(
                LatticeBlock(k=k, alpha=alpha, beta=beta, size=2, offset=len(q_cols))
            )
            q_cols.append(re)
            q_cols.append(im)
    return blocks, np.column_stack(q_cols)


def lattice_simulate_and_reassemble(
    model: LatticeModel, x0, dt: float, n_steps: int, seed: int
) -> tuple[np.ndarray, np.ndarray]:
    """Simulate the n-dimensional lattice SDE twice from the same Gaussian draws.

    The direct route propagates the full state with the dense one-step
    transition (exact, assembled from the block decomposition); the
    reassembled route simulates each 1-D/2-D block separately in Fourier
    coordinates and maps back through Q.  Both trajectories, shape
    (n_steps + 1, n), agree to rounding because the same draws feed both.
    """
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != (model.n,):
        raise ValueError(f"x0 must have shape ({model.n},), got {x0.shape}")
    blocks, q_mat = lattice_decompose(model)

    prop = np.zeros((model.n, model.n))
    stds = np.zeros(model.n)
    for blk in blocks:
        sl = slice(blk.offset, blk.offset + blk.size)
        prop[sl, sl] = blk.propagator(dt)
        stds[blk.offset : blk.offset + blk.size] = blk.noise_std(dt, model.sigma2)
    full_prop = q_mat @ prop @ q_mat.T
    full_noise = q_mat @ np.diag(stds) @ q_mat.T

    xi = _rng(seed).standard_normal((n_steps, model.n))

    direct = np.empty((n_steps + 1, model.n))
    direct[0] = x0
    for j in range(n_steps):
        direct[j + 1] = full_prop @ direct[j] + full_noise @ xi[j]

    y = np.empty((n_steps + 1, model.n))
    y[0] = q_mat.T @ x0
    eta = xi @ q_mat  # row j is Q' xi[j]
    for j in range(n_steps):
        for blk in blocks:
            sl = slice(blk.offset, blk.offset + blk.size)
            y[j + 1, sl] = blk.propagator(dt) @ y[j, sl] + blk.noise_std(
                dt, model.sigma2
            ) * eta[j, sl]
    reassembled = y @ q_mat.T

    return direct, reassembled
