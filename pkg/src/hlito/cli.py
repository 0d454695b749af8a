"""Command-line interface.

Every subcommand resolves its parameters from (in increasing precedence)
built-in defaults, an optional ``--config key=value`` file, and explicit
flags; the env var ``HLITO_SEED`` overrides any seed.  Outputs are JSON or
CSV with the resolved configuration and library version embedded, and are
byte-identical across runs with identical flags and seed.

Exit codes: 0 success, 1 validation error, 2 numerical check failure in
``--check`` mode.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .expansion import build_grid, expand, inner_product
from .mehler import MehlerPoint, mehler_kernel, mehler_series
from .poly import ComplexPoly, OUParams, hlito
from .simulate import (
    LatticeModel,
    lattice_decompose,
    lattice_simulate_and_reassemble,
    sample_ou,
    semigroup_mc,
)
from .spectral import det_m, spectrum


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; the contract here is 1
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _read_config(path: str) -> list[str]:
    """Turn a flat key=value file into an argv prefix."""
    argv: list[str] = []
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"bad config line (expected key=value): {line!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            flag = "--" + key.replace("_", "-")
            if value.lower() in ("true", "false"):
                if value.lower() == "true":
                    argv.append(flag)
            else:
                argv.extend([flag, value])
    return argv


def _resolved_config(args: argparse.Namespace) -> dict:
    skip = {"func", "config", "out"}
    out = {}
    for key, value in vars(args).items():
        if key in skip:
            continue
        if isinstance(value, (np.floating, np.integer)):
            value = value.item()
        out[key] = value
    return out


def _emit_json(args, result: dict) -> None:
    payload = {
        "version": __version__,
        "config": _resolved_config(args),
        "result": result,
    }
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    _write(args, text)


def _emit_csv(args, header: str, rows: list[str]) -> None:
    cfg = " ".join(
        f"{k}={v}" for k, v in sorted(_resolved_config(args).items())
    )
    text = f"# hlito version={__version__} {cfg}\n" + header + "\n"
    text += "".join(row + "\n" for row in rows)
    _write(args, text)


def _write(args, text: str) -> None:
    if getattr(args, "out", None):
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _complex_pair(value: str) -> tuple[float, float]:
    parts = value.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected RE,IM, got {value!r}")
    return float(parts[0]), float(parts[1])


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_poly(args) -> int:
    p = hlito(args.m, args.n, args.rho)
    if args.format == "json":
        _emit_json(args, p.to_json_dict())
    else:
        rows = [
            f"{pp},{qq},{c.real!r},{c.imag!r}" for (pp, qq), c in p.sorted_terms()
        ]
        _emit_csv(args, "p,q,re,im", rows)
    return 0


def _cmd_spectrum(args) -> int:
    params = OUParams(r=args.r, omega=args.omega, sigma2=args.sigma2)
    listing = [
        {"m": idx.m, "n": idx.n, "re": ev.real, "im": ev.imag}
        for idx, ev in spectrum(params, args.max_level)
    ]
    _emit_json(args, {"eigenvalues": listing})
    return 0


def _cmd_detm(args) -> int:
    lam = complex(*args.lam)
    direct, product = det_m(args.l, lam)
    err = abs(direct - product)
    _emit_json(
        args,
        {
            "direct": [direct.real, direct.imag],
            "product": [product.real, product.imag],
            "abs_err": err,
        },
    )
    if args.check and err > args.tol * max(1.0, abs(product)):
        print(f"detm check failed: |direct - product| = {err}", file=sys.stderr)
        return 2
    return 0


def _mehler_points(args) -> list[tuple[np.ndarray, np.ndarray]]:
    if args.points_file:
        pts = []
        with open(args.points_file) as fh:
            for line in fh:
                line = line.split("#", 1)[0].strip()
                if not line or line.startswith("x1"):
                    continue
                x1, x2, y1, y2 = (float(v) for v in line.split(","))
                pts.append((np.array([x1, x2]), np.array([y1, y2])))
        return pts
    rng = np.random.Generator(np.random.Philox(key=np.uint64(args.seed)))
    return [
        (rng.uniform(-2, 2, 2), rng.uniform(-2, 2, 2)) for _ in range(args.n_points)
    ]


def _cmd_mehler(args) -> int:
    params = OUParams(r=1.0, omega=args.c, sigma2=args.rho / 2.0)
    rows = []
    worst = 0.0
    for x, y in _mehler_points(args):
        pt = MehlerPoint(u=args.u, x=(x[0], x[1]), y=(y[0], y[1]))
        kern = mehler_kernel(pt, params)
        ser = mehler_series(pt, params, args.nmax)
        err = abs(ser - kern)
        worst = max(worst, err / kern)
        rows.append(
            f"{args.u!r},{x[0]!r},{x[1]!r},{y[0]!r},{y[1]!r},"
            f"{kern!r},{ser.real!r},{ser.imag!r},{err!r}"
        )
    _emit_csv(args, "u,x1,x2,y1,y2,kernel,series_re,series_im,abs_err", rows)
    if args.check and worst > args.tol:
        print(f"mehler check failed: worst rel err {worst}", file=sys.stderr)
        return 2
    return 0


def _cmd_ortho(args) -> int:
    grid = build_grid(args.nodes, args.rho)
    indices = [
        (m, s - m) for s in range(args.max_level + 1) for m in range(s + 1)
    ]
    polys = {mn: hlito(mn[0], mn[1], args.rho) for mn in indices}
    rows = []
    worst = 0.0
    for m, n in indices:
        for k, l in indices:
            val = inner_product(polys[(m, n)], polys[(k, l)], grid)
            rows.append(f"{m},{n},{k},{l},{val.real!r},{val.imag!r}")
            norm_a = math.factorial(m) * math.factorial(n) * args.rho ** (m + n)
            norm_b = math.factorial(k) * math.factorial(l) * args.rho ** (k + l)
            expected = norm_a if (m, n) == (k, l) else 0.0
            worst = max(worst, abs(val - expected) / math.sqrt(norm_a * norm_b))
    _emit_csv(args, "m,n,k,l,re,im", rows)
    if args.check and worst > args.tol:
        print(f"ortho check failed: worst scaled residual {worst}", file=sys.stderr)
        return 2
    return 0


def _cmd_expand(args) -> int:
    if args.poly.startswith("@"):
        with open(args.poly[1:]) as fh:
            data = json.load(fh)
    else:
        data = json.loads(args.poly)
    target = ComplexPoly.from_json_dict(data)
    grid = build_grid(args.nodes, args.rho)
    coeffs = expand(target, args.max_level, grid, args.rho)
    result = {
        f"{idx.m},{idx.n}": [a.real, a.imag]
        for idx, a in sorted(coeffs.items())
    }
    _emit_json(args, {"coefficients": result})
    return 0


def _cmd_simulate(args) -> int:
    params = OUParams(r=args.r, omega=args.omega, sigma2=args.sigma2)
    ens = sample_ou(
        params,
        complex(*args.z0),
        args.dt,
        args.steps,
        args.paths,
        args.seed,
        method=args.method,
    )
    final = ens.paths[:, -1]
    result = {
        "final_mean": [final.mean().real, final.mean().imag],
        "final_abs2_mean": float(np.mean(np.abs(final) ** 2)),
        "n_paths": ens.n_paths,
        "n_states": ens.n_states,
    }
    if args.ensemble_out:
        ens.save(args.ensemble_out)
        result["ensemble_file"] = args.ensemble_out
    if args.csv_out:
        ens.to_csv(args.csv_out)
        result["csv_file"] = args.csv_out
    failed = False
    if args.check_semigroup:
        m, n = (int(v) for v in args.check_semigroup.split(","))
        t = args.dt * args.steps
        est, se = semigroup_mc(
            m, n, t, complex(*args.z0), params, args.paths, args.seed
        )
        idx_ev = complex(-(m + n) * params.r, -(m - n) * params.omega)
        truth = np.exp(idx_ev * t) * hlito(m, n, params.rho).eval(complex(*args.z0))
        dev = max(abs(est.real - truth.real), abs(est.imag - truth.imag))
        result["semigroup_check"] = {
            "m": m,
            "n": n,
            "estimate": [est.real, est.imag],
            "expected": [truth.real, truth.imag],
            "stderr": se,
            "deviation_se": dev / se if se > 0 else 0.0,
        }
        failed = se > 0 and dev > 3.0 * se
    _emit_json(args, result)
    if failed:
        print("simulate check failed: semigroup estimate off by > 3 SE", file=sys.stderr)
        return 2
    return 0


def _cmd_lattice(args) -> int:
    model = LatticeModel(n=args.n, a=args.a, b=args.b, r=args.r, sigma2=args.sigma2)
    blocks, q_mat = lattice_decompose(model)
    coupling = model.coupling_matrix()
    normality = float(
        np.max(np.abs(coupling @ coupling.T - coupling.T @ coupling))
    )
    block_eigs = sorted(
        (ev for blk in blocks for ev in blk.eigenvalues()),
        key=lambda v: (v.real, v.imag),
    )
    dense_eigs = sorted(
        np.linalg.eigvals(model.drift_matrix()), key=lambda v: (v.real, v.imag)
    )
    eig_err = float(
        max(abs(a - b) for a, b in zip(block_eigs, dense_eigs))
    )
    rng = np.random.Generator(np.random.Philox(key=np.uint64(args.seed)))
    x0 = rng.standard_normal(model.n)
    direct, reassembled = lattice_simulate_and_reassemble(
        model, x0, args.dt, args.steps, args.seed
    )
    reassembly_err = float(np.max(np.abs(direct - reassembled)))
    result = {
        "blocks": [
            {"k": blk.k, "alpha": blk.alpha, "beta": blk.beta, "size": blk.size}
            for blk in blocks
        ],
        "normality_residual": normality,
        "eigenvalue_max_err": eig_err,
        "reassembly_max_err": reassembly_err,
    }
    _emit_json(args, result)
    if args.check and (
        normality > 1e-12 or eig_err > 1e-10 or reassembly_err > 1e-10
    ):
        print("lattice check failed", file=sys.stderr)
        return 2
    return 0


# ---------------------------------------------------------------------------
# parser assembly
# ---------------------------------------------------------------------------

def _add_common(sp, seed=False):
    sp.add_argument("--config", help="flat key=value file mirroring the flags")
    sp.add_argument("--out", help="output file (default: stdout)")
    sp.add_argument("--threads", type=int, default=1,
                    help="parallelism hint; results do not depend on it")
    if seed:
        sp.add_argument("--seed", type=int, default=0)


def build_parser() -> _Parser:
    parser = _Parser(prog="hlito", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("poly", help="eigenpolynomial coefficients")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--rho", type=float, default=1.0)
    sp.add_argument("--format", choices=("json", "table"), default="json")
    _add_common(sp)
    sp.set_defaults(func=_cmd_poly)

    sp = sub.add_parser("spectrum", help="generator eigenvalues by level")
    sp.add_argument("--r", type=float, required=True)
    sp.add_argument("--omega", type=float, required=True)
    sp.add_argument("--sigma2", type=float, default=1.0)
    sp.add_argument("--max-level", type=int, default=3)
    _add_common(sp)
    sp.set_defaults(func=_cmd_spectrum)

    sp = sub.add_parser("detm", help="tridiagonal determinant two ways")
    sp.add_argument("--l", type=int, required=True)
    sp.add_argument("--lam", type=_complex_pair, required=True, metavar="RE,IM")
    sp.add_argument("--check", action="store_true")
    sp.add_argument("--tol", type=float, default=1e-10)
    _add_common(sp)
    sp.set_defaults(func=_cmd_detm)

    sp = sub.add_parser("mehler", help="kernel vs eigen-series scan")
    sp.add_argument("--u", type=float, required=True)
    sp.add_argument("--rho", type=float, default=1.0)
    sp.add_argument("--c", type=float, default=0.0)
    sp.add_argument("--nmax", type=int, default=40)
    sp.add_argument("--points-file", help="CSV of x1,x2,y1,y2 rows")
    sp.add_argument("--n-points", type=int, default=20)
    sp.add_argument("--check", action="store_true")
    sp.add_argument("--tol", type=float, default=1e-6)
    _add_common(sp, seed=True)
    sp.set_defaults(func=_cmd_mehler)

    sp = sub.add_parser("ortho", help="Gram matrix of the eigenbasis")
    sp.add_argument("--max-level", type=int, default=4)
    sp.add_argument("--rho", type=float, default=1.0)
    sp.add_argument("--nodes", type=int, default=80)
    sp.add_argument("--check", action="store_true")
    sp.add_argument("--tol", type=float, default=1e-8)
    _add_common(sp)
    sp.set_defaults(func=_cmd_ortho)

    sp = sub.add_parser("expand", help="expansion coefficients of a polynomial")
    sp.add_argument("--poly", required=True,
                    help="polynomial JSON, inline or @file")
    sp.add_argument("--max-level", type=int, default=6)
    sp.add_argument("--rho", type=float, default=1.0)
    sp.add_argument("--nodes", type=int, default=80)
    _add_common(sp)
    sp.set_defaults(func=_cmd_expand)

    sp = sub.add_parser("simulate", help="sample an OU ensemble")
    sp.add_argument("--r", type=float, default=1.0)
    sp.add_argument("--omega", type=float, default=1.0)
    sp.add_argument("--sigma2", type=float, default=1.0)
    sp.add_argument("--z0", type=_complex_pair, default=(1.0, 0.0), metavar="RE,IM")
    sp.add_argument("--dt", type=float, default=0.1)
    sp.add_argument("--steps", type=int, default=10)
    sp.add_argument("--paths", type=int, default=1000)
    sp.add_argument("--method", choices=("exact", "euler"), default="exact")
    sp.add_argument("--ensemble-out", help="binary ensemble output file")
    sp.add_argument("--csv-out", help="CSV trajectory output file")
    sp.add_argument("--check-semigroup", metavar="M,N",
                    help="verify the Monte Carlo semigroup action on J_{M,N}")
    _add_common(sp, seed=True)
    sp.set_defaults(func=_cmd_simulate)

    sp = sub.add_parser("lattice", help="circle-lattice decomposition and reassembly")
    sp.add_argument("--n", type=int, default=6)
    sp.add_argument("--a", type=float, default=2.0)
    sp.add_argument("--b", type=float, default=1.0)
    sp.add_argument("--r", type=float, default=1.0)
    sp.add_argument("--sigma2", type=float, default=1.0)
    sp.add_argument("--dt", type=float, default=0.05)
    sp.add_argument("--steps", type=int, default=100)
    sp.add_argument("--check", action="store_true")
    _add_common(sp, seed=True)
    sp.set_defaults(func=_cmd_lattice)

    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    # a config file contributes flags at lower precedence than the real argv
    if "--config" in argv:
        cfg_path = argv[argv.index("--config") + 1]
        command, rest = argv[0], argv[1:]
        argv = [command] + _read_config(cfg_path) + rest
    try:
        args = parser.parse_args(argv)
        if hasattr(args, "seed") and "HLITO_SEED" in os.environ:
            args.seed = int(os.environ["HLITO_SEED"])
        return args.func(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 0
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"hlito: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
