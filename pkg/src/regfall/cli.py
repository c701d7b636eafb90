"""Command-line front end: ``regfall <subcommand> ...``.

Exit codes: 0 on success, 1 when a verification fails, 2 on usage errors
(including inputs the library refuses, such as a degenerate path).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import cz_local
from . import hamiltonian as ham
from . import lagrangian as lag
from . import regularization as reg
from . import verify
from .errors import RegFallError


class UsageError(Exception):
    """Invalid flag value; the message names the flag."""


@dataclass
class RunConfig:
    k: int | None = None
    modes: int | None = None
    n_max: int | None = None
    samples: int = 2048
    exclusion: float = reg.DEFAULT_EXCLUSION
    zero_tol: float = 1e-9
    cluster_tol: float = 1e-7
    fd_step: float = 1e-5
    fmt: str = "json"
    output: str | None = None
    seed: int = 0

    def resolve(self) -> "RunConfig":
        if self.k is not None:
            if self.k < 1:
                raise UsageError(f"--k must be a positive integer, got {self.k}")
            if self.modes is None:
                self.modes = max(16, 4 * self.k)
            if self.n_max is None:
                self.n_max = 10 * self.k
            if self.modes < self.k:
                raise UsageError(f"--modes must be >= k={self.k}, got {self.modes}")
            if self.n_max < self.k:
                raise UsageError(f"--n-max must be >= k={self.k}, got {self.n_max}")
        if self.modes is not None and self.modes < 1:
            raise UsageError(f"--modes must be positive, got {self.modes}")
        if self.samples < 2:
            raise UsageError(f"--samples must be at least 2, got {self.samples}")
        if not 0.0 <= self.exclusion < 0.5:
            raise UsageError(f"--exclusion must lie in [0, 0.5), got {self.exclusion}")
        for name in ("zero_tol", "cluster_tol", "fd_step"):
            if not getattr(self, name) > 0:
                raise UsageError(f"--{name.replace('_', '-')} must be positive")
        return self


def _threads() -> int:
    raw = os.environ.get("REGFALL_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise UsageError(f"REGFALL_THREADS must be an integer, got {raw!r}")


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=True) + "\n"


def _flat_csv(d: dict) -> str:
    lines = ["key,value"]
    for key, val in d.items():
        if isinstance(val, float):
            lines.append(f"{key},{val:.17g}")
        elif isinstance(val, (int, str)):
            lines.append(f"{key},{val}")
        else:
            lines.append(f"{key},{json.dumps(val)}")
    return "\n".join(lines) + "\n"


def _emit(text: str, cfg: RunConfig):
    if cfg.output:
        Path(cfg.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# -- subcommands ----------------------------------------------------------

def cmd_critical_point(args, cfg):
    if args.space == "hamiltonian":
        data = ham.critical_point_ham(cfg.k).to_json()
        data["action"] = ham.action_AH(ham.critical_point_ham(cfg.k))
    else:
        data = lag.critical_point(cfg.k).to_json()
        data["action"] = lag.action_B(lag.critical_point(cfg.k).x)
    _emit(_dump_json(data) if cfg.fmt == "json" else _flat_csv(data), cfg)
    return 0


def cmd_spectrum(args, cfg):
    if args.side == "lag":
        if args.numeric:
            entries = lag.lag_spectrum_numeric(cfg.k, cfg.modes)
        else:
            entries = lag.lag_spectrum(cfg.k, cfg.n_max)
    elif args.numeric:
        entries = ham.ham_spectrum_numeric(cfg.k, cfg.modes)
    else:
        entries = ham.ham_spectrum_closed(cfg.k, cfg.n_max)
    if cfg.fmt == "csv":
        _emit(ham.spectrum_csv(entries), cfg)
    else:
        _emit(_dump_json({"k": cfg.k, "side": args.side, "numeric": bool(args.numeric),
                          "entries": [e.to_json() for e in entries]}), cfg)
    return 0


def cmd_index(args, cfg):
    rep = ham.cz_index(cfg.k, "numeric" if args.numeric else "closed_form",
                       N=cfg.modes if args.numeric else None)
    data = rep.to_json()
    _emit(_dump_json(data) if cfg.fmt == "json" else _flat_csv(data), cfg)
    if not rep.consistent:
        print(f"index mismatch: cz_can={rep.cz_can} morse={rep.morse}", file=sys.stderr)
        return 1
    return 0


def cmd_physical(args, cfg):
    cp = lag.critical_point(cfg.k)
    orbit = reg.rescale_square(cp.x, cfg.samples, cfg.exclusion)
    if cfg.fmt == "csv":
        _emit(orbit.to_csv(), cfg)
        side = args.sidecar or (str(Path(cfg.output).with_suffix(".json")) if cfg.output else None)
        if side:
            Path(side).write_text(_dump_json(orbit.sidecar()), encoding="utf-8")
    else:
        data = orbit.sidecar()
        data.update(t=orbit.grid.tolist(), q=orbit.q.tolist(),
                    q_dot=[None if np.isnan(v) else float(v) for v in orbit.q_dot],
                    is_near_collision=[bool(v) for v in orbit.near_collision])
        _emit(_dump_json(data), cfg)
    return 0


def cmd_cz_local(args, cfg):
    try:
        raw = Path(args.path).read_text(encoding="utf-8")
        path = cz_local.SymmetricPath.from_json(json.loads(raw))
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        raise UsageError(f"--path: cannot read a symmetric path from {args.path}: {exc}")
    except ValueError as exc:
        raise UsageError(f"--path: {exc}")
    N = cfg.modes or 16
    window = tuple(args.window) if args.window else None
    entries = cz_local.spectrum_with_winding(path, N, window)
    alpha, parity, cz = cz_local.index_from_spectrum(entries, cz_local.zero_tol(path))
    if cfg.fmt == "csv":
        _emit(ham.spectrum_csv(entries), cfg)
    else:
        _emit(_dump_json({"modes": N, "alpha": alpha, "parity": parity, "cz": cz,
                          "spectrum": [e.to_json() for e in entries]}), cfg)
    return 0


def cmd_verify(args, cfg):
    kmax = args.kmax
    if kmax < 1:
        raise UsageError(f"--kmax must be positive, got {kmax}")
    suites = ["core", "spectra", "regularization"] if args.suite == "all" else [args.suite]
    with ThreadPoolExecutor(max_workers=min(_threads(), len(suites))) as pool:
        parts = list(pool.map(lambda s: verify.run_suite(s, kmax=kmax, seed=cfg.seed), suites))
    results = sorted((r for part in parts for r in part), key=lambda r: int(r.cid))
    for r in results:
        print(r.line(), file=sys.stderr)
    ok = all(r.passed for r in results)
    if cfg.fmt == "csv":
        lines = ["id,title,passed,detail"]
        lines += [f'{r.cid},{r.title},{int(r.passed)},"{r.detail}"' for r in results]
        text = "\n".join(lines) + "\n"
    else:
        text = _dump_json({"suite": args.suite, "kmax": kmax, "seed": cfg.seed, "passed": ok,
                           "criteria": [{k: v for k, v in r.to_json().items() if k != "seconds"}
                                        for r in results]})
    _emit(text, cfg)
    return 0 if ok else 1


# -- parser ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    common.add_argument("--format", choices=("json", "csv"), default=None)
    common.add_argument("--output", default=None, help="write to this file instead of stdout")

    p = argparse.ArgumentParser(prog="regfall",
                                description="Spectral computations for the regularized free fall.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("critical-point", parents=[common], help="critical loop of mode k")
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--space", choices=("lagrangian", "hamiltonian"), default="lagrangian")
    c.set_defaults(func=cmd_critical_point)

    s = sub.add_parser("spectrum", parents=[common], help="Hessian spectrum at x_k or (x_k, y_k)")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--side", choices=("lag", "ham"), default="ham")
    s.add_argument("--numeric", action="store_true", help="eigenvalues of the truncated matrix")
    s.add_argument("--modes", type=int, default=None, help="truncation N (default max(16, 4k))")
    s.add_argument("--n-max", type=int, default=None, help="closed-form modes (default 10k)")
    s.set_defaults(func=cmd_spectrum)

    i = sub.add_parser("index", parents=[common], help="Morse and Conley-Zehnder indices")
    i.add_argument("--k", type=int, required=True)
    i.add_argument("--numeric", action="store_true")
    i.add_argument("--modes", type=int, default=None)
    i.set_defaults(func=cmd_index)

    ph = sub.add_parser("physical", parents=[common], help="physical orbit of x_k")
    ph.add_argument("--k", type=int, required=True)
    ph.add_argument("--samples", type=int, default=2048)
    ph.add_argument("--exclusion", type=float, default=reg.DEFAULT_EXCLUSION)
    ph.add_argument("--sidecar", default=None, help="path of the JSON sidecar (csv output)")
    ph.set_defaults(func=cmd_physical, default_format="csv")

    z = sub.add_parser("cz-local", parents=[common], help="CZ index of a symmetric path")
    z.add_argument("--path", required=True, help='JSON file {"grid": [...], "S": [...]}')
    z.add_argument("--modes", type=int, default=16)
    z.add_argument("--window", type=float, nargs=2, default=None, metavar=("LO", "HI"))
    z.set_defaults(func=cmd_cz_local)

    v = sub.add_parser("verify", parents=[common], help="run the acceptance checks")
    v.add_argument("--suite", choices=("core", "spectra", "regularization", "all"), default="all")
    v.add_argument("--kmax", type=int, default=10)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(k=getattr(args, "k", None), modes=getattr(args, "modes", None),
                    n_max=getattr(args, "n_max", None),
                    samples=getattr(args, "samples", 2048),
                    exclusion=getattr(args, "exclusion", reg.DEFAULT_EXCLUSION),
                    fmt=args.format or getattr(args, "default_format", "json"),
                    output=args.output, seed=args.seed)
    try:
        cfg.resolve()
        return args.func(args, cfg)
    except (UsageError, RegFallError) as exc:
        print(f"regfall {args.command}: error: {exc}", file=sys.stderr)
        return 2


run = main

if __name__ == "__main__":
    sys.exit(main())
