"""Command-line entry point: ``moprl {compute,verify,demo}``.

Exit codes: 0 success, 1 a verification check failed, 2 bad configuration,
3 numerical failure (quadrature or Hankel conditioning).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import MoprlError
from .mop import build_sequence
from .verify import CHECKS, run_checks
from .weights import FAMILIES, example_spec, weight_from_json

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3
TOL_RANGE = (1e-14, 1e-4)
DEMO_FAMILIES = ("hermite-a", "hermite-b", "freud-a", "freud-b")
DEFAULTS = {"nmax": None, "tol": 1e-12, "seed": 0, "suite": "all", "dim": None,
            "params": None, "out": None, "family": None}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    family: str | None
    params: dict | None
    dim: int | None
    nmax: int
    tol: float
    seed: int
    out: str | None
    suite: list[str] | None  # None means every registered check

    def spec(self):
        if self.params is not None:
            obj = dict(self.params)
            obj.setdefault("family", self.family)
            if obj["family"] != self.family:
                raise ConfigError(f"params describe family {obj['family']!r}, not {self.family!r}")
            return weight_from_json(obj)
        dim = self.dim if self.dim is not None else (1 if self.family == "scalar-hermite" else 2)
        return example_spec(self.family, dim)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="moprl", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (("compute", "build the coefficient ledger and write it as JSON"),
                        ("verify", "run the identity checks and write a report"),
                        ("demo", "summary table for the four built-in families")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", help="JSON file with any of the options below; flags win")
        p.add_argument("--family", choices=FAMILIES)
        p.add_argument("--params", help="JSON file with the family parameters")
        p.add_argument("--dim", type=int, help="matrix size when --params is not given")
        p.add_argument("--nmax", type=int)
        p.add_argument("--tol", type=float)
        p.add_argument("--seed", type=int)
        p.add_argument("--out", help="output path (stdout if omitted)")
        p.add_argument("--suite", help="'all' or a comma-separated list of check names")
    return parser


def _load_json(path: str, what: str):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read {what} {path}: {exc}") from exc


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Merge defaults, the optional config file and explicit flags, then validate."""
    merged = dict(DEFAULTS)
    if args.config:
        cfg = _load_json(args.config, "config")
        if not isinstance(cfg, dict):
            raise ConfigError("config file must hold a JSON object")
        unknown = set(cfg) - set(DEFAULTS)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        merged.update(cfg)
    for key in DEFAULTS:
        val = getattr(args, key, None)
        if val is not None:
            merged[key] = val

    family = merged["family"]
    if args.command != "demo":
        if family is None:
            raise ConfigError("--family is required")
        if family not in FAMILIES:
            raise ConfigError(f"unknown family {family!r}")
    try:
        nmax = merged["nmax"]
        nmax = int(nmax) if nmax is not None else (5 if args.command == "demo" else 6)
        tol = float(merged["tol"])
        seed = int(merged["seed"])
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    if nmax < 1:
        raise ConfigError("nmax must be >= 1")
    if not TOL_RANGE[0] <= tol <= TOL_RANGE[1]:
        raise ConfigError(f"tol must lie in [{TOL_RANGE[0]:g}, {TOL_RANGE[1]:g}]")
    dim = merged["dim"]
    if dim is not None and int(dim) < 1:
        raise ConfigError("dim must be >= 1")

    suite = merged["suite"]
    names = None
    if isinstance(suite, str) and suite != "all":
        names = [s.strip() for s in suite.split(",") if s.strip()]
    elif isinstance(suite, list):
        names = [str(s) for s in suite]
    if names is not None:
        unknown = [n for n in names if n not in CHECKS]
        if unknown or not names:
            raise ConfigError(f"unknown checks: {', '.join(unknown) or '(empty)'}; "
                              f"available: {', '.join(CHECKS)}")

    params = merged["params"]
    if isinstance(params, str):
        params = _load_json(params, "params")
    if params is not None and not isinstance(params, dict):
        raise ConfigError("params must be a JSON object")

    cfg = RunConfig(args.command, family, params, None if dim is None else int(dim), nmax, tol,
                    seed, merged["out"], names)
    if args.command != "demo":
        try:
            cfg.spec()
        except ConfigError:
            raise
        except (ValueError, KeyError, TypeError) as exc:
            raise ConfigError(f"bad parameters: {exc}") from exc
    return cfg


def dumps(obj) -> str:
    """Canonical JSON text; identical inputs give identical bytes."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _compute(cfg: RunConfig) -> int:
    seq = build_sequence(cfg.spec(), cfg.nmax, cfg.tol)
    _emit(dumps(seq.to_json()), cfg.out)
    return EXIT_OK


def _verify(cfg: RunConfig) -> int:
    seq = build_sequence(cfg.spec(), cfg.nmax, cfg.tol)
    report = run_checks(seq, cfg.suite, seed=cfg.seed)
    _emit(dumps(report.to_json()), cfg.out)
    for c in report.failed():
        print(f"FAIL {c.name}: residual {c.residual:.3e} > tol {c.tol:.1e}", file=sys.stderr)
    return EXIT_OK if report.all_passed else EXIT_FAIL


def demo_rows(nmax: int = 5, tol: float = 1e-12, seed: int = 0, dim: int = 2) -> list[dict]:
    rows = []
    for fam in DEMO_FAMILIES:
        seq = build_sequence(example_spec(fam, dim), nmax, tol)
        report = run_checks(seq, seed=seed)
        worst = max((c.residual / c.tol for c in report.checks
                     if c.residual is not None and c.tol > 0), default=0.0)
        rows.append({
            "family": fam,
            "dim": dim,
            "nmax": nmax,
            "hankel_cond": float(max(seq.hankel_cond)),
            "checks": len(report.checks),
            "failed": len(report.failed()),
            "worst_ratio": float(worst),
            "beta1_norm": float(np.linalg.norm(seq.beta[1], 2)),
        })
    return rows


def format_demo(rows: list[dict]) -> str:
    head = f"{'family':<10} {'N':>2} {'nmax':>4} {'cond(H)':>10} {'|beta_1|':>10} " \
           f"{'checks':>6} {'failed':>6} {'worst res/tol':>13}"
    lines = [head, "-" * len(head)]
    for r in rows:
        lines.append(f"{r['family']:<10} {r['dim']:>2} {r['nmax']:>4} {r['hankel_cond']:>10.3e} "
                     f"{r['beta1_norm']:>10.6f} {r['checks']:>6} {r['failed']:>6} "
                     f"{r['worst_ratio']:>13.2e}")
    return "\n".join(lines) + "\n"


def _demo(cfg: RunConfig) -> int:
    rows = demo_rows(cfg.nmax, cfg.tol, cfg.seed, cfg.dim or 2)
    sys.stdout.write(format_demo(rows))
    if cfg.out is not None:
        Path(cfg.out).write_text(dumps(rows))
    return EXIT_OK if all(r["failed"] == 0 for r in rows) else EXIT_FAIL


def run(cfg: RunConfig) -> int:
    handler = {"compute": _compute, "verify": _verify, "demo": _demo}[cfg.command]
    try:
        return handler(cfg)
    except (MoprlError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        cfg = resolve_config(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
