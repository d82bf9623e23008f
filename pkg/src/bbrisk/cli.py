"""Command-line front end.

Subcommands: simulate (ruin probability estimate), constant (asymptotic
constant), asymptotic (formula evaluation only), compare (MC vs asymptotics
across barriers), selftest.  Flags override values from an optional
line-oriented ``key = value`` config file.  Exit codes: 0 success, 1 usage
or validation error, 2 out-of-regime numerical request.
"""
from __future__ import annotations

import argparse
import enum
import json
import sys
import time
from dataclasses import dataclass, fields

from .closedform import asymptotic_psi, branch_of, Branch, constant_nonpositive_a
from .constant import SupMode, estimate_constant
from .errors import BBRiskError, RegimeError
from .mc import (CompareConfig, EstimatorKind, compare_asymptotic, crude_mc,
                 tilted_mc)
from .model import CanonicalProblem, ModelParams, canonical_from_params

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_REGIME = 2


@dataclass
class RunConfig:
    subcommand: str
    # model: either (u, a) on horizon 1 or (u1, u2, T)
    u: float | None = None
    a: float | None = None
    u1: float | None = None
    u2: float | None = None
    T: float = 1.0
    c1: float = 0.0
    c2: float = 0.0
    gamma1: float = 0.0
    gamma2: float = 0.0
    # estimator
    n_paths: int = 100_000
    n_grid: int | None = None  # estimators default to 4096 when unset
    refine: bool = True
    estimator: str = "tilted"
    drift1: float | None = None
    drift2: float | None = None
    lam: float = 8.0
    mode: str = "exact_exponential_sup"
    constant: float | None = None
    constant_n_paths: int = 20_000
    u_list: list[float] | None = None
    seed: int = 0
    workers: int = 1
    output: str | None = None
    format: str = "json"


_BOOL_KEYS = {"refine"}
_INT_KEYS = {"n_paths", "n_grid", "seed", "workers", "constant_n_paths"}
_STR_KEYS = {"estimator", "mode", "output", "format"}
_LIST_KEYS = {"u_list"}


def _parse_u_list(text: str) -> list[float]:
    try:
        values = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise UsageError(f"bad u-list {text!r}") from exc
    if not values:
        raise UsageError("u-list must contain at least one value")
    return values


class UsageError(Exception):
    pass


def _coerce(key: str, raw: str):
    if key in _BOOL_KEYS:
        low = raw.strip().lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise UsageError(f"bad boolean for {key}: {raw!r}")
    if key in _INT_KEYS:
        return int(raw)
    if key in _STR_KEYS:
        return raw.strip()
    if key in _LIST_KEYS:
        return _parse_u_list(raw)
    return float(raw)


def read_config_file(path: str) -> dict:
    """Line-oriented ``key = value`` file; '#' starts a comment; unknown keys error."""
    known = {f.name for f in fields(RunConfig)} - {"subcommand"}
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected 'key = value'")
            key, raw = (part.strip() for part in line.split("=", 1))
            if key not in known:
                raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
            try:
                out[key] = _coerce(key, raw)
            except ValueError as exc:
                raise UsageError(f"{path}:{lineno}: bad value for {key}: {raw!r}") from exc
    return out


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bbrisk", description=__doc__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_common(p: argparse.ArgumentParser, with_model=True, with_estimator=True):
        p.add_argument("--config", default=None, help="key = value config file")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--workers", type=int, default=None)
        p.add_argument("--output", default=None)
        p.add_argument("--format", choices=["csv", "json"], default=None)
        if with_model:
            p.add_argument("--u", type=float, default=None, help="first barrier (horizon-1 form)")
            p.add_argument("--a", type=float, default=None, help="barrier ratio")
            p.add_argument("--u1", type=float, default=None)
            p.add_argument("--u2", type=float, default=None)
            p.add_argument("--T", type=float, default=None)
            p.add_argument("--c1", type=float, default=None)
            p.add_argument("--c2", type=float, default=None)
            p.add_argument("--gamma1", type=float, default=None)
            p.add_argument("--gamma2", type=float, default=None)
        if with_estimator:
            p.add_argument("--n-paths", dest="n_paths", type=int, default=None)
            p.add_argument("--n-grid", dest="n_grid", type=int, default=None)
            refine = p.add_mutually_exclusive_group()
            refine.add_argument("--refine", dest="refine", action="store_true", default=None)
            refine.add_argument("--no-refine", dest="refine", action="store_false", default=None)
            p.add_argument("--estimator", choices=["crude", "tilted"], default=None)
            p.add_argument("--drift1", type=float, default=None)
            p.add_argument("--drift2", type=float, default=None)

    ps = sub.add_parser("simulate", help="Monte Carlo ruin probability")
    add_common(ps)

    pc = sub.add_parser("constant", help="asymptotic constant (estimate or closed form)")
    add_common(pc, with_estimator=False)
    pc.add_argument("--lambda", dest="lam", type=float, default=None)
    pc.add_argument("--mode", choices=[m.value for m in SupMode], default=None)
    pc.add_argument("--n-paths", dest="n_paths", type=int, default=None)
    pc.add_argument("--n-grid", dest="n_grid", type=int, default=None)

    pa = sub.add_parser("asymptotic", help="evaluate the large-barrier formula")
    add_common(pa, with_estimator=False)
    pa.add_argument("--constant", type=float, default=None,
                    help="precomputed constant for the a > 0 branch")
    pa.add_argument("--lambda", dest="lam", type=float, default=None)
    pa.add_argument("--mode", choices=[m.value for m in SupMode], default=None)
    pa.add_argument("--constant-n-paths", dest="constant_n_paths", type=int, default=None)

    pm = sub.add_parser("compare", help="MC vs asymptotics across a barrier list")
    add_common(pm)
    pm.add_argument("--u-list", dest="u_list", type=_parse_u_list, default=None)
    pm.add_argument("--lambda", dest="lam", type=float, default=None)
    pm.add_argument("--mode", choices=[m.value for m in SupMode], default=None)
    pm.add_argument("--constant-n-paths", dest="constant_n_paths", type=int, default=None)

    pt = sub.add_parser("selftest", help="run built-in sanity checks")
    add_common(pt, with_model=False, with_estimator=False)
    return parser


def parse_config(argv: list[str]) -> RunConfig:
    parser = _build_parser()
    ns = parser.parse_args(argv)
    file_values = read_config_file(ns.config) if getattr(ns, "config", None) else {}
    cfg = RunConfig(subcommand=ns.subcommand)
    for f in fields(RunConfig):
        if f.name == "subcommand":
            continue
        flag = getattr(ns, f.name, None)
        if flag is not None:
            setattr(cfg, f.name, flag)
        elif f.name in file_values:
            setattr(cfg, f.name, file_values[f.name])
    return cfg


def _canonical(cfg: RunConfig) -> CanonicalProblem:
    if cfg.u is not None:
        if cfg.a is None:
            raise UsageError("--u requires --a")
        return CanonicalProblem(u=cfg.u, a=cfg.a, c1=cfg.c1, c2=cfg.c2,
                                gamma1=cfg.gamma1, gamma2=cfg.gamma2)
    if cfg.u1 is None or cfg.u2 is None:
        raise UsageError("specify either --u/--a or --u1/--u2")
    params = ModelParams(c1=cfg.c1, c2=cfg.c2, gamma1=cfg.gamma1, gamma2=cfg.gamma2,
                         T=cfg.T, u1=cfg.u1, u2=cfg.u2)
    return canonical_from_params(params)


def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    if isinstance(x, enum.Enum):
        return str(x.value)
    return str(x)


def _emit(cfg: RunConfig, payload, csv_rows=None) -> None:
    """payload: dict for JSON; csv_rows: (header, list-of-dicts) for CSV output."""
    if cfg.format == "csv" and csv_rows is not None:
        header, rows = csv_rows
        lines = [",".join(header)]
        lines += [",".join(_fmt(row[col]) for col in header) for row in rows]
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps(payload, default=lambda o: o.value if isinstance(o, enum.Enum) else o,
                          indent=2) + "\n"
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _run_simulate(cfg: RunConfig) -> int:
    prob = _canonical(cfg)
    drift = None
    if cfg.drift1 is not None or cfg.drift2 is not None:
        drift = (cfg.drift1 or 0.0, cfg.drift2 or 0.0)
    n_grid = cfg.n_grid if cfg.n_grid is not None else 4096
    t0 = time.perf_counter()
    if cfg.estimator == "crude":
        est = crude_mc(prob, cfg.n_paths, n_grid, cfg.refine, cfg.seed, cfg.workers)
    else:
        est = tilted_mc(prob, cfg.n_paths, n_grid, cfg.refine, cfg.seed,
                        cfg.workers, drift=drift)
    elapsed = time.perf_counter() - t0
    payload = {"p_hat": est.p_hat, "stderr": est.stderr,
               "ci95": [est.ci95_low, est.ci95_high], "n_paths": est.n_paths,
               "n_grid": n_grid, "seed": cfg.seed,
               "estimator": est.estimator.value, "elapsed_s": elapsed}
    header = ["p_hat", "stderr", "ci95_low", "ci95_high", "n_paths", "n_grid",
              "seed", "estimator", "elapsed_s"]
    row = dict(payload, ci95_low=est.ci95_low, ci95_high=est.ci95_high)
    _emit(cfg, payload, (header, [row]))
    return EXIT_OK


def _run_constant(cfg: RunConfig) -> int:
    if cfg.a is None:
        raise UsageError("constant requires --a")
    t0 = time.perf_counter()
    if cfg.a > 0:
        est = estimate_constant(cfg.a, cfg.gamma1, cfg.gamma2, lam=cfg.lam,
                                n_grid=cfg.n_grid,
                                n_paths=cfg.n_paths, mode=SupMode(cfg.mode),
                                seed=cfg.seed, workers=cfg.workers)
        payload = {"constant": est.mean, "stderr": est.stderr, "n_paths": est.n_paths,
                   "lambda": est.lam, "mode": est.mode.value,
                   "branch": branch_of(cfg.a).value,
                   "elapsed_s": time.perf_counter() - t0}
    else:
        value = constant_nonpositive_a(cfg.a, cfg.gamma1, cfg.c2)
        payload = {"constant": value, "stderr": 0.0, "n_paths": 0, "lambda": None,
                   "mode": "closed_form", "branch": branch_of(cfg.a).value,
                   "elapsed_s": time.perf_counter() - t0}
    header = ["constant", "stderr", "n_paths", "branch", "elapsed_s"]
    _emit(cfg, payload, (header, [payload]))
    return EXIT_OK


def _run_asymptotic(cfg: RunConfig) -> int:
    prob = _canonical(cfg)
    c_a = cfg.constant
    if prob.a > 0 and c_a is None:
        c_a = estimate_constant(prob.a, prob.gamma1, prob.gamma2, lam=cfg.lam,
                                n_paths=cfg.constant_n_paths, mode=SupMode(cfg.mode),
                                seed=cfg.seed, workers=cfg.workers).mean
    approx = asymptotic_psi(prob, c_a)
    payload = {"value": approx.value, "branch": approx.branch.value,
               "constant": approx.constant_used, "u": prob.u, "a": prob.a}
    header = ["value", "branch", "constant", "u", "a"]
    _emit(cfg, payload, (header, [payload]))
    return EXIT_OK


def _run_compare(cfg: RunConfig) -> int:
    if cfg.u_list is None:
        raise UsageError("compare requires --u-list")
    if cfg.a is None:
        raise UsageError("compare requires --a")
    prob = CanonicalProblem(u=cfg.u_list[0], a=cfg.a, c1=cfg.c1, c2=cfg.c2,
                            gamma1=cfg.gamma1, gamma2=cfg.gamma2)
    drift = None
    if cfg.drift1 is not None or cfg.drift2 is not None:
        drift = (cfg.drift1 or 0.0, cfg.drift2 or 0.0)
    config = CompareConfig(estimator=EstimatorKind(cfg.estimator), n_paths=cfg.n_paths,
                           n_grid=cfg.n_grid, refine=cfg.refine, seed=cfg.seed,
                           workers=cfg.workers, drift=drift, lam=cfg.lam,
                           constant_n_paths=cfg.constant_n_paths,
                           constant_mode=SupMode(cfg.mode))
    rows = compare_asymptotic(prob, cfg.u_list, config)
    header = ["u", "p_hat", "stderr", "asym", "ratio", "constant", "branch"]
    table = [{"u": r.u, "p_hat": r.mc.p_hat, "stderr": r.mc.stderr, "asym": r.asym,
              "ratio": r.ratio, "constant": r.constant, "branch": r.branch.value}
             for r in rows]
    _emit(cfg, table, (header, table))
    return EXIT_OK


def _run_selftest(cfg: RunConfig) -> int:
    from . import selftest
    ok = selftest.run(print)
    return EXIT_OK if ok else EXIT_USAGE


_DISPATCH = {"simulate": _run_simulate, "constant": _run_constant,
             "asymptotic": _run_asymptotic, "compare": _run_compare,
             "selftest": _run_selftest}


def run(cfg: RunConfig) -> int:
    try:
        return _DISPATCH[cfg.subcommand](cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RegimeError as exc:
        print(f"regime error: {exc}", file=sys.stderr)
        return EXIT_REGIME
    except BBRiskError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_config(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        # argparse exits with 2 on usage problems; remap to the documented code
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    except BBRiskError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return run(cfg)
    except BBRiskError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
