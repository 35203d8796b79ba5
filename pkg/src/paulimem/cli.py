"""Command-line front end: ``paulimem {capacity,condition,sweep,verify}``.

Exit codes: 0 success, 1 verification failure, 2 usage or parameter error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import verify
from .channel import channel_coefficients, make_channel
from .conditions import (solvable_channel, solvable_threshold, sufficient_condition,
                         symmetric_channel, symmetric_threshold)
from .errors import NoCrossing, PauliMemError
from .optimizer import OptimizerConfig, enhancement_reports, minimize_output_entropy
from .perturbation import perturbation_conditions

COLUMNS = ("q0", "q1", "q2", "q3", "mu", "capacity_bits", "min_entropy_bits",
           "extremal_class", "sufficient_threshold", "sufficient_met", "enhanced_numeric")
FAMILY_PARAMS = {
    "general": ("q0", "q1", "q2", "q3", "mu"),
    "solvable": ("x", "mu"),
    "symmetric": ("x", "mu"),
}
CHUNK = 32
FAMILY_TOL = 1e-12


class MalformedGrid(PauliMemError):
    pass


class UsageError(PauliMemError):
    pass


# -- argument parsing ----------------------------------------------------------

def _common(p: argparse.ArgumentParser, channel_flags: bool = True) -> None:
    if channel_flags:
        for k in range(4):
            p.add_argument(f"--q{k}", type=float)
        p.add_argument("--mu", type=float)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--max-iterations", type=int, default=10_000)
    p.add_argument("--json", action="store_true", help="machine-readable output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="paulimem",
                                     description="Two-use capacity of correlated Pauli channels")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("capacity", help="minimum output entropy and capacity of one channel")
    _common(p)

    p = sub.add_parser("condition", help="analytic thresholds for one channel")
    _common(p)

    p = sub.add_parser("sweep", help="capacity over a parameter grid, as CSV or JSON Lines")
    _common(p)
    p.add_argument("--family", choices=sorted(FAMILY_PARAMS), default="general")
    p.add_argument("--grid", action="append", default=[], metavar="NAME=START:STOP:STEP",
                   help="grid axis, or NAME=VALUE for a fixed value; repeatable")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--parallel", type=int, default=1)

    p = sub.add_parser("verify", help="run the built-in invariant suites")
    p.add_argument("--quick", action="store_true", help="reduced trial counts")
    return parser


def _config(args) -> OptimizerConfig:
    try:
        return OptimizerConfig(restarts=args.restarts, max_iterations=args.max_iterations,
                               seed=args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _channel_from_flags(args):
    values = [getattr(args, f"q{k}") for k in range(4)] + [args.mu]
    missing = [n for n, v in zip(("--q0", "--q1", "--q2", "--q3", "--mu"), values) if v is None]
    if missing:
        raise UsageError("missing " + " ".join(missing))
    return make_channel(values[:4], values[4])


# -- formatting ----------------------------------------------------------------

def _num(v: float) -> str:
    return format(float(v), ".12g")


def _bool(v: bool) -> str:
    return "true" if v else "false"


def _emit_json(obj) -> None:
    print(json.dumps(obj, sort_keys=False))


def _amplitudes(a) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(a)]


# -- capacity ------------------------------------------------------------------

def cmd_capacity(args) -> int:
    ch = _channel_from_flags(args)
    res = minimize_output_entropy(ch, _config(args))
    if args.json:
        _emit_json({"q": list(ch.q), "mu": ch.mu, "capacity_bits": res.capacity_bits,
                    "min_entropy_bits": res.min_entropy_bits,
                    "argmin": _amplitudes(res.argmin),
                    "extremal_class": res.extremal_class, "converged": res.converged})
        return 0
    amps = " ".join(f"{z.real:+.6f}{z.imag:+.6f}j" for z in res.argmin)
    print(f"capacity {res.capacity_bits:.6f}")
    print(f"min_entropy {res.min_entropy_bits:.6f}")
    print(f"argmin (Phi+, Psi+, Psi-, Phi-) {amps}")
    print(f"extremal_class {res.extremal_class}")
    if not res.converged:
        print("warning: optimizer did not reach the gradient tolerance")
    return 0


# -- condition -----------------------------------------------------------------

def detect_family(q) -> tuple[str | None, float | None]:
    """Return ('solvable' | 'symmetric' | None, x)."""
    q0, q1, q2, q3 = q
    if abs(q0 - q1) <= FAMILY_TOL and abs(q2 - q3) <= FAMILY_TOL and q0 <= 0.5 + FAMILY_TOL:
        return "solvable", min(max(q0, 0.0), 0.5)
    if abs(q1 - q2) <= FAMILY_TOL and abs(q2 - q3) <= FAMILY_TOL:
        return "symmetric", q0
    return None, None


def condition_report(ch) -> dict:
    family, x = detect_family(ch.q)
    suff = sufficient_condition(ch)
    thresholds = {"sufficient": {"threshold_mu": suff.threshold_mu, "satisfied": suff.satisfied,
                                 "regularized_q": list(suff.detail["regularized_q"])}}
    if family == "solvable":
        t = solvable_threshold(x).threshold_mu
        thresholds["solvable"] = {"threshold_mu": t, "satisfied": bool(ch.mu > t)}
    elif family == "symmetric":
        t = symmetric_threshold(x).threshold_mu
        thresholds["symmetric"] = {"threshold_mu": t, "satisfied": bool(ch.mu > t)}
    local = perturbation_conditions(ch).conditions
    ac = channel_coefficients(ch)
    return {"q": list(ch.q), "mu": ch.mu, "family": family, "x": x,
            "a_coefficients": list(ac.values), "thresholds": thresholds,
            "product_input": local}


def cmd_condition(args) -> int:
    ch = _channel_from_flags(args)
    rep = condition_report(ch)
    if args.json:
        _emit_json(rep)
        return 0
    fam = rep["family"] or "general"
    print(f"family {fam}" + (f" (x={rep['x']:.6g})" if rep["x"] is not None else ""))
    for name, t in rep["thresholds"].items():
        verdict = "met" if t["satisfied"] else "not met"
        print(f"{name} threshold mu* = {t['threshold_mu']:.6f} ({verdict} at mu={ch.mu:.6g})")
    loc = rep["product_input"]
    print(f"we1 threshold mu = {loc['we1_threshold']:.6f} ({'met' if loc['we1'] else 'not met'})")
    if loc["verifiable"]:
        print(f"we2 {_bool(loc['we2'])}, wee {_bool(loc['wee'])}, "
              f"product input locally extremal {_bool(loc['product_locally_extremal'])}")
    else:
        print(f"caveat: {loc['note']}")
    return 0


# -- sweep ---------------------------------------------------------------------

def parse_axis(axis_text: str) -> tuple[str, list[float]]:
    """``NAME=START:STOP:STEP`` (inclusive, count based) or ``NAME=VALUE``."""
    name, sep, body = axis_text.partition("=")
    name = name.strip()
    if not sep or not name:
        raise MalformedGrid(f"expected NAME=START:STOP:STEP, got {axis_text!r}")
    parts = body.split(":")
    try:
        nums = [float(p) for p in parts]
    except ValueError:
        raise MalformedGrid(f"non-numeric grid value in {axis_text!r}") from None
    if len(nums) == 1:
        return name, nums
    if len(nums) != 3:
        raise MalformedGrid(f"expected START:STOP:STEP in {axis_text!r}")
    start, stop, step = nums
    if not np.isfinite(nums).all() or step <= 0 or stop < start:
        raise MalformedGrid(f"need finite values, step > 0 and stop >= start in {axis_text!r}")
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return name, [start + i * step for i in range(count)]


def build_grid(family: str, axes: list[str], args) -> list[tuple[float, ...]]:
    """Points in lexicographic order of the grid indices (first axis slowest)."""
    params = FAMILY_PARAMS[family]
    values = {}
    for axis_text in axes:
        name, vals = parse_axis(axis_text)
        if name not in params:
            raise MalformedGrid(f"unknown parameter {name!r} for family {family}")
        if name in values:
            raise MalformedGrid(f"parameter {name!r} given twice")
        values[name] = vals
    for name in params:
        if name not in values and getattr(args, name, None) is not None:
            values[name] = [getattr(args, name)]
    if family == "general" and "q3" not in values:
        values["q3"] = [None]  # filled in as the remainder 1 - q0 - q1 - q2
    missing = [n for n in params if n not in values]
    if missing:
        raise MalformedGrid("no values for " + ", ".join(missing))
    grid = np.array(np.meshgrid(*[np.arange(len(values[n])) for n in params], indexing="ij"))
    idx = grid.reshape(len(params), -1).T
    return [tuple(values[n][i] for n, i in zip(params, row)) for row in idx]


def _make(family: str, point):
    if family == "solvable":
        return solvable_channel(*point)
    if family == "symmetric":
        return symmetric_channel(*point)
    q0, q1, q2, q3, mu = point
    if q3 is None:
        q3 = 1.0 - q0 - q1 - q2
    return make_channel((q0, q1, q2, q3), mu)


def sweep_rows(family: str, points, cfg: OptimizerConfig) -> list[dict]:
    channels = [_make(family, p) for p in points]
    rows = []
    for ch, rep in zip(channels, enhancement_reports(channels, cfg)):
        suff = sufficient_condition(ch)
        rows.append({
            "q0": ch.q[0], "q1": ch.q[1], "q2": ch.q[2], "q3": ch.q[3], "mu": ch.mu,
            "capacity_bits": 2.0 - rep.min_entropy, "min_entropy_bits": rep.min_entropy,
            "extremal_class": rep.extremal_class,
            "sufficient_threshold": suff.threshold_mu, "sufficient_met": suff.satisfied,
            "enhanced_numeric": rep.enhanced,
        })
    return rows


def _chunk_job(job):
    family, points, cfg = job
    return sweep_rows(family, points, cfg)


def format_rows(rows: list[dict], fmt: str) -> str:
    buf = io.StringIO()
    if fmt == "csv":
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS)
        for r in rows:
            w.writerow([_bool(r[c]) if isinstance(r[c], bool) else
                        r[c] if isinstance(r[c], str) else _num(r[c]) for c in COLUMNS])
    else:
        for r in rows:
            obj = {c: r[c] if isinstance(r[c], (bool, str)) else float(_num(r[c]))
                   for c in COLUMNS}
            buf.write(json.dumps(obj) + "\n")
    return buf.getvalue()


def _write_atomic(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".sweep-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cmd_sweep(args) -> int:
    if args.parallel < 1:
        raise UsageError("--parallel must be >= 1")
    cfg = _config(args)
    points = build_grid(args.family, args.grid, args)
    for p in points:  # validate every point before spending time optimizing
        _make(args.family, p)
    jobs = [(args.family, points[i:i + CHUNK], cfg) for i in range(0, len(points), CHUNK)]
    if args.parallel == 1 or len(jobs) == 1:
        chunks = [_chunk_job(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=args.parallel) as pool:
            chunks = list(pool.map(_chunk_job, jobs))
    text = format_rows([r for c in chunks for r in c], args.format)
    if args.out:
        _write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


# -- verify --------------------------------------------------------------------

def cmd_verify(args) -> int:
    ok, first = verify.run(quick=args.quick)
    if ok:
        print("all suites passed")
        return 0
    print(f"verification failed: {first}")
    return 1


COMMANDS = {"capacity": cmd_capacity, "condition": cmd_condition,
            "sweep": cmd_sweep, "verify": cmd_verify}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (PauliMemError, NoCrossing) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
