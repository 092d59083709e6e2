"""Command-line front end.

Usage examples:
  gaussfid fidelity '{"kind": "thermal", "params": {"beta": 1}}' '{"kind": "thermal", "params": {"beta": 2}}'
  gaussfid fidelity '{"kind": "vacuum"}' '{"kind": "vacuum", "params": {"alpha": 2}}' --verify
  gaussfid sweep '{"kind": "vacuum"}' '{"kind": "vacuum"}' --vary alpha --range 0 3 31
  gaussfid decompose '{"kind": "covariance", "params": {"a_qq": 4, "a_pp": 1}}'
  gaussfid kernel sqrt '{"kind": "thermal", "params": {"beta": 1}}'
  gaussfid verify --seed 42 --cases 50

State specs are JSON objects ``{"kind": ..., "params": {...}, "label": ...}``
given inline or through ``--file`` (a file may hold one spec or a list).
JSON goes to stdout; errors go to stderr as ``{"error": {...}}``.

Exit codes: 0 ok, 1 verification failed, 2 unparseable input,
3 unphysical state, 4 Fock truncation insufficient.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path
from typing import Any

import numpy as np

from . import fidelity_engine as fe
from . import fock_oracle as fo
from . import kernel_algebra as ka
from . import state_model as sm
from .errors import GaussianError, TruncationError
from .verify import DEFAULT_TOLERANCES, run_verification

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_UNPHYSICAL = 3
EXIT_TRUNCATION = 4

ORACLE_BUDGET = 1e-9


class CliError(Exception):
    def __init__(self, code: int, kind: str, message: str, **extra):
        super().__init__(message)
        self.code = code
        self.kind = kind
        self.extra = extra


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(EXIT_USAGE, "usage", message)


# ---------------------------------------------------------------------------
# spec loading


def _load_specs(inline: list[str], files: list[str] | None) -> list[dict[str, Any]]:
    specs: list[Any] = []
    for text in inline:
        try:
            specs.append(json.loads(text))
        except json.JSONDecodeError as exc:
            raise CliError(EXIT_USAGE, "parse", f"invalid JSON spec {text!r}: {exc}") from None
    for path in files or []:
        try:
            loaded = json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise CliError(EXIT_USAGE, "parse", f"cannot read {path}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise CliError(EXIT_USAGE, "parse", f"invalid JSON in {path}: {exc}") from None
        specs.extend(loaded if isinstance(loaded, list) else [loaded])
    for spec in specs:
        try:
            sm.spec_params(spec)
        except sm.SpecError as exc:
            raise CliError(EXIT_USAGE, "parse", str(exc)) from None
    return specs


def _need(specs: list, n: int, what: str) -> None:
    if len(specs) != n:
        raise CliError(EXIT_USAGE, "usage", f"{what} needs exactly {n} state spec(s), got {len(specs)}")


def _build(spec: dict[str, Any]) -> sm.GaussianState:
    try:
        return sm.state_from_spec(spec)
    except sm.SpecError as exc:
        raise CliError(EXIT_USAGE, "parse", str(exc)) from None
    except GaussianError as exc:
        raise CliError(EXIT_UNPHYSICAL, type(exc).__name__, str(exc), spec=spec) from None


# ---------------------------------------------------------------------------
# records


def _complex_pair(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def kernel_record(k: ka.GaussianKernel) -> dict[str, list[float]]:
    return {name: _complex_pair(v) for name, v in zip(("a", "b", "d", "l", "k", "g"), k.params())}


def state_record(s: sm.GaussianState) -> dict[str, float]:
    return {
        "a_qq": s.cov.a_qq,
        "a_pp": s.cov.a_pp,
        "a_pq": s.cov.a_pq,
        "alpha": s.disp.alpha,
        "tau": s.disp.tau,
        "det": s.det,
    }


def fidelity_record(
    spec1: dict, spec2: dict, verify: bool = False, dim: int | None = None
) -> dict[str, Any]:
    s1, s2 = _build(spec1), _build(spec2)
    res = fe.fidelity(s1, s2)
    record: dict[str, Any] = {
        "inputs": [spec1, spec2],
        "F": res.F,
        "Delta": res.Delta,
        "T": res.T,
        "exp_factor": res.exp_factor,
        "bures_distance": fe.bures_distance_from_fidelity(res.F),
        "bures_angle": fe.bures_angle_from_fidelity(res.F),
        "oracle_F": None,
        "oracle_dim": None,
        "abs_error": None,
    }
    if verify:
        try:
            oracle, used = fo.oracle_fidelity(s1, s2, budget=ORACLE_BUDGET, dim=dim)
        except TruncationError as exc:
            raise CliError(
                EXIT_TRUNCATION, "truncation", str(exc), required_dim=exc.required_dim
            ) from None
        record.update(oracle_F=oracle, oracle_dim=used, abs_error=abs(oracle - res.F))
    return record


def _with_param(spec: dict[str, Any], name: str, value: float) -> dict[str, Any]:
    params = dict(spec.get("params", {}))
    params[name] = value
    return {**spec, "params": params}


def sweep_rows(spec1: dict, template: dict, vary: str, lo: float, hi: float, steps: int):
    kind = template.get("kind")
    allowed = sm.SPEC_FIELDS.get(kind, {})
    if vary not in allowed:
        raise CliError(
            EXIT_USAGE, "usage", f"{kind} spec has no numeric parameter {vary!r}; choose from {sorted(allowed)}"
        )
    if steps < 1:
        raise CliError(EXIT_USAGE, "usage", f"steps must be >= 1, got {steps}")
    values = [lo] if steps == 1 else np.linspace(lo, hi, steps).tolist()
    rows = []
    for v in values:
        rec = fidelity_record(spec1, _with_param(template, vary, v))
        rows.append(
            {
                vary: v,
                "F": rec["F"],
                "Delta": rec["Delta"],
                "T": rec["T"],
                "exp_factor": rec["exp_factor"],
                "bures_distance": rec["bures_distance"],
            }
        )
    return rows


def decompose_record(spec: dict) -> dict[str, Any]:
    s = _build(spec)
    c = sm.canonical_decompose(s.cov)
    tw = sm.twamley_params(c)
    record = {
        "input": spec,
        "gamma": c.gamma,
        "m": c.m,
        "theta": c.theta,
        "twamley_r": tw.r,
        "twamley_beta": None if tw.is_pure_limit else tw.beta_T,
    }
    if tw.is_pure_limit:
        record["note"] = "pure state (gamma = 1): Twamley temperature is infinite"
    return record


def kernel_op(subop: str, specs: list[dict]) -> dict[str, Any]:
    try:
        if subop == "compose":
            _need(specs, 2, "kernel compose")
            k1, k2 = (sm.kernel_from_state(_build(s)) for s in specs)
            return {"op": subop, "kernel": kernel_record(ka.compose(k1, k2))}
        if subop == "sqrt":
            _need(specs, 1, "kernel sqrt")
            return {"op": subop, "kernel": kernel_record(ka.sqrt_kernel(sm.kernel_from_state(_build(specs[0]))))}
        if subop == "from-state":
            _need(specs, 1, "kernel from-state")
            return {"op": subop, "kernel": kernel_record(sm.kernel_from_state(_build(specs[0])))}
        if subop == "to-state":
            _need(specs, 1, "kernel to-state")
            return {"op": subop, "state": state_record(_build(specs[0]))}
    except GaussianError as exc:
        raise CliError(EXIT_UNPHYSICAL, type(exc).__name__, str(exc)) from None
    raise CliError(EXIT_USAGE, "usage", f"unknown kernel operation {subop!r}")


# ---------------------------------------------------------------------------
# output


def _emit_json(obj: Any, out) -> None:
    out.write(json.dumps(obj, indent=2, allow_nan=False) + "\n")


def _emit_csv(rows: list[dict[str, Any]], out) -> None:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]))
    writer.writeheader()
    for row in rows:
        writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})
    out.write(buf.getvalue())


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--file", action="append", metavar="PATH", help="read state spec(s) from a JSON file")
    common.add_argument("--output", choices=("json", "csv"), default=None)

    parser = _Parser(prog="gaussfid", description="Fidelity of single-mode Gaussian states.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fidelity", parents=[common], help="fidelity of two states")
    p.add_argument("specs", nargs="*", help="state specs as JSON strings")
    p.add_argument("--verify", action="store_true", help="cross-check with the Fock oracle")
    p.add_argument("--dim", type=int, default=None, help="Fock truncation override")

    p = sub.add_parser("sweep", parents=[common], help="fidelity along a parameter sweep")
    p.add_argument("specs", nargs="*", help="reference spec and template spec")
    p.add_argument("--vary", required=True, help="parameter of the template to sweep")
    p.add_argument("--range", nargs=3, required=True, metavar=("LO", "HI", "STEPS"))

    p = sub.add_parser("decompose", parents=[common], help="canonical form and Twamley parameters")
    p.add_argument("specs", nargs="*")

    p = sub.add_parser("kernel", parents=[common], help="kernel-level operations")
    p.add_argument("subop", choices=("compose", "sqrt", "from-state", "to-state"))
    p.add_argument("specs", nargs="*")

    p = sub.add_parser("verify", parents=[common], help="randomized self-check")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--cases", type=int, default=50)
    p.add_argument("--tol", type=float, default=None, help="override every category tolerance")
    return parser


def _parse_range(raw: list[str]) -> tuple[float, float, int]:
    try:
        lo, hi = float(raw[0]), float(raw[1])
        steps = int(raw[2])
    except ValueError:
        raise CliError(EXIT_USAGE, "usage", f"--range expects LO HI STEPS, got {raw}") from None
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise CliError(EXIT_USAGE, "usage", "--range bounds must be finite")
    return lo, hi, steps


def run(argv: list[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    cmd = args.command

    if cmd == "verify":
        if args.cases < 1:
            raise CliError(EXIT_USAGE, "usage", f"--cases must be >= 1, got {args.cases}")
        tols = None
        if args.tol is not None:
            tols = {name: args.tol for name in DEFAULT_TOLERANCES}
        report = run_verification(seed=args.seed, cases=args.cases, tolerances=tols)
        _emit_json(report.to_dict(), stdout)
        return EXIT_OK if report.passed else EXIT_VERIFY_FAILED

    specs = _load_specs(args.specs, args.file)
    if cmd == "fidelity":
        _need(specs, 2, "fidelity")
        record = fidelity_record(specs[0], specs[1], verify=args.verify, dim=args.dim)
        if args.output == "csv":
            flat = {k: v for k, v in record.items() if k != "inputs"}
            _emit_csv([flat], stdout)
        else:
            _emit_json(record, stdout)
    elif cmd == "sweep":
        _need(specs, 2, "sweep")
        lo, hi, steps = _parse_range(args.range)
        rows = sweep_rows(specs[0], specs[1], args.vary, lo, hi, steps)
        if args.output == "json":
            _emit_json(rows, stdout)
        else:
            _emit_csv(rows, stdout)
    elif cmd == "decompose":
        _need(specs, 1, "decompose")
        _emit_json(decompose_record(specs[0]), stdout)
    elif cmd == "kernel":
        _emit_json(kernel_op(args.subop, specs), stdout)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    # buffer stdout so an error path never leaves partial output behind
    buf = io.StringIO()
    try:
        code = run(argv, stdout=buf)
    except CliError as exc:
        err = {"error": {"type": exc.kind, "message": str(exc), **exc.extra}}
        sys.stderr.write(json.dumps(err) + "\n")
        return exc.code
    sys.stdout.write(buf.getvalue())
    return code


if __name__ == "__main__":
    raise SystemExit(main())
