"""Command-line front end: JSON descriptor in, JSON result out.

Exit codes: 0 success, 1 mathematical error (for example a non-rigid type
passed to ``rigid``), 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from dataclasses import dataclass
from fractions import Fraction

import sympy

from . import descriptors as desc
from .campaigns import CampaignConfig, run_all
from .descriptors import DEG_L, CompleteType, CurveContext, QFType, RigidParams
from .errors import MulticurveError, NotMonotone

COMMANDS = ("invariants", "second", "dual", "end", "kernel", "rigid", "moduli-dim", "chi", "verify")


class InputError(Exception):
    """Bad descriptor input; ``line`` points into the source file when known."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message)
        self.line = line


@dataclass(frozen=True)
class Descriptor:
    ctx: CurveContext
    kind: str  # "sheaf" | "rigid" | "qftype"
    payload: object  # CompleteType | RigidParams | QFType

    def complete_type(self) -> CompleteType:
        if self.kind == "sheaf":
            return self.payload
        if self.kind == "rigid":
            return desc.rigid_from_params(self.payload, self.ctx)
        raise InputError("this command needs a 'sheaf' or 'rigid' payload")


def _line_of(text: str, key: str) -> int | None:
    needle = f'"{key}"'
    for number, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return number
    return None


def _degree(value, where: str, line):
    if isinstance(value, bool):
        raise InputError(f"{where}: expected an integer, got {value!r}", line)
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            expr = sympy.sympify(value, locals={"degL": DEG_L})
        except (sympy.SympifyError, TypeError, SyntaxError):
            raise InputError(f"{where}: cannot parse {value!r}", line) from None
        if expr.free_symbols - {DEG_L} or not expr.is_polynomial(DEG_L):
            raise InputError(f"{where}: only polynomials in degL are allowed, got {value!r}", line)
        return desc._clean(expr)
    raise InputError(f"{where}: expected an integer or a degL expression, got {value!r}", line)


def _int(value, where: str, line) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InputError(f"{where}: expected an integer, got {value!r}", line)
    return value


def _int_list(value, where: str, line, n: int) -> tuple:
    if not isinstance(value, list):
        raise InputError(f"{where}: expected a list", line)
    if len(value) != n:
        raise InputError(f"{where}: expected {n} entries for n = {n}, got {len(value)}", line)
    return tuple(_int(v, f"{where}[{i}]", line) for i, v in enumerate(value))


def parse_text(text: str) -> tuple:
    """Parse descriptor JSON; returns (Descriptor, issues)."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    if not isinstance(data, dict) or "curve" not in data:
        raise InputError("missing 'curve' object", 1)
    curve = data["curve"]
    cline = _line_of(text, "curve")
    if not isinstance(curve, dict):
        raise InputError("'curve' must be an object", cline)
    n = _int(curve.get("n"), "curve.n", _line_of(text, "n") or cline)
    if n < 1:
        raise InputError(f"curve.n must be >= 1, got {n}", _line_of(text, "n"))
    g = _int(curve.get("genus", 0), "curve.genus", _line_of(text, "genus") or cline)
    if g < 0:
        raise InputError(f"curve.genus must be >= 0, got {g}", _line_of(text, "genus"))
    degL = _degree(curve.get("degL", -1), "curve.degL", _line_of(text, "degL") or cline)
    ctx = CurveContext(n, g, degL)

    kinds = [k for k in ("sheaf", "rigid", "qftype") if k in data]
    if len(kinds) != 1:
        raise InputError(f"exactly one of 'sheaf', 'rigid', 'qftype' is required, found {kinds or 'none'}", 1)
    kind = kinds[0]
    body = data[kind]
    kline = _line_of(text, kind)
    if not isinstance(body, dict):
        raise InputError(f"'{kind}' must be an object", kline)

    issues = []
    if kind == "sheaf":
        r = _int_list(body.get("r"), "sheaf.r", _line_of(text, "r") or kline, n)
        dline = _line_of(text, "d") or kline
        if not isinstance(body.get("d"), list) or len(body["d"]) != n:
            raise InputError(f"sheaf.d: expected a list of {n} degrees", dline)
        d = tuple(_degree(v, f"sheaf.d[{i}]", dline) for i, v in enumerate(body["d"]))
        payload = CompleteType(r, d)
        issues = desc.validate(payload, ctx)
        errors = [i for i in issues if i.severity == "error"]
        if errors:
            raise InputError(f"{errors[0].code}: {errors[0].message}", _line_of(text, "r") or kline)
    elif kind == "rigid":
        vals = {}
        for key in ("a", "k"):
            vals[key] = _int(body.get(key), f"rigid.{key}", _line_of(text, key) or kline)
        for key in ("epsilon", "delta"):
            vals[key] = _degree(body.get(key, 0), f"rigid.{key}", _line_of(text, key) or kline)
        if vals["a"] < 1 or not (1 <= vals["k"] < n):
            raise InputError(f"rigid parameters need a >= 1 and 1 <= k < n = {n}", kline)
        payload = RigidParams(vals["a"], vals["k"], vals["epsilon"], vals["delta"])
        issues = desc.validate(desc.rigid_from_params(payload, ctx), ctx)
    else:
        m = _int_list(body.get("m"), "qftype.m", _line_of(text, "m") or kline, n)
        if any(v < 0 for v in m) or not any(m):
            raise InputError("qftype.m needs non-negative entries, not all zero", _line_of(text, "m") or kline)
        payload = QFType(m)
    return Descriptor(ctx, kind, payload), issues


def parse_descriptor(path: str) -> tuple:
    """(CurveContext, payload) from a descriptor file; issues warnings for soft problems."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    descriptor, issues = parse_text(text)
    for issue in issues:
        warnings.warn(f"{issue.code}: {issue.message}", stacklevel=2)
    return descriptor.ctx, descriptor.payload


# ---------------------------------------------------------------------------
# output


def _out(value):
    """Exact JSON values: ints stay ints, rationals and symbolic degrees become strings."""
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, sympy.Basic):
        if value.is_Integer:
            return int(value)
        if value.is_Rational:
            return f"{value.p}/{value.q}"
        return str(value)
    if isinstance(value, (list, tuple)):
        return [_out(v) for v in value]
    if isinstance(value, dict):
        return {k: _out(v) for k, v in value.items()}
    raise TypeError(f"no exact JSON form for {value!r}")


def _type_json(ct: CompleteType) -> dict:
    return {"r": list(ct.r), "d": list(ct.d)}


def execute(command: str, descriptor: Descriptor, args: argparse.Namespace) -> dict:
    ctx = descriptor.ctx
    if command == "invariants":
        if descriptor.kind == "qftype":
            t = descriptor.payload
            return {"R": desc.generalized_rank(t), "r": list(desc.ranks_from_qf(t))}
        R, Deg, slope = desc.rank_deg_slope(descriptor.complete_type())
        return {"R": R, "Deg": Deg, "slope": slope}
    if command == "second":
        si = desc.second_invariants(descriptor.complete_type(), ctx)
        return {"s": list(si.s), "e": list(si.e)}
    if command == "dual":
        return _type_json(desc.dual_type(descriptor.complete_type(), ctx, include_twist=args.with_twist))
    if command == "end":
        R, Deg = desc.end_invariants(descriptor.complete_type(), ctx)
        return {"R_End": R, "Deg_End": Deg}
    if command == "kernel":
        if descriptor.kind == "qftype":
            t, degrees = descriptor.payload, None
        else:
            ct = descriptor.complete_type()
            t, degrees = desc.qf_from_ranks(ct.r), ct.d
        kd = desc.kernel_descriptor(t, args.cover_rank, ctx, degrees=degrees)
        return {
            "type": list(kd.qftype.m),
            "ranks": list(kd.ranks),
            "degrees": list(kd.degrees) if kd.degrees is not None else None,
        }
    if command == "rigid":
        if descriptor.kind == "rigid":
            return _type_json(desc.rigid_from_params(descriptor.payload, ctx))
        p = desc.rigid_params_from(descriptor.complete_type(), ctx)
        return {"a": p.a, "k": p.k, "epsilon": p.epsilon, "delta": p.delta}
    if command == "moduli-dim":
        if descriptor.kind == "rigid":
            p = descriptor.payload
        else:
            p = desc.rigid_params_from(descriptor.complete_type(), ctx)
        return {"dim": desc.moduli_dim(p.a, p.k, ctx)}
    if command == "chi":
        return {"chi": desc.euler_char(descriptor.complete_type(), ctx)}
    raise InputError(f"unknown command {command!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="multicurves", description="Invariant calculus and verification campaigns.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS[:-1]:
        p = sub.add_parser(name)
        p.add_argument("descriptor", help="path to a JSON descriptor file")
        if name == "kernel":
            p.add_argument("--cover-rank", type=int, required=True)
        if name == "dual":
            p.add_argument("--with-twist", action="store_true", help="include the L^(n-1) twist of Hom(-, O_n)")
    v = sub.add_parser("verify")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--budget", type=int, default=50)
    v.add_argument("--field", choices=("q", "101"), default="101")
    v.add_argument("--n-max", type=int, default=4)
    v.add_argument("--timing", action="store_true", help="include wall-clock seconds per family")
    return parser


def _fail(code: int, message: str) -> int:
    print(message, file=sys.stderr)
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "verify":
        try:
            cfg = CampaignConfig(seed=args.seed, budget=args.budget, field=args.field, n_max=args.n_max)
        except MulticurveError as exc:
            return _fail(2, f"error: {exc}")
        report = run_all(cfg)
        print(report.dumps(timing=args.timing))
        return 0 if report.ok else 1
    path = args.descriptor
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        return _fail(2, f"{path}: cannot read: {exc.strerror}")
    try:
        descriptor, issues = parse_text(text)
    except InputError as exc:
        return _fail(2, f"{path}:{exc.line or 1}: {exc}")
    for issue in issues:
        print(f"{path}: {issue.severity}: {issue.code}: {issue.message}", file=sys.stderr)
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            result = execute(args.command, descriptor, args)
        for w in caught:
            print(f"{path}: warning: {w.message}", file=sys.stderr)
    except InputError as exc:
        return _fail(2, f"{path}:{exc.line or 1}: {exc}")
    except NotMonotone as exc:
        return _fail(2, f"{path}: NotMonotone: {exc}")
    except MulticurveError as exc:
        payload = {"error": type(exc).__name__, "message": str(exc)}
        if getattr(exc, "index", None) is not None:
            payload["index"] = exc.index
        print(json.dumps(payload, sort_keys=True))
        return 1
    print(json.dumps(_out(result), sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
