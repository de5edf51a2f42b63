"""``veccomp`` command-line interface.

Every subcommand is a thin wrapper around :func:`run`, which takes the
parameters as a plain dict (the same keys as the long options) and
returns a JSON-ready dict.  Batch fixtures call :func:`run` directly.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Callable

from . import asymptotics, congruence, counting, enumeration, faadibruno
from .model import MultiIndex, WeightFunction, WeightSpecError, box_volume, load_weight_function

__all__ = ["run", "main", "RunConfig", "CapExceeded", "SUBCOMMANDS"]


class UsageError(ValueError):
    """Bad command-line usage; reported as a validation error."""


class CapExceeded(ValueError):
    def __init__(self, cells: int, cap: int, work: int):
        super().__init__(f"box of {cells} cells exceeds cap {cap}")
        self.cells, self.cap, self.work = cells, cap, work


@dataclass(frozen=True)
class RunConfig:
    max_cells: int = 10**7
    max_k: int = 10**5
    max_dim: int = 8

    @classmethod
    def from_env(cls) -> "RunConfig":
        env = os.environ
        return cls(
            max_cells=int(env.get("VECCOMP_MAX_CELLS", 10**7)),
            max_k=int(env.get("VECCOMP_MAX_K", 10**5)),
            max_dim=int(env.get("VECCOMP_MAX_DIM", 8)),
        )

    def guard(self, box, k: int = 1, support: int = 1) -> None:
        """``box`` is the upper corner, so the grid has ``prod(b + 1)`` cells."""
        box = list(box)
        if len(box) > self.max_dim:
            raise UsageError(f"dimension {len(box)} exceeds cap {self.max_dim}")
        if k > self.max_k:
            raise UsageError(f"k={k} exceeds cap {self.max_k}")
        cells = box_volume(box)
        if cells > self.max_cells:
            raise CapExceeded(cells, self.max_cells, cells * max(k, 1) * max(support, 1))


# Parameter helpers -------------------------------------------------------------

def _index(value) -> MultiIndex:
    if isinstance(value, str):
        try:
            value = [int(v) for v in value.split(",") if v.strip()]
        except ValueError:
            raise UsageError(f"bad multi-index {value!r}") from None
    if isinstance(value, int):
        value = [value]
    return MultiIndex(value)


def _need(params: dict, key: str):
    if params.get(key) is None:
        raise UsageError(f"missing parameter {key!r}")
    return params[key]


def _int(params: dict, key: str, default=None) -> int | None:
    v = params.get(key, default)
    if v is None:
        return None
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise UsageError(f"{key} must be an integer")
    try:
        return int(v)
    except ValueError:
        raise UsageError(f"{key} must be an integer") from None


def _weights(params: dict) -> WeightFunction:
    return load_weight_function(_need(params, "weights"))


def _support_size(f: WeightFunction, box) -> int:
    return len(f.support_within(box)) if f.finite else box_volume(box)


def _check_dims(target: MultiIndex, f: WeightFunction) -> None:
    if target.dim != f.dim:
        raise UsageError(f"target has dimension {target.dim} but weights have dimension {f.dim}")


# Subcommands -------------------------------------------------------------------

def _count(params: dict, cfg: RunConfig) -> dict:
    f = _weights(params)
    k = _int(params, "k")
    if k is None:
        raise UsageError("missing parameter 'k'")
    target = _index(_need(params, "target"))
    _check_dims(target, f)
    cfg.guard(target, k, _support_size(f, target))
    value = counting.binom(k, target, f, mod=_int(params, "mod"))
    return {"value": str(value)}


def _cf(params: dict, cfg: RunConfig) -> dict:
    f = _weights(params)
    target = _index(_need(params, "target"))
    _check_dims(target, f)
    cfg.guard(target, 1, _support_size(f, target))
    return {"value": str(counting.c_f(target, f, mod=_int(params, "mod")))}


def _enumerate(params: dict, cfg: RunConfig) -> dict:
    f = _weights(params)
    target = _index(_need(params, "target"))
    _check_dims(target, f)
    k = _int(params, "k")
    limit = _int(params, "limit")
    cfg.guard(target, k or sum(target))
    out, truncated = [], False
    for comp in enumeration.enumerate_compositions(target, f, k):
        if limit is not None and len(out) >= limit:
            truncated = True
            break
        out.append(comp.to_json())
    return {"compositions": out, "truncated": truncated}


def _sequence(params: dict, cfg: RunConfig) -> dict:
    family = _need(params, "family")
    length = _int(params, "max")
    if length is None:
        raise UsageError("missing parameter 'max'")
    dim = _int(params, "dim", 2)
    cfg.guard([2 * length] * dim, 2 * length * dim)
    return {"values": [str(v) for v in counting.sequence(family, length, dim)]}


def _check_box(theorem: str, q: dict) -> tuple[list[int], int]:
    """Largest box and row touched by a theorem check (for the cap)."""
    get = lambda key: list(_index(q[key])) if key in q else [0]
    p = q.get("p", 2)
    n = q.get("n", 1)
    if theorem in ("babbage", "modp"):
        return [c * p for c in get("m")], n * p
    if theorem == "non-multiple":
        return get("target"), n * p
    if theorem == "prime-power":
        return get("target"), p ** q.get("e", 1)
    if theorem == "pn-row":
        return [p] * 8, p * n
    if theorem == "glaisher":
        return [q.get("k", 1) + p] * len(get("m")), q.get("k", 1) + p
    if theorem == "recurrence":
        return [n + 8 * p ** q.get("b", 0)], 1
    if theorem == "razpet":
        digits = q.get("digits", [])
        return [p ** len(digits)] * 2, 1
    return get("target"), q.get("k", 1)


def _check(params: dict, cfg: RunConfig) -> dict:
    theorem = _need(params, "theorem")
    try:
        fn = congruence.THEOREMS[theorem]
    except KeyError:
        raise UsageError(f"unknown theorem {theorem!r}; choose from {sorted(congruence.THEOREMS)}") from None
    q = params.get("params") or {}
    if isinstance(q, str):
        q = json.loads(q)
    f = None if theorem == "razpet" else _weights(params)
    for key in ("target", "m", "r"):
        if key in q and f is not None:
            _check_dims(_index(q[key]), f)
    box, k = _check_box(theorem, q)
    if f is not None and theorem == "pn-row":
        box = [q.get("p", 2)] * f.dim
    cfg.guard(box, k)
    try:
        report = fn(q, f)
    except KeyError as exc:
        raise UsageError(f"missing theorem parameter {exc.args[0]!r}") from None
    return report.to_json()


def _prime_criterion(params: dict, cfg: RunConfig) -> dict:
    q = _int(params, "q")
    dim = _int(params, "dim", 1)
    if q is None:
        raise UsageError("missing parameter 'q'")
    max_dim = _int(params, "max_dim", 3)
    cfg.guard([q] * min(dim, max_dim), q // 2)
    return congruence.mann_shanks(q, dim, max_dim=max_dim).to_json()


def _approx(params: dict, cfg: RunConfig) -> dict:
    method = _need(params, "method")
    q = params.get("params") or {}
    if isinstance(q, str):
        q = json.loads(q)
    if method == "clt":
        box, k = list(_index(_need(q, "target"))), _need(q, "k")
    else:
        ell = _int(q, "ell")
        if ell is None:
            raise UsageError("missing parameter 'ell'")
        dim = {"delannoy": 2}.get(method, q.get("N", 2 if method == "unitcube" else 3))
        box, k = [ell] * dim, 1
    exact = params.get("exact", True)
    if exact:
        try:
            cfg.guard(box, k)
        except CapExceeded:
            exact = False
    return asymptotics.approximate(method, q, exact=exact)


def _faa(params: dict, cfg: RunConfig) -> dict:
    target = _index(_need(params, "target"))
    form = params.get("form", "partition")
    cfg.guard(target, sum(target))
    if form == "partition":
        terms = faadibruno.expand_partition_form(target)
    elif form == "composition":
        terms = faadibruno.expand_composition_form(target, merge=True)
    else:
        raise UsageError(f"unknown form {form!r}")
    return {"terms": [t.to_json() for t in terms]}


def _matches(expected, got, rel_tol: float) -> bool:
    if isinstance(expected, dict):
        return isinstance(got, dict) and all(k in got and _matches(v, got[k], rel_tol) for k, v in expected.items())
    if isinstance(expected, list):
        return isinstance(got, list) and len(expected) == len(got) and all(
            _matches(a, b, rel_tol) for a, b in zip(expected, got))
    if isinstance(expected, float) or isinstance(got, float):
        if isinstance(got, bool) or not isinstance(got, (int, float)):
            return False
        return math.isclose(expected, got, rel_tol=rel_tol, abs_tol=0.0)
    return expected == got


def load_fixture(source) -> list[dict]:
    if source in (None, "reference"):
        text = resources.files("veccomp").joinpath("data/reference_values.json").read_text()
    else:
        try:
            text = Path(source).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read fixture {source}: {exc.strerror}") from None
    data = json.loads(text)
    if not isinstance(data, list):
        raise UsageError("fixture must be a JSON array")
    return data


def _batch(params: dict, cfg: RunConfig) -> dict:
    checks = load_fixture(params.get("fixture"))
    results = []
    for i, item in enumerate(checks):
        name = item.get("name", f"check-{i}")
        entry = {"name": name}
        try:
            got = run(item["subcommand"], item.get("params", {}), cfg)
        except (ValueError, KeyError, TypeError) as exc:
            entry.update(passed=False, error=str(exc))
        else:
            passed = _matches(item.get("expect", {}), got, item.get("rel_tol", 1e-12))
            if item["subcommand"] == "check" and "holds" not in item.get("expect", {}):
                passed = passed and got.get("holds", True)
            entry["passed"] = passed
            if not passed:
                entry["got"] = got
        results.append(entry)
    failed = sum(not r["passed"] for r in results)
    return {"total": len(results), "passed": len(results) - failed, "failed": failed, "results": results}


SUBCOMMANDS: dict[str, Callable[[dict, RunConfig], dict]] = {
    "count": _count,
    "cf": _cf,
    "enumerate": _enumerate,
    "sequence": _sequence,
    "check": _check,
    "prime-criterion": _prime_criterion,
    "approx": _approx,
    "faa": _faa,
    "batch": _batch,
}


def run(subcommand: str, params: dict, config: RunConfig | None = None) -> dict:
    """Execute one subcommand; the result echoes ``params``."""
    try:
        handler = SUBCOMMANDS[subcommand]
    except KeyError:
        raise UsageError(f"unknown subcommand {subcommand!r}") from None
    result = handler(dict(params), config or RunConfig.from_env())
    if subcommand != "batch":
        result["params"] = _echo(params)
    return result


def _echo(params: dict) -> dict:
    out = {}
    for k, v in params.items():
        if v is None:
            continue
        if isinstance(v, WeightFunction):
            from .model import weight_to_spec

            v = weight_to_spec(v)
        elif isinstance(v, tuple):
            v = list(v)
        elif k in ("target", "m", "r") and isinstance(v, str):
            v = list(_index(v))
        out[k] = v
    return out


def failed(subcommand: str, result: dict) -> bool:
    if subcommand == "check":
        return not result["holds"]
    if subcommand == "batch":
        return result["failed"] > 0
    return False


# Argument parsing ----------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _json_arg(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid JSON: {exc.msg}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="veccomp", description="Weighted vector compositions: counts, congruences, asymptotics.")
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)
    _add = sub.add_parser
    sub.add_parser = lambda *a, **kw: _add(*a, parents=[common], **kw)

    def weights(p, required=True):
        p.add_argument("--weights", required=required,
                       help="preset name, inline JSON object or path to a weight spec")

    p = sub.add_parser("count", help="extended binomial coefficient")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--target", required=True)
    weights(p)
    p.add_argument("--mod", type=int)

    p = sub.add_parser("cf", help="compositions with any number of parts")
    p.add_argument("--target", required=True)
    weights(p)
    p.add_argument("--mod", type=int)

    p = sub.add_parser("enumerate", help="list colored compositions as JSON lines")
    p.add_argument("--target", required=True)
    weights(p)
    p.add_argument("--k", type=int)
    p.add_argument("--limit", type=int)

    p = sub.add_parser("sequence", help="diagonal counts for a closed-form family")
    p.add_argument("--family", required=True, choices=counting.SEQUENCE_FAMILIES)
    p.add_argument("--max", type=int, required=True)
    p.add_argument("--dim", type=int, default=2)

    p = sub.add_parser("check", help="test a congruence theorem on one instance")
    p.add_argument("--theorem", required=True, choices=sorted(congruence.THEOREMS))
    p.add_argument("--params", type=_json_arg, required=True)
    weights(p, required=False)

    p = sub.add_parser("prime-criterion", help="search for compositeness witnesses")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--dim", type=int, default=1)
    p.add_argument("--max-dim", dest="max_dim", type=int, default=3)

    p = sub.add_parser("approx", help="asymptotic approximation with exact comparison")
    p.add_argument("--method", required=True, choices=sorted(asymptotics.METHODS))
    p.add_argument("--params", type=_json_arg, required=True)
    p.add_argument("--no-exact", dest="exact", action="store_false")

    p = sub.add_parser("faa", help="partial derivative expansion of G(F(x))")
    p.add_argument("--target", required=True)
    p.add_argument("--form", choices=("partition", "composition"), default="partition")

    p = sub.add_parser("batch", help="run a fixture file of named checks")
    p.add_argument("fixture", nargs="?", default="reference",
                   help="fixture path, or 'reference' for the bundled reference values")
    return parser


def _to_csv(subcommand: str, result: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if subcommand == "sequence":
        w.writerow(["ell", "value"])
        w.writerows((i, v) for i, v in enumerate(result["values"], 1))
    elif subcommand == "enumerate":
        w.writerow(["parts", "colors"])
        for c in result["compositions"]:
            w.writerow([" ".join(",".join(map(str, p)) for p in c["parts"]), " ".join(map(str, c["colors"]))])
    elif subcommand == "faa":
        w.writerow(["coeff", "g_order", "factors"])
        for t in result["terms"]:
            fac = " ".join(f"{','.join(map(str, x['part']))}^{x['mult']}" for x in t["factors"])
            w.writerow([t["coeff"], t["g_order"], fac])
    elif subcommand == "batch":
        w.writerow(["name", "passed"])
        w.writerows((r["name"], r["passed"]) for r in result["results"])
    else:
        row = {k: v for k, v in result.items() if not isinstance(v, (dict, list))}
        w.writerow(sorted(row))
        w.writerow([row[k] for k in sorted(row)])
    return buf.getvalue()


def _emit(subcommand: str, result: dict, fmt: str, out) -> None:
    if fmt == "csv":
        out.write(_to_csv(subcommand, result))
        return
    dumps = lambda obj: json.dumps(obj, sort_keys=True)
    if subcommand == "enumerate":
        for comp in result["compositions"]:
            out.write(dumps(comp) + "\n")
    elif subcommand == "sequence":
        out.write(dumps(result["values"]) + "\n")
    elif subcommand == "faa":
        out.write(dumps(result["terms"]) + "\n")
    else:
        out.write(dumps(result) + "\n")


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    try:
        ns = build_parser().parse_args(argv)
        params = {k: v for k, v in vars(ns).items() if k not in ("subcommand", "format")}
        result = run(ns.subcommand, params)
    except CapExceeded as exc:
        err = {"type": "cap-exceeded", "message": str(exc), "cells": exc.cells,
               "cap": exc.cap, "estimated_work": str(exc.work)}
        out.write(json.dumps({"error": err}, sort_keys=True) + "\n")
        return 2
    except (ValueError, WeightSpecError, KeyError, TypeError) as exc:
        kind = "weight-spec" if isinstance(exc, WeightSpecError) else "validation"
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        out.write(json.dumps({"error": {"type": kind, "message": str(msg)}}, sort_keys=True) + "\n")
        return 2
    _emit(ns.subcommand, result, ns.format, out)
    return 1 if failed(ns.subcommand, result) else 0


if __name__ == "__main__":
    sys.exit(main())
