"""Command-line front end.

Every subcommand prints one JSON document (sorted keys, rationals as
``"p/q"`` strings).  Exit codes: 0 success, 1 ``--expected`` mismatch,
2 malformed input, 3 mathematically invalid input.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

from . import analysis as an
from . import lattice as lat
from . import polyhedron as ph
from . import setmap as sm
from .extreal import format_rational, to_rational
from .fixtures import MAPS, fixture_problem
from .lattice import ConeSpec, HalfSpaceValue, UpperSet
from .polyhedron import HPoly
from .setmap import SetValuedMap


class ParseError(ValueError):
    """Malformed input; exit code 2."""


SEMANTIC_ERRORS = (lat.LatticeError, sm.MapError, an.AnalysisError, ph.DimensionError, ph.GeometryError)


# --------------------------------------------------------------------------
# input parsing


def _load_json_text(text: str, what: str):
    if text.startswith("@"):
        try:
            text = Path(text[1:]).read_text()
        except OSError as exc:
            raise ParseError(f"cannot read {what} file: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{what} is not valid JSON: {exc}") from exc


def _maybe_json(value, what: str):
    return _load_json_text(value, what) if isinstance(value, str) else value


def parse_vector(value, what: str = "vector") -> tuple:
    value = _maybe_json(value, what)
    if not isinstance(value, list):
        raise ParseError(f"{what} must be a JSON list")
    try:
        return tuple(to_rational(v) for v in value)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{what}: {exc}") from exc


def parse_rational(value, what: str = "number") -> Fraction:
    if isinstance(value, str):
        value = value.strip()
    try:
        return to_rational(value)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{what}: {exc}") from exc


def parse_hpoly(value, what: str = "polyhedron") -> HPoly:
    value = _maybe_json(value, what)
    if not isinstance(value, dict) or "dim" not in value:
        raise ParseError(f"{what} must be an object with 'dim' and 'rows'")
    try:
        return HPoly.from_json(value)
    except (TypeError, ValueError, KeyError) as exc:
        if isinstance(exc, ph.DimensionError):
            raise
        raise ParseError(f"{what}: {exc}") from exc


def parse_cone(value) -> ConeSpec:
    if isinstance(value, ConeSpec):
        return value
    if isinstance(value, str):
        m = re.fullmatch(r"\s*(orthant|zero)\s*:\s*(\d+)\s*", value)
        if m:
            n = int(m.group(2))
            if n < 1:
                raise ParseError("cone dimension must be positive")
            return ConeSpec.orthant(n) if m.group(1) == "orthant" else ConeSpec.zero(n)
    P = parse_hpoly(value, "cone")
    return ConeSpec(P.dim, P)


def parse_upper(value, cone: ConeSpec, what: str = "set") -> UpperSet:
    if isinstance(value, UpperSet):
        return value
    value = _maybe_json(value, what)
    if not isinstance(value, dict) or "kind" not in value:
        raise ParseError(f"{what} must be an object with a 'kind' field")
    if value["kind"] == "hrep":
        for r in value.get("rows", []):
            if not isinstance(r, list) or len(r) != cone.dim + 1:
                raise ParseError(f"{what}: row {r!r} does not have {cone.dim} + 1 entries")
    try:
        return UpperSet.from_json(value, cone)
    except lat.LatticeError as exc:
        if isinstance(exc, lat.NotUpperSet):
            raise
        raise ParseError(f"{what}: {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{what}: {exc}") from exc


def parse_map(value) -> SetValuedMap:
    if isinstance(value, SetValuedMap):
        return value
    if isinstance(value, str) and value in MAPS:
        return MAPS[value]()
    obj = value
    if isinstance(value, str):
        text = value[1:] if value.startswith("@") else value
        if not text.lstrip().startswith("{"):
            try:
                text = Path(text).read_text()
            except OSError as exc:
                raise ParseError(f"unknown map {value!r}: {exc}") from exc
        obj = _load_json_text(text, "map")
    if not isinstance(obj, dict):
        raise ParseError("map must be a JSON object")
    try:
        return SetValuedMap.from_json(obj)
    except (KeyError, TypeError) as exc:
        raise ParseError(f"map: {exc}") from exc
    except ValueError as exc:
        if isinstance(exc, SEMANTIC_ERRORS):
            raise
        raise ParseError(f"map: {exc}") from exc


_TERM = re.compile(r"([+-]?)\s*([0-9]+(?:/[0-9]+)?)?\s*\*?\s*(x([0-9]+))?")


def _parse_linear(expr: str, n: int) -> tuple[list, Fraction]:
    coeffs = [Fraction(0)] * n
    const = Fraction(0)
    s = expr.replace(" ", "").replace("−", "-")
    if not s:
        raise ParseError("empty side in constraint")
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos or (m.group(2) is None and m.group(3) is None):
            raise ParseError(f"cannot parse {expr!r}")
        if pos > 0 and not m.group(1):
            raise ParseError(f"missing operator in {expr!r}")
        sign = -1 if m.group(1) == "-" else 1
        num = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        if m.group(3):
            i = int(m.group(4)) - 1
            if not 0 <= i < n:
                raise ParseError(f"variable x{i + 1} out of range 1..{n}")
            coeffs[i] += sign * num
        else:
            const += sign * num
        pos = m.end()
    return coeffs, const


def parse_constraints(text: str, n: int) -> HPoly:
    """``"x1=0, x2 >= -1"``-style linear constraints over ``x1..xn``."""
    rows = []
    for part in re.split(r"[,;]", text):
        part = part.strip()
        if not part:
            continue
        m = re.fullmatch(r"(.+?)(>=|<=|=)(.+)", part.replace("≥", ">=").replace("≤", "<="))
        if not m:
            raise ParseError(f"constraint {part!r} needs one of =, >=, <=")
        la, lc = _parse_linear(m.group(1), n)
        ra, rc = _parse_linear(m.group(3), n)
        a = tuple(x - y for x, y in zip(la, ra))
        b = rc - lc
        if m.group(2) in (">=", "="):
            rows.append((a, b))
        if m.group(2) in ("<=", "="):
            rows.append((tuple(-v for v in a), -b))
    if not rows:
        raise ParseError("no constraints given")
    return HPoly(n, tuple(rows))


def parse_M(value, n: int):
    """A polyhedron (JSON object or constraint string) or a finite point list."""
    if isinstance(value, (HPoly, list)) and not isinstance(value, str):
        if isinstance(value, HPoly):
            return value
        return [parse_vector(p, "point of M") for p in value]
    if isinstance(value, dict):
        return parse_hpoly(value, "M")
    text = value.strip()
    if text.startswith("{") or text.startswith("[") or text.startswith("@"):
        return parse_M(_load_json_text(text, "M"), n)
    return parse_constraints(text, n)


# --------------------------------------------------------------------------
# output helpers


def hpoly_json(P: HPoly) -> dict:
    if ph.is_empty(P):
        return {"kind": "empty", "dim": P.dim}
    Q = ph.canonical(P)
    return {"kind": "hrep", "dim": P.dim, "rows": Q.to_json()["rows"]}


def upper_json(A: UpperSet) -> dict:
    return A.to_json()


def _set_like(obj) -> bool:
    return isinstance(obj, dict) and obj.get("kind") in ("empty", "ambient", "hrep")


def _as_hpoly_from_json(obj: dict, dim: int | None) -> HPoly | None:
    kind = obj.get("kind")
    rows = obj.get("rows", [])
    d = obj.get("dim", dim)
    if d is None and rows:
        d = len(rows[0]) - 1
    if d is None:
        return None
    if kind == "empty":
        return HPoly.empty(d)
    if kind == "ambient":
        return HPoly.whole(d)
    return HPoly.from_json({"dim": d, "rows": rows})


def _same_set(expected: dict, got: dict) -> bool:
    dim = got.get("dim") or expected.get("dim")
    for obj in (got, expected):
        if dim is None and obj.get("rows"):
            dim = len(obj["rows"][0]) - 1
    try:
        E = _as_hpoly_from_json(expected, dim)
        G = _as_hpoly_from_json(got, dim)
        return E is not None and G is not None and E.dim == G.dim and ph.poly_equal(E, G)
    except (ValueError, TypeError, KeyError, IndexError):
        return False


def compare(expected, got, path: str = "$") -> list[dict]:
    """Structured differences; sets described by H-rows compare as sets."""
    if _set_like(expected) and _set_like(got):
        diffs = []
        if expected["kind"] in ("empty", "ambient") and expected["kind"] == got["kind"]:
            same = True
        else:
            same = _same_set(expected, got)
        if not same:
            diffs.append({"path": path, "expected": expected, "got": got})
        for k, v in expected.items():
            if k not in ("kind", "rows", "dim"):
                diffs.extend(compare(v, got.get(k), f"{path}.{k}"))
        return diffs
    if isinstance(expected, dict) and isinstance(got, dict):
        diffs = []
        for k in sorted(set(expected) | set(got)):
            if k not in got or k not in expected:
                diffs.append({"path": f"{path}.{k}", "expected": expected.get(k), "got": got.get(k)})
            else:
                diffs.extend(compare(expected[k], got[k], f"{path}.{k}"))
        return diffs
    if isinstance(expected, list) and isinstance(got, list) and len(expected) == len(got):
        diffs = []
        for i, (e, g) in enumerate(zip(expected, got)):
            diffs.extend(compare(e, g, f"{path}[{i}]"))
        return diffs
    if _scalar_equal(expected, got):
        return []
    return [{"path": path, "expected": expected, "got": got}]


def _scalar_equal(e, g) -> bool:
    if e == g:
        return True
    if isinstance(e, (str, int)) and isinstance(g, (str, int)) and not isinstance(e, bool) and not isinstance(g, bool):
        try:
            return to_rational(e) == to_rational(g)
        except (TypeError, ValueError):
            return False
    return False


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False)


# --------------------------------------------------------------------------
# commands; each takes a dict of raw arguments and returns a JSON-able value


def _need(args: dict, *names):
    missing = [n for n in names if args.get(n) is None]
    if missing:
        raise ParseError("missing argument(s): " + ", ".join("--" + n.replace("_", "-") for n in missing))


def _map(args):
    _need(args, "map")
    return parse_map(args["map"])


def _dimvec(args, name, n, what=None):
    _need(args, name)
    v = parse_vector(args[name], what or name)
    if len(v) != n:
        raise ph.DimensionError(f"{what or name} has length {len(v)}, expected {n}")
    return v


def cmd_eval(a):
    f = _map(a)
    return upper_json(sm.evaluate(f, _dimvec(a, "x", f.nx)))


def cmd_dom(a):
    return hpoly_json(sm.domain(_map(a)))


def cmd_scalarize(a):
    f = _map(a)
    return {"value": str(sm.scalarize(f, _dimvec(a, "zstar", f.nz), _dimvec(a, "x", f.nx)))}


def cmd_deriv(a):
    f = _map(a)
    return sm.dir_derivative(f, _dimvec(a, "zstar", f.nz), _dimvec(a, "x0", f.nx), _dimvec(a, "dir", f.nx)).to_json()


def cmd_subdiff(a):
    f = _map(a)
    return sm.subdifferential(f, _dimvec(a, "zstar", f.nz), _dimvec(a, "x0", f.nx)).to_json()


def cmd_subdiff_contains(a):
    f = _map(a)
    ok = sm.subdiff_contains(f, _dimvec(a, "zstar", f.nz), _dimvec(a, "x0", f.nx), _dimvec(a, "xstar", f.nx))
    return {"contains": ok}


def cmd_conj_pos(a):
    f = _map(a)
    return sm.conjugate_pos(f, _dimvec(a, "xstar", f.nx), _dimvec(a, "zstar", f.nz)).to_json()


def cmd_conj_neg(a):
    f = _map(a)
    return sm.conjugate_neg(f, _dimvec(a, "xstar", f.nx), _dimvec(a, "zstar", f.nz)).to_json()


def _cone(a):
    _need(a, "cone")
    return parse_cone(a["cone"])


def cmd_residuate(a):
    C = _cone(a)
    _need(a, "A", "B")
    return upper_json(lat.residuate(parse_upper(a["A"], C, "A"), parse_upper(a["B"], C, "B")))


def cmd_z_residuate(a):
    C = _cone(a)
    _need(a, "A", "B")
    zs = _dimvec(a, "zstar", C.dim)
    return lat.z_residuate_value(parse_upper(a["A"], C, "A"), parse_upper(a["B"], C, "B"), zs).to_json()


def cmd_oplus(a):
    C = _cone(a)
    _need(a, "A", "B")
    return upper_json(lat.oplus(parse_upper(a["A"], C, "A"), parse_upper(a["B"], C, "B")))


def cmd_scale(a):
    C = _cone(a)
    _need(a, "t", "A")
    t = parse_rational(a["t"], "t")
    if t < 0:
        raise lat.LatticeError("scaling factor must be nonnegative")
    return upper_json(lat.scale(t, parse_upper(a["A"], C, "A")))


def _family(a):
    C = _cone(a)
    _need(a, "sets")
    sets = _maybe_json(a["sets"], "sets")
    if not isinstance(sets, list):
        raise ParseError("sets must be a JSON list")
    return C, [parse_upper(s, C, f"sets[{i}]") for i, s in enumerate(sets)]


def cmd_inf(a):
    C, sets = _family(a)
    return upper_json(lat.inf_family(sets, C))


def cmd_sup(a):
    C, sets = _family(a)
    return upper_json(lat.sup_family(sets, C))


def cmd_infimum(a):
    return upper_json(an.infimum(_map(a)))


def _M(a, f):
    _need(a, "M")
    return parse_M(a["M"], f.nx)


def cmd_translate(a):
    f = _map(a)
    M = _M(a, f)
    x = _dimvec(a, "x", f.nx)
    if isinstance(M, HPoly):
        return upper_json(sm.evaluate(sm.inf_translate(f, M), x))
    return upper_json(sm.inf_translate_at(f, M, x))


def cmd_check_solution(a):
    f = _map(a)
    return an.is_zstar_solution(f, _dimvec(a, "x0", f.nx), _dimvec(a, "zstar", f.nz)).to_json()


def cmd_check_infimizer(a):
    f = _map(a)
    return an.is_infimizer(f, _M(a, f)).to_json()


def default_zstars(f: SetValuedMap) -> list[tuple]:
    """Negated cone rows and their sum, deduplicated."""
    rows = [tuple(-v for v in r) for r, _ in f.cone.hrep.rows]
    total = tuple(sum(col) for col in zip(*rows))
    out = []
    for v in rows + [total]:
        if any(v) and v not in out:
            out.append(v)
    return out


def cmd_check_optimality(a):
    f = _map(a)
    M = _M(a, f)
    if a.get("zstars") is not None:
        raw = _maybe_json(a["zstars"], "zstars")
        if not isinstance(raw, list):
            raise ParseError("zstars must be a JSON list of vectors")
        zstars = [parse_vector(v, "zstar") for v in raw]
    else:
        zstars = default_zstars(f)
    return an.optimality_check(f, M, zstars, seed=int(a.get("seed") or 0)).to_json()


def cmd_adjoint(a):
    f = _map(a)
    P = an.adjoint_of_derivative(f, _dimvec(a, "x0", f.nx), _dimvec(a, "zstar", f.nz), _dimvec(a, "ustar", f.nz))
    return hpoly_json(P)


def cmd_coderiv(a):
    f = _map(a)
    P = an.coderivative(f, _dimvec(a, "x0", f.nx), _dimvec(a, "z0", f.nz), _dimvec(a, "zstar", f.nz))
    return hpoly_json(P)


def cmd_fixtures(a):
    name = a.get("name") or "running-example"
    if name in MAPS:
        return MAPS[name]().to_json()
    if name == "problem":
        return fixture_problem()
    raise ParseError(f"unknown fixture {name!r}; choose from {sorted(MAPS) + ['problem']}")


COMMANDS: dict[str, Callable[[dict], Any]] = {
    "eval": cmd_eval,
    "dom": cmd_dom,
    "scalarize": cmd_scalarize,
    "deriv": cmd_deriv,
    "subdiff": cmd_subdiff,
    "subdiff-contains": cmd_subdiff_contains,
    "conj-pos": cmd_conj_pos,
    "conj-neg": cmd_conj_neg,
    "residuate": cmd_residuate,
    "z-residuate": cmd_z_residuate,
    "oplus": cmd_oplus,
    "scale": cmd_scale,
    "inf": cmd_inf,
    "sup": cmd_sup,
    "infimum": cmd_infimum,
    "translate": cmd_translate,
    "check-solution": cmd_check_solution,
    "check-infimizer": cmd_check_infimizer,
    "check-optimality": cmd_check_optimality,
    "check-thm59": cmd_check_optimality,
    "adjoint": cmd_adjoint,
    "coderiv": cmd_coderiv,
    "fixtures": cmd_fixtures,
}

ARGUMENTS = ("map", "cone", "x", "x0", "z0", "dir", "zstar", "xstar", "ustar", "A", "B", "t", "sets", "M",
             "zstars", "seed")


# --------------------------------------------------------------------------
# problem files


def _resolve(problem: dict, args: dict) -> dict:
    """Replace names in query arguments by the objects they denote."""
    maps = problem.get("maps", {})
    sets = problem.get("sets", {})
    vectors = dict(problem.get("vectors", {}))
    vectors.update(problem.get("points", {}))
    out = {}
    for k, v in args.items():
        if k == "map" and isinstance(v, str) and v in maps:
            v = maps[v]
            if isinstance(v, str) and v in MAPS:
                v = MAPS[v]()
            else:
                v = parse_map(v)
        elif k in ("A", "B") and isinstance(v, str) and v in sets:
            v = sets[v]
        elif k == "sets" and isinstance(v, list):
            v = [sets[s] if isinstance(s, str) and s in sets else s for s in v]
        elif isinstance(v, str) and v in vectors:
            v = vectors[v]
        out[k] = v
    if "cone" not in out and problem.get("cone") is not None:
        out["cone"] = problem["cone"]
    return out


def run_query(command: str, args: dict):
    if command not in COMMANDS or command == "fixtures":
        raise ParseError(f"unknown command {command!r}")
    return COMMANDS[command](args)


def run_problem(problem) -> tuple[dict, int]:
    """Run every query; returns the report and the worst exit code."""
    if not isinstance(problem, dict) or not isinstance(problem.get("queries"), list):
        raise ParseError("problem file needs a 'queries' list")
    results, code = [], 0
    for i, q in enumerate(problem["queries"]):
        if not isinstance(q, dict) or "command" not in q:
            raise ParseError(f"query {i} needs a 'command'")
        entry = {"index": i, "command": q["command"]}
        if "name" in q:
            entry["name"] = q["name"]
        try:
            result = run_query(q["command"], _resolve(problem, q.get("arguments", {})))
            result = json.loads(dumps(result))
            entry["result"] = result
            if "expected" in q:
                diff = compare(q["expected"], result)
                entry["match"] = not diff
                if diff:
                    entry["diff"] = diff
                    code = max(code, 1)
        except ParseError as exc:
            entry["error"] = {"type": "parse", "message": str(exc)}
            code = max(code, 2)
        except SEMANTIC_ERRORS as exc:
            entry["error"] = {"type": "semantic", "message": str(exc)}
            code = max(code, 3)
        results.append(entry)
    return {"results": results}, code


# --------------------------------------------------------------------------
# entry point


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="setvalued", description="Exact calculus for polyhedral set-valued maps.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        if name == "fixtures":
            sp.add_argument("name", nargs="?", default="running-example")
        for arg in ARGUMENTS:
            sp.add_argument("--" + arg.replace("_", "-"), dest=arg)
        sp.add_argument("--expected")
        sp.add_argument("--output")
    bp = sub.add_parser("batch")
    src = bp.add_mutually_exclusive_group(required=True)
    src.add_argument("--problem")
    src.add_argument("--fixtures", action="store_true")
    bp.add_argument("--output")
    return p


def _emit(obj, output: str | None):
    text = dumps(obj)
    if output:
        Path(output).write_text(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _fail(kind: str, message: str, code: int) -> int:
    sys.stderr.write(dumps({"error": {"type": kind, "message": message}}) + "\n")
    return code


def main(argv=None) -> int:
    try:
        ns = build_parser().parse_args(argv)
        if ns.command is None:
            raise ParseError("a subcommand is required")
        if ns.command == "batch":
            problem = fixture_problem() if ns.fixtures else _load_json_text("@" + ns.problem, "problem")
            report, code = run_problem(problem)
            _emit(report, ns.output)
            return code
        args = {k: v for k, v in vars(ns).items() if k not in ("command", "expected", "output")}
        result = json.loads(dumps(COMMANDS[ns.command](args)))
        if ns.expected is not None:
            diff = compare(_load_json_text(ns.expected, "expected"), result)
            if diff:
                _emit({"result": result, "match": False, "diff": diff}, ns.output)
                return 1
        _emit(result, ns.output)
        return 0
    except ParseError as exc:
        return _fail("parse", str(exc), 2)
    except SEMANTIC_ERRORS as exc:
        return _fail("semantic", str(exc), 3)


if __name__ == "__main__":
    sys.exit(main())
