"""Command line front end and the JSON input schema.

Input files describe one graded-commutative algebra:

    {
      "name": "cp2",
      "characters": {"free_rank": 0, "torsion": []},   # optional
      "basis": [{"id": "h2", "degree": 2, "char": [0]}, ...],
      "unit": "e0",
      "products": [
        {"left": "h2", "right": "h2",
         "result": [{"id": "h4", "coeff": "1"}]}
      ]
    }

Products are listed for left-index <= right-index only; coefficients are
decimal strings "p/q" or "n".  Output tables are tab-separated with a header
row and LF line endings, byte-for-byte deterministic for fixed input and
flags (timings are kept out of the payload for that reason).  Exit codes:
0 success, 1 validation failure, 2 I/O or schema error, 3 cutoff exceeded.
"""

from __future__ import annotations

import argparse
import json
import random
import re
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .errors import CutoffExceededError, FormalpiError, InvalidInputError
from .graded_core import AlgebraPresentation, CharacterLattice, validate_algebra

_COEFF_RE = re.compile(r"^-?\d+(/[1-9]\d*)?$")


class SchemaError(Exception):
    """The JSON payload does not match the input schema."""


def _fail(msg: str):
    raise SchemaError(msg)


def parse_coeff(s) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str) or not _COEFF_RE.match(s):
        _fail(f"coefficient {s!r} is not of the form 'p/q' or 'n'")
    return Fraction(s)


def parse_presentation(doc: dict, name_hint: str = "input") -> AlgebraPresentation:
    if not isinstance(doc, dict):
        _fail("top level must be an object")
    for key in doc:
        if key not in {"name", "characters", "basis", "unit", "products"}:
            _fail(f"unknown key {key!r}")
    name = doc.get("name", name_hint)
    if not isinstance(name, str):
        _fail("'name' must be a string")

    chars = doc.get("characters", {"free_rank": 0, "torsion": []})
    if not isinstance(chars, dict):
        _fail("'characters' must be an object")
    free_rank = chars.get("free_rank", 0)
    torsion = chars.get("torsion", [])
    if not isinstance(free_rank, int) or free_rank < 0:
        _fail("'free_rank' must be a non-negative integer")
    if not isinstance(torsion, list) or any(not isinstance(t, int) or t < 2 for t in torsion):
        _fail("'torsion' must be a list of integers >= 2")
    lattice = CharacterLattice(free_rank, tuple(torsion))

    raw_basis = doc.get("basis")
    if not isinstance(raw_basis, list) or not raw_basis:
        _fail("'basis' must be a non-empty list")
    basis = []
    for entry in raw_basis:
        if not isinstance(entry, dict) or "id" not in entry or "degree" not in entry:
            _fail(f"basis entry {entry!r} needs 'id' and 'degree'")
        ident, degree = entry["id"], entry["degree"]
        if not isinstance(ident, str) or not isinstance(degree, int) or degree < 0:
            _fail(f"basis entry {entry!r}: 'id' must be a string, 'degree' a natural number")
        char = entry.get("char", [0] * lattice.length)
        if not isinstance(char, list) or len(char) != lattice.length or any(
            not isinstance(c, int) for c in char
        ):
            _fail(f"basis entry {ident!r}: 'char' must be a list of {lattice.length} integers")
        basis.append((ident, degree, tuple(char)))

    unit = doc.get("unit")
    if not isinstance(unit, str):
        _fail("'unit' must be a string")

    raw_products = doc.get("products", [])
    if not isinstance(raw_products, list):
        _fail("'products' must be a list")
    products: dict[tuple[str, str], dict[str, Fraction]] = {}
    for row in raw_products:
        if not isinstance(row, dict) or not {"left", "right", "result"} <= set(row):
            _fail(f"product entry {row!r} needs 'left', 'right', 'result'")
        left, right, result = row["left"], row["right"], row["result"]
        if not isinstance(left, str) or not isinstance(right, str) or not isinstance(result, list):
            _fail(f"product entry {row!r}: bad field types")
        if (left, right) in products:
            _fail(f"product ({left},{right}) listed twice")
        terms = {}
        for term in result:
            if not isinstance(term, dict) or "id" not in term or "coeff" not in term:
                _fail(f"product term {term!r} needs 'id' and 'coeff'")
            if term["id"] in terms:
                _fail(f"product ({left},{right}) repeats target {term['id']!r}")
            terms[term["id"]] = parse_coeff(term["coeff"])
        products[(left, right)] = terms

    return AlgebraPresentation(name, basis, unit, products, lattice)


def load_presentation(path) -> AlgebraPresentation:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise SchemaError(f"cannot read {p}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{p}: not valid JSON: {exc}") from exc
    return parse_presentation(doc, name_hint=p.stem)


# ---------------------------------------------------------------------------
# reporting


@dataclass
class RunReport:
    command: str
    input_name: str
    cutoffs: dict
    elapsed: float = 0.0
    text: str = ""
    payload: dict | None = None
    exit_status: int = 0


def render_json(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _table(header: list[str], rows: list[list]) -> str:
    lines = ["\t".join(header)]
    for row in rows:
        lines.append("\t".join(str(x) for x in row))
    return "\n".join(lines) + "\n"


def _char_label(char: tuple[int, ...]) -> str:
    return "(" + ",".join(str(c) for c in char) + ")"


# ---------------------------------------------------------------------------
# subcommands


def _build(pres, max_m: int, max_w: int):
    from .quillen_weight import build_model

    return build_model(pres, max_m, max_w)


def _cmd_validate(pres, args, report: RunReport):
    result = validate_algebra(pres)
    if args.json:
        report.payload = {
            "command": "validate",
            "input": pres.name,
            "ok": result.ok,
            "violations": [
                {"code": v.code, "message": v.message, "subjects": list(v.subjects)}
                for v in result.violations
            ],
        }
    else:
        report.text = str(result) + "\n"
    report.exit_status = 0 if result.ok else 1


def _cmd_pi(pres, args, report: RunReport):
    from .quillen_weight import homotopy_table

    model = _build(pres, args.max_degree, args.max_weight)
    table = homotopy_table(model, args.max_degree, args.max_weight)
    rows = []
    if not table.complete:
        agg = [0] * table.max_w
        for (w, _), v in table.pi1_pieces.items():
            agg[w - 1] += v
        rows.append([1, sum(agg), agg])
    for m in range(2, args.max_degree + 1):
        top_w = min(table.max_w, m - 1) if table.complete else table.max_w
        agg = [0] * top_w
        for (w, _), v in table.weight_breakdown(m).items():
            agg[w - 1] += v
        rows.append([m, table.total(m), agg])
    banner = None if table.complete else f"TRUNCATED AT WEIGHT {table.max_w}"
    if args.json:
        report.payload = {
            "command": "pi",
            "input": pres.name,
            "max_degree": args.max_degree,
            "max_weight": args.max_weight,
            "complete": table.complete,
            "truncated_at_weight": None if table.complete else table.max_w,
            "rows": [{"m": m, "total": t, "weights": agg} for m, t, agg in rows],
        }
    else:
        text = ""
        if banner:
            text += banner + "\n"
        text += _table(
            ["m", "total", "weights"],
            [[m, t, "[" + ",".join(str(d) for d in agg) + "]"] for m, t, agg in rows],
        )
        report.text = text


def _cmd_supports(pres, args, report: RunReport):
    from .quillen_weight import homotopy_table, supports

    model = _build(pres, args.max_degree, args.max_weight)
    table = homotopy_table(model, args.max_degree, args.max_weight)
    rows = []
    json_rows = []
    for m in range(2, args.max_degree + 1):
        chars = sorted(supports(model, m))
        rows.append([m, " ".join(_char_label(c) for c in chars) or "-"])
        json_rows.append({"m": m, "support": [list(c) for c in chars]})
    banner = None if table.complete else f"TRUNCATED AT WEIGHT {table.max_w}"
    if args.json:
        report.payload = {
            "command": "supports",
            "input": pres.name,
            "max_degree": args.max_degree,
            "max_weight": args.max_weight,
            "complete": table.complete,
            "rows": json_rows,
        }
    else:
        text = ""
        if banner:
            text += banner + "\n"
        text += _table(["m", "support"], rows)
        report.text = text


def _cmd_hurewicz(pres, args, report: RunReport):
    from .quillen_weight import hurewicz_rank

    model = _build(pres, args.max_degree, args.max_weight)
    rows = []
    json_rows = []
    for m in range(2, args.max_degree + 1):
        rk, image = hurewicz_rank(model, m)
        rows.append([m, rk, image.ambient_dim])
        json_rows.append(
            {
                "m": m,
                "rank": rk,
                "h_dim": image.ambient_dim,
                "image": [[str(x) for x in v] for v in image.vectors],
            }
        )
    if args.json:
        report.payload = {
            "command": "hurewicz",
            "input": pres.name,
            "max_degree": args.max_degree,
            "rows": json_rows,
        }
    else:
        report.text = _table(["m", "rank", "h_dim"], rows)


def _cmd_ss(pres, args, report: RunReport):
    from .ss_engine import check_degeneration, filtered_from_model, page

    model = _build(pres, args.max_degree, args.max_weight)
    fc = filtered_from_model(model)
    pg = page(fc, args.page)
    # window to the slots unaffected by the internal degree/weight truncation
    rows = [
        [p, q, d]
        for (p, q), d in sorted(pg.dims.items())
        if d and p <= model.max_w and q - p <= model.max_m - 1
    ]
    lines = ""
    if not model.complete:
        lines += f"TRUNCATED AT WEIGHT {model.max_w}\n"
    lines += _table(["p", "q", "dim"], rows)
    degen = None
    if args.check_degeneration:
        degen = check_degeneration(fc, 2, 6)
        lines += f"degenerate from page 2: {'true' if degen.degenerate else 'false'}\n"
    if args.json:
        report.payload = {
            "command": "ss",
            "input": pres.name,
            "page": args.page,
            "complete": model.complete,
            "truncated_at_weight": None if model.complete else model.max_w,
            "dims": [{"p": p, "q": q, "dim": d} for p, q, d in rows],
            "degenerate_from_2": None if degen is None else degen.degenerate,
        }
    else:
        report.text = lines


def _cmd_minimal_model(pres, args, report: RunReport):
    from .sullivan_oracle import minimal_model

    mm = minimal_model(pres, args.max_degree)
    counts = mm.generator_counts()
    rows = [[n, counts.get(n, 0)] for n in range(2, args.max_degree + 1)]
    if args.json:
        names = [g.name for g in mm.generators]
        report.payload = {
            "command": "minimal-model",
            "input": pres.name,
            "max_degree": args.max_degree,
            "counts": {str(n): c for n, c in rows},
            "generators": [
                {
                    "name": g.name,
                    "degree": g.degree,
                    "d": [
                        {"monomial": [names[i] for i in mono], "coeff": str(c)}
                        for mono, c in g.differential
                    ],
                    "image": [{"id": ident, "coeff": str(c)} for ident, c in g.image],
                }
                for g in mm.generators
            ],
        }
    else:
        report.text = _table(["degree", "generators"], rows)


def _cmd_doldkan(pres, args, report: RunReport):
    from .dold_kan import (
        CochainComplex,
        check_cosimplicial_identities,
        complexes_agree,
        denormalize,
        normalize,
    )
    from .exactlin import RationalMatrix

    lines = []
    payload: dict = {"command": "doldkan", "input": pres.name, "level": args.level}
    dims_by_degree = pres.dims_by_degree()
    top = max(dims_by_degree)
    dims = [dims_by_degree.get(n, 0) for n in range(top + 1)]
    diffs = [RationalMatrix.zero(dims[n + 1], dims[n]) for n in range(top)]
    c = CochainComplex(tuple(dims), tuple(diffs))
    v = denormalize(c, args.level)
    idents = check_cosimplicial_identities(v)
    back = normalize(v)
    ok = complexes_agree(c, back, args.level)
    rows = [[n, v.dims[n]] for n in range(args.level + 1)]
    lines.append(_table(["level", "dim"], rows))
    lines.append(f"cosimplicial identities: {'OK' if not idents else 'FAIL'}\n")
    lines.append(f"round-trip: {'OK' if ok else 'FAIL'}\n")
    payload["dims"] = [v.dims[n] for n in range(args.level + 1)]
    payload["identities_ok"] = not idents
    payload["roundtrip_ok"] = ok

    if args.fuzz:
        rng = random.Random(args.seed)
        from .dold_kan import random_cochain_complex

        good = 0
        for _ in range(args.fuzz):
            rc = random_cochain_complex(rng, max_degree=3, max_dim=3)
            lvl = max(len(rc.dims) - 1, 2)
            w = denormalize(rc, lvl)
            if not check_cosimplicial_identities(w) and complexes_agree(
                rc, normalize(w), lvl
            ):
                good += 1
        lines.append(f"fuzz: {good}/{args.fuzz} round-trips OK\n")
        payload["fuzz"] = {"seed": args.seed, "total": args.fuzz, "ok": good}
        ok = ok and good == args.fuzz

    if args.json:
        report.payload = payload
    else:
        report.text = "".join(lines)
    report.exit_status = 0 if ok and not idents else 1


def _cmd_lie_dims(pres, args, report: RunReport):
    from .free_lie import dim as lie_dim
    from .quillen_weight import model_generators
    from .free_lie import basis as lie_basis

    gens = model_generators(pres)
    b = lie_basis(gens, args.max_degree - 1, args.max_weight)
    rows = []
    for q in range(1, args.max_weight + 1):
        for p in range(q, q + args.max_degree):
            if p - q > args.max_degree - 1:
                continue
            d = lie_dim(p, q, b)
            if d:
                rows.append([p, q, d])
    rows.sort()
    if args.json:
        report.payload = {
            "command": "lie-dims",
            "input": pres.name,
            "dims": [{"p": p, "q": q, "dim": d} for p, q, d in rows],
        }
    else:
        report.text = _table(["p", "q", "dim"], rows)


_COMMANDS = {
    "validate": _cmd_validate,
    "pi": _cmd_pi,
    "supports": _cmd_supports,
    "hurewicz": _cmd_hurewicz,
    "ss": _cmd_ss,
    "minimal-model": _cmd_minimal_model,
    "doldkan": _cmd_doldkan,
    "lie-dims": _cmd_lie_dims,
}


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="formalpi",
        description="Weight-graded rational homotopy of formal spaces.",
    )
    sub = ap.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("input", help="JSON algebra presentation")
        sp.add_argument("--max-degree", type=int, default=8, dest="max_degree")
        sp.add_argument("--max-weight", type=int, default=None, dest="max_weight")
        sp.add_argument("--json", action="store_true")
        if name == "ss":
            sp.add_argument("--page", type=int, default=2)
            sp.add_argument("--check-degeneration", action="store_true")
        if name == "doldkan":
            sp.add_argument("--level", type=int, default=4)
            sp.add_argument("--fuzz", type=int, default=0)
            sp.add_argument("--seed", type=int, default=0)
    return ap


def run(argv, out=None) -> RunReport:
    """Execute one subcommand; returns the report (text already printed)."""
    out = out if out is not None else sys.stdout
    started = time.monotonic()
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        code = exc.code if exc.code is not None else 2
        return RunReport("?", "?", {}, 0.0, "", None, int(code))
    if args.max_weight is None:
        args.max_weight = args.max_degree
    report = RunReport(
        args.command,
        args.input,
        {"max_degree": args.max_degree, "max_weight": args.max_weight},
    )
    try:
        pres = load_presentation(args.input)
        report.input_name = pres.name
        _COMMANDS[args.command](pres, args, report)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        report.exit_status = 2
    except CutoffExceededError as exc:
        print(f"cutoff exceeded: {exc}", file=sys.stderr)
        report.exit_status = 3
    except InvalidInputError as exc:
        report.text = f"{exc}\n"
        report.exit_status = 1
    except FormalpiError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        report.exit_status = 1
    report.elapsed = time.monotonic() - started
    if report.payload is not None:
        report.text = render_json(report.payload)
    if report.text:
        out.write(report.text)
    return report


def main():
    sys.exit(run(sys.argv[1:]).exit_status)


if __name__ == "__main__":
    main()
