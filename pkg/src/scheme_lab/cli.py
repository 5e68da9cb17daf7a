"""Command-line front end: ``scheme-lab {check,build,lines,families,connectivity,derive}``.

Exit codes: 0 feasible, 1 infeasible, 2 inconclusive, 64 input or usage error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Sequence

from . import catalog
from .errors import InputError, SchemeLabError
from .rational import RMatrix, format_rational, parse_rational
from .scheme import (
    ConcreteScheme,
    KreinArray,
    ParameterSet,
    parameter_identities_report,
    parameters_from_krein_array,
    parameters_from_P,
    parameters_from_Q,
    polynomial_orderings,
    verify_scheme_axioms,
)
from .verdict import Report, Verdict, check, encode_value, inapplicable

EXIT = {"feasible": 0, "infeasible": 1, "inconclusive": 2}
EXIT_USAGE = 64
FORMAT_VERSION = 1
KINDS = ("P", "Q", "krein_array", "relations", "construction")


# ---------------------------------------------------------------- input parsing


def _position(text: str, offset: int) -> tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


_NUMBER = re.compile(r'"(?:[^"\\]|\\.)*"|-?\d+(?:\.\d+)?(?:[eE][+-]?\d+)?')


def _first_float(text: str) -> int | None:
    for m in _NUMBER.finditer(text):
        tok = m.group(0)
        if not tok.startswith('"') and any(c in tok for c in ".eE"):
            return m.start()
    return None


def load_document(text: str) -> dict:
    """Parse a versioned JSON input document; floats are rejected with their position."""
    try:
        doc = json.loads(text, parse_float=lambda s: _FloatSeen(s))
    except json.JSONDecodeError as e:
        raise InputError(f"invalid JSON: {e.msg}", e.lineno, e.colno) from None
    if _contains_float(doc):
        off = _first_float(text)
        line, col = _position(text, off) if off is not None else (None, None)
        raise InputError("decimal numbers are not accepted; write rationals as \"p/q\" strings", line, col)
    if not isinstance(doc, dict):
        raise InputError("top level must be a JSON object", 1, 1)
    if doc.get("format") != FORMAT_VERSION:
        raise InputError(f'missing or unsupported "format" (expected {FORMAT_VERSION})', *_key_pos(text, "format"))
    kind = doc.get("kind")
    if kind not in KINDS:
        raise InputError(f"kind must be one of {', '.join(KINDS)}", *_key_pos(text, "kind"))
    if "payload" not in doc:
        raise InputError("missing payload", 1, 1)
    doc["_text"] = text
    return doc


class _FloatSeen(str):
    pass


def _contains_float(x: Any) -> bool:
    if isinstance(x, _FloatSeen):
        return True
    if isinstance(x, list):
        return any(_contains_float(v) for v in x)
    if isinstance(x, dict):
        return any(_contains_float(v) for v in x.values())
    return False


def _key_pos(text: str, key: str) -> tuple[int | None, int | None]:
    i = text.find(f'"{key}"')
    return _position(text, i) if i >= 0 else (None, None)


def _rational(x: Any, text: str) -> Fraction:
    if isinstance(x, bool):
        raise InputError(f"expected a rational, got {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return parse_rational(x)
        except ValueError as e:
            i = text.find(json.dumps(x))
            line, col = _position(text, i) if i >= 0 else (None, None)
            raise InputError(str(e), line, col) from None
    raise InputError(f"expected a rational string, got {x!r}")


def _matrix(rows: Any, text: str) -> RMatrix:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise InputError("matrix payload must be a nonempty array of arrays")
    return RMatrix([[_rational(x, text) for x in r] for r in rows])


def _decode_label_row(row: Any, n: int | None) -> list[int]:
    if isinstance(row, list):
        return [int(x) for x in row]
    if isinstance(row, str) and ":" in row:
        out: list[int] = []
        for part in row.split(","):
            lab, cnt = part.split(":")
            out.extend([int(lab)] * int(cnt))
        return out
    if isinstance(row, str):
        return [int(c) for c in row]
    raise InputError("label rows must be arrays, digit strings or run-length strings")


def encode_label_row(row: Sequence[int]) -> str:
    """Run-length encoding ``label:count,...`` used for scheme files."""
    parts = []
    i = 0
    while i < len(row):
        j = i
        while j < len(row) and row[j] == row[i]:
            j += 1
        parts.append(f"{int(row[i])}:{j - i}")
        i = j
    return ",".join(parts)


def scheme_from_payload(payload: Any, label: str = "") -> ConcreteScheme:
    if not isinstance(payload, dict) or "labels" not in payload:
        raise InputError('relations payload needs a "labels" array')
    try:
        rows = [_decode_label_row(r, payload.get("n")) for r in payload["labels"]]
        return ConcreteScheme(rows, label, payload.get("fibers"))
    except (ValueError, TypeError) as e:
        raise InputError(f"bad label matrix: {e}") from None


def scheme_document(s: ConcreteScheme) -> dict:
    doc = {
        "format": FORMAT_VERSION,
        "kind": "relations",
        "label": s.name,
        "payload": {"n": s.n, "labels": [encode_label_row(r) for r in s.labels.tolist()]},
    }
    if s.fibers is not None:
        doc["payload"]["fibers"] = s.fibers
    return doc


def parameters_from_document(doc: dict) -> tuple[ParameterSet, ConcreteScheme | None]:
    text = doc.get("_text", "")
    kind, payload = doc["kind"], doc["payload"]
    label = doc.get("label", "")
    if kind == "P":
        return parameters_from_P(_matrix(payload, text)), None
    if kind == "Q":
        return parameters_from_Q(_matrix(payload, text)), None
    if kind == "krein_array":
        try:
            b = tuple(_rational(x, text) for x in payload["b_star"])
            c = tuple(_rational(x, text) for x in payload["c_star"])
        except (KeyError, TypeError):
            raise InputError('krein_array payload needs "b_star" and "c_star"') from None
        return parameters_from_krein_array(KreinArray(len(c), b, c)), None
    if kind == "relations":
        s = scheme_from_payload(payload, label)
        return verify_scheme_axioms(s, require_spectrum=False), s
    s = build_named(payload.get("name", ""), payload.get("args", {}))
    return verify_scheme_axioms(s, require_spectrum=False), s


# ---------------------------------------------------------------- constructions by name


def _worked_lssd() -> ConcreteScheme:
    from .constructions import lssd_from_oa_hadamard, worked_example

    oa, h, _ = worked_example()
    return lssd_from_oa_hadamard(oa, h).scheme


def build_named(name: str, args: dict) -> ConcreteScheme:
    from .connectivity import distance_scheme
    from .constructions import cameron_seidel, degenerate_lssd, hypercube_scheme
    from .graphs import cycle, petersen

    def arg(key: str, default=None) -> int:
        if key not in args and default is None:
            raise InputError(f"construction {name!r} needs argument {key!r}")
        return int(args.get(key, default))

    if name == "hypercube":
        return hypercube_scheme(arg("n", 3))
    if name == "cameron-seidel":
        return cameron_seidel(arg("r"), arg("w"))
    if name == "lssd-oa":
        oa, h = args.get("oa", "worked16x3"), args.get("h", "worked4")
        # the older interface tokens name the same embedded inputs
        if oa not in ("worked16x3", "paper16x3") or h not in ("worked4", "paper4"):
            raise InputError("lssd-oa supports the embedded inputs oa=worked16x3, h=worked4")
        return _worked_lssd()
    if name == "degenerate-lssd":
        return degenerate_lssd(arg("v"), arg("w"))
    if name == "petersen":
        return distance_scheme(petersen(), "Petersen")
    if name == "cycle":
        return distance_scheme(cycle(arg("n")), f"C{arg('n')}")
    raise InputError(f"unknown construction {name!r}")


SCHEME_ALIASES = {"3cube": ("hypercube", {"n": 3}), "4cube": ("hypercube", {"n": 4}),
                  "petersen": ("petersen", {}), "worked-lssd": ("lssd-oa", {})}


def scheme_by_name(spec: str) -> ConcreteScheme:
    if spec in SCHEME_ALIASES:
        name, args = SCHEME_ALIASES[spec]
        return build_named(name, args)
    m = re.fullmatch(r"(\d+)cube", spec)
    if m:
        return build_named("hypercube", {"n": int(m.group(1))})
    m = re.fullmatch(r"[cC](\d+)", spec)
    if m:
        return build_named("cycle", {"n": int(m.group(1))})
    path = Path(spec)
    if path.exists():
        doc = load_document(path.read_text(encoding="utf-8"))
        if doc["kind"] == "relations":
            return scheme_from_payload(doc["payload"], doc.get("label", path.stem))
        if doc["kind"] == "construction":
            return build_named(doc["payload"].get("name", ""), doc["payload"].get("args", {}))
        raise InputError("connectivity needs a scheme (relations or construction document)")
    raise InputError(f"unknown scheme {spec!r}")


# ---------------------------------------------------------------- report helpers


def parameter_data(ps: ParameterSet) -> dict:
    data: dict[str, Any] = {"n": ps.n, "d": ps.d, "valencies": list(ps.valencies)}
    data["intersection_numbers"] = [[list(r) for r in layer] for layer in ps.p_tensor]
    if ps.has_spectrum:
        data["multiplicities"] = list(ps.multiplicities)
        data["P"] = ps.P.tolist()
        data["Q"] = ps.Q.tolist()
        data["krein_parameters"] = [[list(r) for r in layer] for layer in ps.q_tensor]
    return data


def render_text(doc: dict) -> str:
    lines = [f"{doc.get('label', '')}: {doc.get('status', '')}"]
    for v in doc.get("verdicts", []):
        mark = {"pass": "ok  ", "fail": "FAIL", "inapplicable": "n/a "}[v["status"]]
        extra = f"  [{v['note']}]" if v.get("note") else ""
        wit = f"  witness={_short(v['witness'])}" if v["status"] == "fail" else ""
        lines.append(f"  {mark} {v['test_id']}{wit}{extra}")
    data = doc.get("data", {})
    for key in ("summary", "note", "beta", "angle", "dimension", "count"):
        if key in data:
            lines.append(f"  {key}: {_short(data[key])}")
    return "\n".join(lines)


def _short(x: Any, limit: int = 160) -> str:
    s = json.dumps(x) if not isinstance(x, str) else x
    return s if len(s) <= limit else s[: limit - 3] + "..."


def emit(report: Report, fmt: str, out=None) -> None:
    out = out or sys.stdout
    doc = report.to_json()
    if fmt == "json":
        out.write(json.dumps(doc, indent=2) + "\n")
    else:
        out.write(render_text(doc) + "\n")


def exit_code(report: Report) -> int:
    return EXIT[report.status]


# ---------------------------------------------------------------- commands


def cmd_check(doc: dict, lmax: int | None = None, cap: int | None = None) -> Report:
    from .feasibility import run_battery

    label = doc.get("label") or doc["kind"]
    try:
        ps, _ = parameters_from_document(doc)
    except SchemeLabError as e:
        if isinstance(e, InputError):
            raise
        return Report(label, [check("parameters well defined", False, str(e), "input validation")])
    report = run_battery(ps, lmax=lmax, cap=cap, label=label)
    report.data.update(parameter_data(ps))
    return report


def _identities(ps: ParameterSet) -> list[Verdict]:
    if ps.has_spectrum:
        return parameter_identities_report(ps)
    return [inapplicable("parameter identities", "spectrum is irrational", "eigenmatrix identities")]


def _check_file(path: str, lmax: int | None, cap: int | None) -> tuple[str, dict | None, str | None]:
    try:
        doc = load_document(Path(path).read_text(encoding="utf-8"))
        return path, cmd_check(doc, lmax, cap).to_json(), None
    except InputError as e:
        return path, None, str(e)
    except OSError as e:
        return path, None, str(e)


def cmd_build(name: str, args: dict, out_path: str | None = None) -> Report:
    s = build_named(name, args)
    ps = verify_scheme_axioms(s, require_spectrum=False)
    report = Report(s.name or name, [check("scheme axioms", True, [s.n, s.d], "relation products")])
    report.verdicts.extend(_identities(ps))
    report.data.update(parameter_data(ps))
    report.data["vertices"] = s.n
    if out_path:
        Path(out_path).write_text(json.dumps(scheme_document(s)) + "\n", encoding="utf-8")
        report.data["written"] = out_path
    return report


def cmd_lines(lssd: Sequence[int] | None, mode: str, named: str | None = None,
              coeffs: Sequence[Fraction] | None = None) -> Report:
    from . import lines as L

    if named is not None:
        if named not in catalog.NAMED:
            raise InputError(f"unknown parameter set {named!r}")
        if coeffs is None:
            raise InputError("--coeffs is required with --named")
        sys_ = L.gram_from_idempotents(catalog.NAMED[named](), coeffs)
        rep = L.check_optimality(sys_)
        report = Report(f"{named} lines", list(rep.verdicts))
        report.data.update(rep.to_json())
        report.data["values"] = list(sys_.values)
        return report
    if lssd is None or len(lssd) != 4:
        raise InputError("--lssd expects v,k,lambda,w")
    v, k, lam, w = lssd
    label = f"LSSD({v},{k},{lam};{w})"
    if mode == "mub":
        ps = catalog.lssd_parameters(v, k, lam, w)
        try:
            g = L.mub_gram(ps)
        except SchemeLabError as e:
            witness = getattr(e, "witness", str(e))
            return Report(f"{label} MUB", [check("MUB Gram matrix", False, witness, "unbiased bases")])
        betas = sorted({abs(x) for x in g.values[1:] if x != 0})
        report = Report(f"{label} MUB", [check("MUB Gram matrix", True, list(g.values), "unbiased bases")])
        report.data.update({"count": g.count, "dimension": g.dim, "values": list(g.values),
                            "beta": [f"+-{format_rational(b)}" for b in betas]})
        return report
    eq = L.equiangular_from_lssd(v, k, lam, w)
    rep = L.check_optimality(eq.system)
    report = Report(f"{label} equiangular", list(rep.verdicts))
    report.data.update(rep.to_json())
    report.data["scaled_coefficients"] = list(eq.scaled_coeffs)
    return report


def cmd_families(fid: int, ranges: dict | None, vmax: int) -> Report:
    from .families import family_verdict

    fr = family_verdict(fid, ranges, vmax)
    report = Report(f"family {fid} ({fr.family.name})", [fr.summary])
    report.data["summary"] = _family_summary(fr)
    report.data["instances"] = [i.to_json() for i in fr.instances[:200]]
    report.data["instance_count"] = len(fr.instances)
    return report


def _family_summary(fr) -> str:
    n, ok = len(fr.instances), fr.feasible_count
    rng = fr.summary.note
    if n and ok == n:
        return f"feasible for all {n} instances ({rng})"
    if ok == 0:
        return f"infeasible for all {n} instances ({rng})"
    return f"feasible for {ok} of {n} instances ({rng})"


def cmd_connectivity(scheme: ConcreteScheme, relation: int | None) -> Report:
    from .connectivity import survey_relations

    ps = verify_scheme_axioms(scheme, require_spectrum=False)
    rows = survey_relations(scheme, ps)
    if relation is not None:
        if not 1 <= relation <= scheme.d:
            raise InputError(f"relation must lie in 1..{scheme.d}")
        rows = [r for r in rows if r.relation == relation]
    report = Report(f"{scheme.name} connectivity", [r.tmain for r in rows])
    report.data["relations"] = [
        {"relation": r.relation, "connected": r.connected, "diameter": r.diameter,
         "vertex_connectivity": r.connectivity, "connectivity_capped_at": 4,
         "small_exception": r.exception}
        for r in rows
    ]
    return report


def cmd_derive(doc: dict) -> Report:
    ps, s = parameters_from_document(doc)
    report = Report(doc.get("label") or doc["kind"], _identities(ps))
    report.data.update(parameter_data(ps))
    if ps.has_spectrum:
        p_orders, q_orders = polynomial_orderings(ps)
        report.data["p_orderings"] = [list(o) for o in p_orders]
        report.data["q_orderings"] = [list(o.idempotent_order) for o in q_orders]
    return report


# ---------------------------------------------------------------- argument parsing


def _int_range(text: str) -> range | list[int]:
    """Parse ``N``, ``A..B`` or a comma list of those."""
    parts = []
    for item in text.split(","):
        m = re.fullmatch(r"\s*(\d+)\s*(?:\.\.\s*(\d+))?\s*", item)
        if not m:
            raise InputError(f"bad range {text!r}; use N, A..B or a comma list of those")
        a = int(m.group(1))
        b = int(m.group(2)) if m.group(2) is not None else a
        parts.append(range(a, b + 1))
    if len(parts) == 1:
        return parts[0]
    return sorted(set().union(*parts))


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise InputError(f"bad integer list {text!r}") from None


def _kv_args(items: Sequence[str]) -> dict:
    out = {}
    for it in items:
        if "=" not in it:
            raise InputError(f"construction arguments are key=value, got {it!r}")
        k, v = it.split("=", 1)
        out[k.strip()] = int(v) if re.fullmatch(r"-?\d+", v.strip()) else v.strip()
    return out


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # usage errors map to exit 64
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="text")

    p = _Parser(prog="scheme-lab", description="Exact association scheme feasibility and constructions.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check", parents=[common], help="run the feasibility battery on input documents")
    c.add_argument("inputs", nargs="*", help="JSON input documents")
    c.add_argument("--named", choices=sorted(catalog.NAMED), help="use a built-in parameter set")
    c.add_argument("--lmax", type=int, help="check Gegenbauer conditions up to this degree")
    c.add_argument("--cap", type=int, help="cap on the degree cutoff search")
    c.add_argument("--jobs", type=int, default=1, help="process input files concurrently")

    b = sub.add_parser("build", parents=[common], help="build and verify a scheme")
    b.add_argument("name", choices=("hypercube", "cameron-seidel", "lssd-oa", "degenerate-lssd", "petersen", "cycle"))
    b.add_argument("args", nargs="*", help="key=value arguments, e.g. r=2 w=8")
    b.add_argument("--n", type=int)
    b.add_argument("--r", type=int)
    b.add_argument("--w", type=int)
    b.add_argument("--v", type=int)
    b.add_argument("--oa")
    b.add_argument("--h")
    b.add_argument("--out", help="write the scheme file here")

    ln = sub.add_parser("lines", parents=[common], help="line systems from scheme idempotents")
    ln.add_argument("--lssd", type=_int_list, help="v,k,lambda,w")
    mode = ln.add_mutually_exclusive_group()
    mode.add_argument("--mub", action="store_const", dest="mode", const="mub")
    mode.add_argument("--equiangular", action="store_const", dest="mode", const="equiangular")
    ln.add_argument("--named", help="built-in parameter set")
    ln.add_argument("--coeffs", help="idempotent coefficients, comma separated rationals")

    f = sub.add_parser("families", parents=[common], help="sweep a symmetric design family")
    f.add_argument("id", type=int)
    f.add_argument("--vmax", type=int, default=10**6)

    k = sub.add_parser("connectivity", parents=[common], help="connectivity of basis relations")
    k.add_argument("--scheme", required=True, help="3cube, Ncube, petersen, cN, worked-lssd or a file")
    k.add_argument("--relation", type=int)

    d = sub.add_parser("derive", parents=[common], help="derive all parameters from an input document")
    d.add_argument("input")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args, extra = parser.parse_known_args(argv)
        if extra and args.command != "families":
            parser.error(f"unrecognized arguments: {' '.join(extra)}")
    except SystemExit as e:  # argparse usage errors and --help
        return int(e.code or 0)
    try:
        return _dispatch(args, extra)
    except InputError as e:
        sys.stderr.write(f"input error: {e}\n")
        return EXIT_USAGE
    except OSError as e:
        sys.stderr.write(f"input error: {e}\n")
        return EXIT_USAGE
    except SchemeLabError as e:
        sys.stderr.write(f"error: {type(e).__name__}: {e}\n")
        return EXIT_USAGE


def _dispatch(args: argparse.Namespace, extra: list[str]) -> int:
    fmt = args.format
    if args.command == "check":
        if args.named:
            ps = catalog.NAMED[args.named]()
            from .feasibility import run_battery

            report = run_battery(ps, args.lmax, args.cap, args.named)
            report.data.update(parameter_data(ps))
            emit(report, fmt)
            return exit_code(report)
        if not args.inputs:
            raise InputError("give input files or --named")
        if args.jobs > 1 and len(args.inputs) > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                results = list(pool.map(_check_file, args.inputs, [args.lmax] * len(args.inputs),
                                        [args.cap] * len(args.inputs)))
        else:
            results = [_check_file(p, args.lmax, args.cap) for p in args.inputs]
        worst = 0
        for path, doc, err in results:
            if err is not None:
                sys.stderr.write(f"{path}: input error: {err}\n")
                worst = max(worst, EXIT_USAGE)
                continue
            report = Report.from_json(doc)
            emit(report, fmt)
            worst = max(worst, exit_code(report))
        return worst
    if args.command == "build":
        bargs = _kv_args(args.args)
        for key in ("n", "r", "w", "v", "oa", "h"):
            if getattr(args, key) is not None:
                bargs[key] = getattr(args, key)
        report = cmd_build(args.name, bargs, args.out)
    elif args.command == "lines":
        coeffs = [parse_rational(x) for x in args.coeffs.split(",")] if args.coeffs else None
        report = cmd_lines(args.lssd, args.mode or "equiangular", args.named, coeffs)
    elif args.command == "families":
        ranges = _family_ranges(extra)
        report = cmd_families(args.id, ranges or None, args.vmax)
    elif args.command == "connectivity":
        report = cmd_connectivity(scheme_by_name(args.scheme), args.relation)
    else:
        doc = load_document(Path(args.input).read_text(encoding="utf-8"))
        report = cmd_derive(doc)
    emit(report, fmt)
    return exit_code(report)


def _family_ranges(extra: Sequence[str]) -> dict[str, range]:
    out: dict[str, range] = {}
    it = iter(extra)
    for tok in it:
        if not tok.startswith("--"):
            raise InputError(f"unexpected argument {tok!r}")
        name, _, val = tok[2:].partition("=")
        if not val:
            val = next(it, None)
            if val is None:
                raise InputError(f"missing value for --{name}")
        out[name] = _int_range(val)
    return out


if __name__ == "__main__":
    raise SystemExit(main())
