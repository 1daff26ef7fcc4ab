"""Command-line front end: certify, census, classify, conjecture.

Exit statuses: 0 success (stable to depth, or classification done),
1 error, 2 reducibility found or oracle disagreement, 3 budget exceeded.
Every output carries the manifest describing the run inline.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import functools
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import PROPERTY_SEED, __version__
from .classify import (
    IRREDUCIBLE_CUBIC,
    LINEAR_QUADRATIC,
    SPLITS,
    cubic_trinomial_verdict,
    quartic_binomial_irreducible,
    quartic_char3_classify,
)
from .errors import (
    DegreeOverflow,
    DepthBudgetExceeded,
    ParseError,
    SizeCapExceeded,
    StablePolyError,
)
from .gftower import FieldDescriptor, field_of_order, is_square
from .polyring import DEFAULT_DEGREE_CAP, Poly, discriminant, factor_pattern, is_squarefree
from .stability import (
    GENERIC_DEPTH_BUDGET,
    IRREDUCIBLE,
    REDUCIBLE,
    THEOREM_DEPTH_BUDGET,
    UNTESTED,
    certify_stability,
    depth_budget,
    direct_iterate_oracle,
    size_cap,
)

EXIT_OK, EXIT_ERROR, EXIT_REDUCIBLE, EXIT_BUDGET = 0, 1, 2, 3

CENSUS_CAPS = {2: 27, 3: 9, 4: 5}
CONJECTURE_POLY = "1,0,1,1"  # x^3 + x^2 + 1 over F_2
CONJECTURE_ORACLE_CAP = 3**7

PATTERN_NAMES = {SPLITS: "SplitsLinear", LINEAR_QUADRATIC: "LinearTimesQuadratic", IRREDUCIBLE_CUBIC: "Irreducible"}


class UsageError(StablePolyError, ValueError):
    """Bad command-line input that the library itself would not reject."""


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which would collide with "reducible"
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# manifest and shared helpers


def census_cap(d: int) -> int:
    env = os.environ.get(f"STABLEPOLY_CENSUS_CAP_{d}")
    return int(env) if env else CENSUS_CAPS.get(d, 0)


def _timestamp() -> str:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    now = _dt.datetime.fromtimestamp(int(epoch), _dt.timezone.utc) if epoch else _dt.datetime.now(_dt.timezone.utc)
    return now.replace(microsecond=0).isoformat()


def manifest(command: str, params: dict) -> dict:
    return {
        "command": command,
        "params": params,
        "version": __version__,
        "budgets": {
            "generic_depth": {str(d): depth_budget(d, "generic") for d in GENERIC_DEPTH_BUDGET},
            "theorem_depth": {str(d): depth_budget(d, "theorem") for d in THEOREM_DEPTH_BUDGET},
            "size_cap": size_cap(),
            "census_q_cap": {str(d): census_cap(d) for d in CENSUS_CAPS},
        },
        "seeds": {"property_tests": PROPERTY_SEED},
        "timestamp": _timestamp(),
    }


@functools.lru_cache(maxsize=32)
def _field_from(q: int | None, field_text: str | None) -> FieldDescriptor:
    if field_text:
        return FieldDescriptor.parse(field_text)
    if q is None:
        raise UsageError("give --q or --field")
    return field_of_order(q)


def _field(args) -> FieldDescriptor:
    desc = _field_from(args.q, args.field)
    if args.q is not None and args.field and desc.cardinality() != args.q:
        raise UsageError(f"--field has {desc.cardinality()} elements but --q is {args.q}")
    return desc


def _params(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "out")}


def _dump(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# certify


def cmd_certify(args) -> int:
    desc = _field(args)
    f = Poly.parse(desc, args.poly)
    report = certify_stability(f, args.degree, args.depth, args.method)
    rec = report.as_record(with_timing=args.timing)
    if args.format == "line":
        sys.stdout.write(report.line() + "\n")
    else:
        doc = {
            "manifest": manifest("certify", _params(args)),
            "field": desc.encode(),
            "report": rec,
            "status": "stable-to-depth" if report.stable_to_depth else "reducible",
        }
        sys.stdout.write(_dump(doc))
    return EXIT_OK if report.stable_to_depth else EXIT_REDUCIBLE


# ---------------------------------------------------------------------------
# census


def _sweep_polys(desc: FieldDescriptor, d: int):
    """(index, encoding, params) of every degree-d polynomial in canonical order."""
    q = desc.cardinality()
    lvl = desc.height
    for n in range(q ** (d + 1)):
        if n // q**d == 0:
            continue
        digits = [(n // q**i) % q for i in range(d + 1)]
        f = Poly.from_elements([desc.from_index(v, lvl) for v in digits])
        yield n, f.encode(), ""


def _family_polys(desc: FieldDescriptor, d: int):
    from . import families as fam

    q = desc.cardinality()
    lvl = desc.height
    elems = list(desc.elements(lvl))
    nonzero = elems[1:]
    rows = []
    if d == 2:
        if desc.p == 2:
            raise UsageError("the quadratic family needs odd q")
        nonsq = [e for e in nonzero if not is_square(e)]
        for b in nonzero:
            for dl in nonsq:
                rows.append((fam.quad_build(desc, b, dl).f, f"b={b.encode()};delta={dl.encode()}"))
    elif d == 3:
        if desc.p != 2:
            raise UsageError("the cubic family needs q a power of 2")
        for a in elems:
            for b in nonzero:
                if fam.cubic2_hypothesis(a, b):
                    rows.append((fam.cubic2_build(desc, a, b).f, f"a={a.encode()};b={b.encode()}"))
    elif d == 4:
        if desc.p == 3:
            for a in elems:
                for b in nonzero:
                    for c in nonzero:
                        inst = fam.quartic3_build(desc, a, b, c)
                        rows.append((inst.f, f"a={a.encode()};b={b.encode()};c={c.encode()}"))
        elif q % 4 == 1:
            for a in nonzero:
                for b in nonzero:
                    rows.append((fam.quartic_build(desc, a, b).f, f"a={a.encode()};b={b.encode()}"))
        else:
            raise UsageError("quartic families need q = 1 mod 4 or characteristic 3")
    else:
        raise UsageError(f"no family of degree {d}")
    for i, (f, params) in enumerate(rows):
        yield i, f.encode(), params


def _census_task(task) -> dict:
    field_text, index, poly, params, d, depth, method, timing = task
    desc = _field_from(None, field_text)
    report = certify_stability(Poly.parse(desc, poly), d, depth, method)
    rec = report.as_record(with_timing=timing)
    deepest = -1
    for v in report.verdicts:
        if v != IRREDUCIBLE:
            break
        deepest += 1
    return {
        "index": index,
        "poly": poly,
        "params": params,
        "verdicts": report.line().split("\t")[1],
        "first_reducible": "" if report.first_reducible is None else report.first_reducible,
        "deepest_irreducible": deepest,
        "stable_to_depth": int(report.stable_to_depth),
        "certificate": report.certificate,
        **({"seconds": sum(rec["seconds"])} if timing else {}),
    }


CENSUS_COLUMNS = ["index", "poly", "params", "verdicts", "first_reducible", "deepest_irreducible", "stable_to_depth", "certificate"]


def census_summary(rows: list[dict], q: int, d: int, depth: int) -> dict:
    stable = sum(r["stable_to_depth"] for r in rows)
    hist: dict[str, int] = {}
    for r in rows:
        key = str(r["deepest_irreducible"])
        hist[key] = hist.get(key, 0) + 1
    out = {
        "rows": len(rows),
        "depth": depth,
        "stable_to_depth": stable,
        "deepest_irreducible_histogram": dict(sorted(hist.items(), key=lambda kv: int(kv[0]))),
    }
    if d == 2:
        bound, prior = (q * q - 1) // 2, (q - 1) ** 2 // 4
        out.update(
            family_bound=bound,
            prior_bound=prior,
            meets_family_bound=stable >= bound,
            meets_prior_bound=stable >= prior,
        )
    return out


def run_census(desc: FieldDescriptor, d: int, depth: int, method: str, family: bool, jobs: int = 1, timing: bool = False) -> list[dict]:
    q = desc.cardinality()
    cap = census_cap(d)
    if q > cap:
        raise SizeCapExceeded(f"q = {q} exceeds the census cap {cap} for degree {d}")
    source = _family_polys(desc, d) if family else _sweep_polys(desc, d)
    text = desc.encode()
    tasks = [(text, i, poly, params, d, depth, method, timing) for i, poly, params in source]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            # map yields in submission order, which is the canonical order
            rows = list(pool.map(_census_task, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        rows = [_census_task(t) for t in tasks]
    return rows


def cmd_census(args) -> int:
    desc = _field(args)
    rows = run_census(desc, args.degree, args.depth, args.method, args.family, args.jobs, args.timing)
    buf = io.StringIO()
    buf.write("# manifest " + json.dumps(manifest("census", _params(args)), sort_keys=True) + "\n")
    cols = CENSUS_COLUMNS + (["seconds"] if args.timing else [])
    writer = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    summary = census_summary(rows, desc.cardinality(), args.degree, args.depth)
    buf.write("# summary " + json.dumps(summary, sort_keys=True) + "\n")
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return EXIT_OK


# ---------------------------------------------------------------------------
# classify

KIND_ARITY = {"cubic2": 2, "quartic3": 2, "binomial4": 1}


def classify_record(desc: FieldDescriptor, kind: str, coeffs: list[str], check: bool) -> dict:
    lvl = desc.height
    q = desc.cardinality()
    elems = [desc.parse_element(c, lvl) for c in coeffs]
    arity = KIND_ARITY.get(kind)
    if arity is not None and len(elems) != arity:
        raise UsageError(f"--kind {kind} takes {arity} coefficient(s), got {len(elems)}")
    zero, one = desc.zero(lvl), desc.one(lvl)
    witnesses: dict = {}
    if kind == "cubic2":
        a, b = elems
        if desc.p != 2:
            raise UsageError(f"hypothesis violated: cubic2 needs q a power of 2, got q = {q}")
        if b.is_zero():
            raise UsageError("hypothesis violated: b != 0 (x^3 + a x has the factor x)")
        v = cubic_trinomial_verdict(a, b)
        verdict = PATTERN_NAMES[v.pattern]
        predicted = v.pattern
        witnesses = {"trace_condition": v.trace_matches, "roots_level": v.roots_level, "cubes": list(v.cubes)}
        if v.t1 is not None:
            witnesses["t"] = [v.t1.encode(), v.t2.encode()]
        poly = Poly.from_elements([b, a, zero, one])
    elif kind == "quartic3":
        c, d = elems
        if desc.p != 3:
            raise UsageError(f"hypothesis violated: quartic3 needs q a power of 3, got q = {q}")
        if c.is_zero():
            raise UsageError("hypothesis violated: c != 0")
        v = quartic_char3_classify(c, d)
        verdict = v.case
        predicted = v.pattern
        witnesses = {
            "resolvent_roots": [r.encode() for r in v.roots],
            "split_root": None if v.r is None else v.r.encode(),
            "residues": {str(k): val for k, val in sorted(v.residues.items(), key=lambda kv: str(kv[0]))},
        }
        poly = v.quartic()
    elif kind == "binomial4":
        (a,) = elems
        if q % 4 != 1:
            raise UsageError(f"hypothesis violated: q = 1 mod 4, got q = {q}")
        if a.is_zero():
            raise UsageError("hypothesis violated: a != 0")
        irr = quartic_binomial_irreducible(a)
        verdict = "Irreducible" if irr else "Reducible"
        predicted = None
        witnesses = {"a_is_square": not irr}
        poly = Poly.from_elements([-a, zero, zero, zero, one])
    elif kind == "parity":
        if desc.p == 2:
            raise UsageError("hypothesis violated: parity law needs odd characteristic")
        poly = Poly.from_elements(elems)
        if not 2 <= poly.degree <= 4:
            raise UsageError(f"hypothesis violated: degree in 2..4, got {poly.degree}")
        if not is_squarefree(poly):
            raise UsageError("hypothesis violated: squarefree")
        disc_sq = is_square(discriminant(poly))
        predicted_parity = poly.degree % 2 if disc_sq else (poly.degree + 1) % 2
        verdict = f"factor count is {'even' if predicted_parity == 0 else 'odd'}"
        predicted = None
        witnesses = {"discriminant": discriminant(poly).encode(), "discriminant_is_square": disc_sq}
    else:
        raise UsageError(f"unknown kind {kind!r}")
    rec = {"kind": kind, "q": q, "coefficients": [e.encode() for e in elems], "poly": poly.encode(), "verdict": verdict, "witnesses": witnesses}
    if check:
        oracle = factor_pattern(poly)
        if kind == "binomial4":
            agree = oracle.is_irreducible() == (verdict == "Irreducible")
        elif kind == "parity":
            agree = oracle.count % 2 == predicted_parity
        else:
            agree = oracle == predicted
        rec["check"] = {"oracle_pattern": str(oracle), "agree": agree}
        if predicted is not None:
            rec["check"]["classifier_pattern"] = str(predicted)
    return rec


def cmd_classify(args) -> int:
    desc = _field(args)
    rec = classify_record(desc, args.kind, args.coefficients, args.check)
    sys.stdout.write(_dump({"manifest": manifest("classify", _params(args)), "result": rec}))
    if args.check and not rec["check"]["agree"]:
        return EXIT_REDUCIBLE
    return EXIT_OK


# ---------------------------------------------------------------------------
# conjecture


def conjecture_table(depth: int, oracle_cap: int = CONJECTURE_ORACLE_CAP) -> list[dict]:
    """Theorem-driven, generic and direct-iterate verdicts for x^3 + x^2 + 1 over F_2.

    Row n is about f_n, equivalently the iterate f^(n+1) of degree 3^(n+1).
    Columns beyond a method's budget are ``untested``.
    """
    desc = field_of_order(2)
    f = Poly.parse(desc, CONJECTURE_POLY)
    theorem = certify_stability(f, 3, depth, "theorem")
    generic_depth = min(depth, depth_budget(3, "generic"))
    generic = certify_stability(f, 3, generic_depth, "generic")
    rows = []
    for n in range(depth + 1):
        gen = generic.verdicts[n] if n <= generic_depth else UNTESTED
        if 3 ** (n + 1) <= min(oracle_cap, DEFAULT_DEGREE_CAP):
            orc = IRREDUCIBLE if direct_iterate_oracle(f, n + 1, oracle_cap) else REDUCIBLE
        else:
            orc = UNTESTED
        tested = {v for v in (theorem.verdicts[n], gen, orc) if v != UNTESTED}
        rows.append({
            "depth": n,
            "iterate_degree": 3 ** (n + 1),
            "theorem": theorem.verdicts[n],
            "theorem_method": theorem.methods[n],
            "generic": gen,
            "oracle": orc,
            "agree": len(tested) == 1,
        })
    return rows


def cmd_conjecture(args) -> int:
    rows = conjecture_table(args.depth, args.oracle_cap)
    ok = all(r["agree"] and r["theorem"] == IRREDUCIBLE for r in rows)
    if args.format == "json":
        sys.stdout.write(_dump({"manifest": manifest("conjecture", _params(args)), "rows": rows, "all_agree_irreducible": ok}))
    else:
        out = ["# manifest " + json.dumps(manifest("conjecture", _params(args)), sort_keys=True)]
        out.append("depth\tdegree\ttheorem\tgeneric\toracle\tagree")
        for r in rows:
            out.append(f"{r['depth']}\t{r['iterate_degree']}\t{r['theorem']}\t{r['generic']}\t{r['oracle']}\t{'yes' if r['agree'] else 'NO'}")
        sys.stdout.write("\n".join(out) + "\n")
    return EXIT_OK if ok else EXIT_REDUCIBLE


# ---------------------------------------------------------------------------
# entry point


def _add_field(p: argparse.ArgumentParser) -> None:
    p.add_argument("--q", type=int, help="field size (prime power); a default tower is chosen")
    p.add_argument("--field", help="explicit field descriptor, e.g. '2; 1,1,1' for F_4")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="stablepoly", description="Stability of polynomial iterates over finite fields.")
    parser.add_argument("--version", action="version", version=f"stablepoly {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("certify", help="certify iterate stability of one polynomial")
    _add_field(p)
    p.add_argument("--poly", required=True, help="coefficients c0,c1,... in ascending degree")
    p.add_argument("--degree", type=int, default=None)
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--method", choices=["theorem", "generic"], default="theorem")
    p.add_argument("--format", choices=["json", "line"], default="json")
    p.add_argument("--timing", action="store_true", help="include per-level seconds")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("census", help="certify every polynomial (or family member) of a degree")
    _add_field(p)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--method", choices=["theorem", "generic"], default="theorem")
    p.add_argument("--family", action="store_true", help="only the family members of this degree")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", help="CSV destination (default stdout)")
    p.add_argument("--timing", action="store_true")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("classify", help="factorization pattern from a closed-form classifier")
    _add_field(p)
    p.add_argument("--kind", choices=["cubic2", "quartic3", "binomial4", "parity"], required=True)
    p.add_argument("coefficients", nargs="+", help="cubic2: a b; quartic3: c d; binomial4: a; parity: c0 c1 ...")
    p.add_argument("--check", action="store_true", help="compare with brute-force factorization")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("conjecture", help="three-way check that x^3+x^2+1 is stable over F_2")
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--oracle-cap", type=int, default=CONJECTURE_ORACLE_CAP)
    p.add_argument("--format", choices=["table", "json"], default="table")
    p.set_defaults(func=cmd_conjecture)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DepthBudgetExceeded, SizeCapExceeded, DegreeOverflow) as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (StablePolyError, ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
