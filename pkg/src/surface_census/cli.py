"""Command-line front end.

Exit status: 0 success, 1 a verification failed or a search could not be
completed, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import census, ske
from .groups import (
    ExampleI,
    GroupConstructionError,
    SearchCapExceeded,
    SplitMetacyclic,
    automorphisms,
    construct,
    parse_descriptor,
    structure,
)
from .presentations import (
    CosetLimitExceeded,
    DEFAULT_COSET_LIMIT,
    PresentationSyntaxError,
    UnknownGenerator,
    abelian_invariants,
    coset_enumerate,
    parse_presentation,
)
from .signatures import (
    NonIntegralGenus,
    SignatureError,
    format_fraction,
    normalized_measure,
    parse_signature,
    q_fraction,
    rh_genus,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class Failure(Exception):
    """A mathematical check failed; reported with exit status 1."""


def _emit(out, fmt: str, payload, text: str, rows: Optional[list[list]] = None):
    if fmt == "json":
        out.write(json.dumps(payload, indent=2, ensure_ascii=False) + "\n")
    elif fmt == "csv":
        if rows is None:
            raise argparse.ArgumentTypeError("csv output is only available for tabular commands")
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(rows)
        out.write(buf.getvalue())
    else:
        out.write(text.rstrip("\n") + "\n")


def _table(rows: list[list[str]]) -> str:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows)


def _read_presentation(path: str):
    text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    return parse_presentation(text)


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


# ---------------------------------------------------------------------------
# subcommands


def cmd_sigma(args, out):
    rep = census.sigma_report(args.lam)
    rows = [["signature", "q", "s/r"]] + [[m["signature"], m["q"], m["s/r"]] for m in rep["finite_members"]]
    bc = rep["bound_constants"]
    text = "\n".join(
        [
            f"Sigma_{rep['lambda']}: {rep['finite_count']} finite members",
            "tails: " + (", ".join(rep["tails"]) or "none"),
            f"p_max_r = {bc['p_max_r']}, p_max_period = {bc['p_max_period']}, s_max = {bc['s_max']}",
            f"threshold: {rep['threshold']}",
            "",
            _table(rows),
        ]
    )
    _emit(out, args.format, rep, text, [["signature", "s/r"]] + [[m["signature"], m["s/r"]] for m in rep["finite_members"]])


def cmd_appendix(args, out):
    rows = census.appendix_table()
    omitted = census.appendix_omissions()
    payload = {"rows": [r.to_dict() for r in rows], "omitted": [str(s) for s in omitted]}
    table = [["signature", "s/r", "type"]] + [[str(r.signature), format_fraction(r.s_over_r), r.kind] for r in rows]
    text = _table(table) + f"\n\n{len(rows)} rows"
    if omitted:
        text += "\nalso in Sigma_8 but not in the type-I list: " + ", ".join(
            f"{s} (s/r = {format_fraction(q_fraction(s).inverse)})" for s in omitted
        )
    _emit(out, args.format, payload, text, [["signature", "s/r"]] + [[str(r.signature), format_fraction(r.s_over_r)] for r in rows])


def cmd_measure(args, out):
    sig = parse_signature(args.signature)
    value = normalized_measure(sig)
    _emit(out, args.format, {"signature": str(sig), "measure_over_2pi": format_fraction(value)}, format_fraction(value))


def cmd_q(args, out):
    sig = parse_signature(args.signature)
    q = q_fraction(sig)
    _emit(out, args.format, {"signature": str(sig), "q": str(q), "r": q.r, "s": q.s}, str(q))


def cmd_genus(args, out):
    sig = parse_signature(args.signature)
    g = rh_genus(sig, args.order)
    _emit(out, args.format, {"signature": str(sig), "group_order": args.order, "genus": g}, str(g))


def cmd_group(args, out):
    desc = parse_descriptor(args.descriptor)
    G = construct(desc)
    payload = {"group": desc.text(), "order": G.order, "generators": G.generators,
               "element_orders": {str(o): n for o, n in G.order_profile()}}
    lines = [f"{desc.text()}: order {G.order}",
             "generators: " + ", ".join(f"{k} = {G.label(v)}" for k, v in G.generators.items()),
             "element orders: " + ", ".join(f"{o}:{n}" for o, n in G.order_profile())]
    if args.structure:
        st = structure(G)
        payload["structure"] = {
            "center_order": st.center_order,
            "derived_order": st.derived_order,
            "abelianization": list(st.abelianization),
            "is_perfect": st.is_perfect,
        }
        ab = " x ".join(f"C{d}" for d in st.abelianization) or "trivial"
        lines += [f"center order: {st.center_order}", f"derived subgroup order: {st.derived_order}",
                  f"abelianization: {ab}", f"perfect: {'yes' if st.is_perfect else 'no'}"]
    if args.aut:
        A = automorphisms(G)
        payload["aut_order"] = A.order
        lines.append(f"|Aut| = {A.order}")
    _emit(out, args.format, payload, "\n".join(lines))


def cmd_order(args, out):
    pres = _read_presentation(args.presentation)
    table = coset_enumerate(pres, (), args.limit)
    _emit(out, args.format, {"presentation": str(pres), "order": table.n_cosets}, str(table.n_cosets))


def cmd_abelian(args, out):
    pres = _read_presentation(args.presentation)
    inv = abelian_invariants(pres)
    text = " x ".join(f"C{d}" if d else "Z" for d in inv) or "trivial (perfect)"
    _emit(out, args.format, {"presentation": str(pres), "invariants": inv}, text)


def _label_prime(G) -> Optional[int]:
    if isinstance(G.descriptor, (SplitMetacyclic, ExampleI)):
        return G.descriptor.p
    return None


def cmd_ske(args, out):
    desc = parse_descriptor(args.descriptor)
    sig = parse_signature(args.signature)
    G = construct(desc)
    p = args.prime if args.prime else (_label_prime(G) if args.labels else None)
    if args.labels and p is None:
        raise ske.SKEError(f"no eigenvalue prime for {desc.text()}; pass --prime")
    moves = []
    if args.pairings:
        moves = ["reflect"]
        if len(sig.periods) == 3 and sig.periods[1] == sig.periods[2]:
            moves.insert(0, "braid_swap")
    want_orbits = args.orbits or args.labels or args.pairings
    T = ske.tuple_array(G, sig)
    lines = [f"{sig} -> {desc.text()}: {len(T)} generating tuples"]
    if want_orbits:
        rep = ske.ske_report(G, sig, p if args.labels else None, moves=moves)
    else:
        rep = {"signature": str(sig), "group": desc.text(), "group_order": G.order, "tuple_count": int(len(T))}
    if want_orbits and rep["orbit_count"]:
        lines.append(f"|Aut(G)| = {rep['aut_order']}, orbits = {rep['orbit_count']}, genus = {rep['genus']}")
        for i, r in enumerate(rep["representatives"]):
            label = f"  j = {rep['labels'][i]}" if rep.get("labels") else ""
            lines.append(f"  orbit {i}: (" + ", ".join(G.label(x) for x in r) + f"){label}")
        for move, text in rep["pairings"].items():
            lines.append(f"{move}: {text}")
    _emit(out, args.format, rep, "\n".join(lines))


def cmd_family(args, out):
    if args.verify:
        rep = census.verify_family(args.case, args.p)
        rec = rep.record
        lines = [f"case ({rec.case}) p = {rec.p}: {rec.signature} -> {rec.descriptor.text()}"]
        for c in rep.checks:
            lines.append(f"  {c.status.upper():7} {c.name}: expected {c.expected}, observed {c.observed}"
                         + (f" ({c.note})" if c.note else ""))
        lines.append("PASS" if rep.ok and rep.complete else ("FAIL" if not rep.ok else "INCOMPLETE"))
        _emit(out, args.format, rep.to_dict(), "\n".join(lines))
        if not rep.ok or not rep.complete:
            raise Failure(f"family ({args.case}) at p = {args.p} did not verify")
        return
    rec = census.family(args.case, args.p)
    d = rec.to_dict()
    lines = [f"{k}: {v}" for k, v in d.items()]
    _emit(out, args.format, d, "\n".join(lines))


def cmd_ngenus(args, out):
    res = census.n_genus(args.p)
    lines = [f"N({res.genus}) = {res.value}", f"source: {res.source}"]
    if res.witness_signature is not None:
        status = {True: "verified", False: "NOT FOUND", None: "not searched (cap)"}[res.witness_verified]
        lines.append(f"witness: {res.witness_signature} -> {res.witness_group} ({status})")
    if res.note:
        lines.append(f"note: {res.note}")
    _emit(out, args.format, res.to_dict(), "\n".join(lines))
    if res.witness_verified is False:
        raise Failure("witness search found no generating tuple")


def cmd_classify(args, out):
    rep = census.classify(args.p, args.lam)
    lines = [f"p = {rep.p}, lambda = {format_fraction(rep.lam)}"]
    lines.append("family matches: " + (", ".join(f"{c.signature} ({c.family})" for c in rep.matches) or "none"))
    lines.append("r = 1 Sylow obstruction s-values: " + (", ".join(map(str, rep.obstruction_s)) or "none"))
    lines += [f"  {n}" for n in rep.obstruction_notes]
    lines.append("r = p candidates:")
    for c in rep.rp:
        tag = c.family and f"family ({c.family})" or c.verdict
        where = " [tail]" if c.tail else ""
        extra = f" [{c.citation}]" if c.citation else ""
        lines.append(f"  {str(c.signature):12} |G| = {c.group_order}{where}: {tag}; {c.reason}{extra}")
        for f in c.facts:
            lines.append(f"      fact: {f}")
    lines.append(f"signatures with r outside {{1, p}}: {rep.other_r_count} (|G| not integral)")
    used = sorted({c.citation for c in rep.r1 + rep.rp if c.citation} | ({"sylow-p-plus-1"} if rep.obstruction_s else set()))
    if used:
        lines.append("cited arguments (not mechanized):")
        lines += [f"  [{k}] {census.CITATIONS[k]}" for k in used]
    rows = [["signature", "r", "s", "group_order", "verdict", "family", "citation"]] + [
        [str(c.signature), c.r, c.s, c.group_order, c.verdict, c.family or "", c.citation or ""] for c in rep.r1 + rep.rp
    ]
    _emit(out, args.format, rep.to_dict(), "\n".join(lines), rows)


def cmd_sporadic(args, out):
    ws = census.sporadic_witnesses()
    rows = [["signature", "group", "order", "tuples", "genus"]] + [
        [str(w.signature), w.group, str(w.group_order), str(w.tuple_count), str(w.genus)] for w in ws
    ]
    _emit(out, args.format, [w.to_dict() for w in ws], _table(rows), rows)
    if not all(w.exists for w in ws):
        raise Failure("a sporadic witness was not found")


# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("text", "json", "csv"), default="text")
    parser = _Parser(prog="surface-census", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("sigma", parents=[fmt], help="enumerate Sigma_lambda and its bound constants")
    p.add_argument("--lambda", dest="lam", type=_fraction, default=Fraction(8))
    p.set_defaults(func=cmd_sigma)

    p = sub.add_parser("appendix", parents=[fmt], help="signature table for lambda = 8 with s/r")
    p.set_defaults(func=cmd_appendix)

    for name, func, hlp in (("measure", cmd_measure, "mu/2pi of a signature"), ("q", cmd_q, "q = mu/4pi")):
        p = sub.add_parser(name, parents=[fmt], help=hlp)
        p.add_argument("signature")
        p.set_defaults(func=func)

    p = sub.add_parser("genus", parents=[fmt], help="Riemann-Hurwitz genus 1 + |G| q")
    p.add_argument("signature")
    p.add_argument("order", type=int)
    p.set_defaults(func=cmd_genus)

    p = sub.add_parser("group", parents=[fmt], help="construct a group from its descriptor")
    p.add_argument("descriptor")
    p.add_argument("--structure", action="store_true")
    p.add_argument("--aut", action="store_true")
    p.set_defaults(func=cmd_group)

    p = sub.add_parser("order", parents=[fmt], help="group order by coset enumeration")
    p.add_argument("presentation", help="file with a presentation, or - for stdin")
    p.add_argument("--limit", type=int, default=DEFAULT_COSET_LIMIT)
    p.set_defaults(func=cmd_order)

    p = sub.add_parser("abelian", parents=[fmt], help="abelian invariants of a presentation")
    p.add_argument("presentation", help="file with a presentation, or - for stdin")
    p.set_defaults(func=cmd_abelian)

    p = sub.add_parser("ske", parents=[fmt], help="surface-kernel generating tuples")
    p.add_argument("descriptor")
    p.add_argument("signature")
    p.add_argument("--orbits", action="store_true")
    p.add_argument("--labels", action="store_true")
    p.add_argument("--pairings", action="store_true")
    p.add_argument("--prime", type=int, default=None, help="prime for eigenvalue labels")
    p.set_defaults(func=cmd_ske)

    p = sub.add_parser("family", parents=[fmt], help="a prime-genus family at a prime")
    p.add_argument("case", choices=census.CASES)
    p.add_argument("p", type=int)
    p.add_argument("--verify", action="store_true")
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("ngenus", parents=[fmt], help="N(p+1)")
    p.add_argument("p", type=int)
    p.set_defaults(func=cmd_ngenus)

    p = sub.add_parser("classify", parents=[fmt], help="candidate signatures at a prime")
    p.add_argument("p", type=int)
    p.add_argument("--lambda", dest="lam", type=_fraction, default=Fraction(8))
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("sporadic", parents=[fmt], help="small-genus witnesses")
    p.set_defaults(func=cmd_sporadic)
    return parser


TABULAR = {"sigma", "appendix", "classify", "sporadic"}

INPUT_ERRORS = (
    SignatureError,
    GroupConstructionError,
    PresentationSyntaxError,
    UnknownGenerator,
    census.CensusError,
    ske.SKEError,
    OSError,
)


def run(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.format == "csv" and args.command not in TABULAR:
        parser.print_usage(sys.stderr)
        print(f"surface-census: error: csv output is only available for {', '.join(sorted(TABULAR))}", file=sys.stderr)
        return EXIT_USAGE
    try:
        args.func(args, out)
    except Failure as exc:
        print(f"surface-census: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (SearchCapExceeded, CosetLimitExceeded) as exc:
        print(f"surface-census: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except NonIntegralGenus as exc:
        print(f"surface-census: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except INPUT_ERRORS as exc:
        print(f"surface-census: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def main() -> None:
    sys.exit(run())
