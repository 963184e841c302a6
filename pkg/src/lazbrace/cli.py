"""Command-line interface: check, convert, bch-words, enumerate, root-diff,
roundtrip.

Exit codes: 0 ok, 1 verification failure, 2 parse error, 3 capability
refused (non-Lazard input or a size cap).
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import formats, freelie
from .common import CapabilityError, CapExceededError, FailedTheoremError, NotLazardError, ParseError
from .liering import (
    FinGroup,
    canonical_group_filtration,
    is_lazard,
    laz_inv,
    lower_central_series,
    table_to_sc,
    verify_group_table,
    verify_lie,
)
from .modarith import PShape
from .postlie import (
    enumerate_prelie_ops,
    enumerate_prelie_ops_aff,
    l_series,
    substructures,
    verify_post_lie,
)
from .skewbrace import (
    SkewBrace,
    enumerate_braces,
    enumerate_braces_via_chains,
    isomorphism_classes,
    l_series_brace,
    substructures_brace,
    verify_skew_brace,
)
from .lazcorr import brace_to_post_lie, lambda_derivative, post_lie_to_brace

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_PARSE = 2
EXIT_REFUSED = 3


def _fmt_set(s) -> str:
    return "{" + ",".join(str(x) for x in sorted(s)) + "}"


def _check_lie(L, out):
    rep = verify_lie(L)
    if not rep.ok:
        out.append("verify: FAIL")
        out.extend("  " + f for f in rep.failures)
        return EXIT_VERIFY
    ser = lower_central_series(L)
    cls = ser.nilpotency_class
    lazard = cls is not None and cls < L.shape.p
    head = f"Lie ring, class {cls if cls is not None else 'infinite (not nilpotent)'}"
    head += f", {'Lazard' if lazard else 'not Lazard'} (p={L.shape.p})"
    out.insert(0, head)
    out.append(f"shape: {L.shape}")
    out.append("verify: pass")
    out.append("series sizes: " + " ".join(str(len(t)) for t in ser.terms))
    return EXIT_OK


def _check_postlie(P, out):
    rep = verify_post_lie(P)
    if not rep.ok:
        out.append("verify: FAIL")
        out.extend("  " + f for f in rep.failures)
        return EXIT_VERIFY
    ser = l_series(P)
    cls = ser.nilpotency_class
    lazard = cls is not None and cls < P.shape.p
    out.insert(0, (
        f"post-Lie ring, L-class {cls if cls is not None else 'infinite'}"
        f", {'Lazard' if lazard else 'not Lazard'} (p={P.shape.p})"
    ))
    out.append(f"shape: {P.shape}")
    out.append("verify: pass")
    fix, soc, ann = substructures(P)
    out.append(f"fix: {_fmt_set(fix)}")
    out.append(f"soc: {_fmt_set(soc)}")
    out.append(f"ann: {_fmt_set(ann)}")
    return EXIT_OK


def _check_group(G, out):
    rep = verify_group_table(G.table)
    if not rep.ok:
        out.append("verify: FAIL")
        out.extend("  " + f for f in rep.failures)
        return EXIT_VERIFY
    ser = canonical_group_filtration(G)
    cls = ser.nilpotency_class
    out.insert(0, f"group of order {G.order}, class {cls if cls is not None else 'infinite'}")
    out.append("verify: pass")
    return EXIT_OK


def _check_brace(B, out):
    rep = verify_skew_brace(B)
    if not rep.ok:
        out.append("verify: FAIL")
        out.extend("  " + f for f in rep.failures)
        return EXIT_VERIFY
    ser = l_series_brace(B)
    cls = ser.nilpotency_class
    kind = "brace" if B.is_brace else "skew brace"
    lazard = cls is not None and cls < B.p
    out.insert(0, (
        f"skew brace ({kind}), L-class {cls if cls is not None else 'infinite'}"
        f", {'Lazard' if lazard else 'not Lazard'} (p={B.p})"
    ))
    out.append("verify: pass")
    fix, soc, ann = substructures_brace(B)
    out.append(f"fix: {_fmt_set(fix)}")
    out.append(f"soc: {_fmt_set(soc)}")
    out.append(f"ann: {_fmt_set(ann)}")
    return EXIT_OK


def cmd_check(args) -> int:
    kind, value = formats.parse_file(args.path)
    out: list[str] = []
    code = {
        "lie": _check_lie,
        "postlie": _check_postlie,
        "group": _check_group,
        "skewbrace": _check_brace,
    }[kind](value, out)
    print("\n".join(out))
    return code


def cmd_convert(args) -> int:
    kind, value = formats.parse_file(args.path)
    if args.to == "brace":
        if kind != "postlie":
            raise ParseError(f"convert --to brace needs a postlie file, got {kind}")
        flow = post_lie_to_brace(value)
        text = formats.write_text(flow.brace)
    else:
        if kind != "skewbrace":
            raise ParseError(f"convert --to postlie needs a skewbrace file, got {kind}")
        log = brace_to_post_lie(value)
        text = formats.write_text(log.post_lie)
    if args.output:
        with open(args.output, "w", encoding="ascii") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_roundtrip(args) -> int:
    kind, value = formats.parse_file(args.path)
    if kind == "postlie":
        flow = post_lie_to_brace(value)
        back = brace_to_post_lie(flow.brace)
        same = formats.write_text(back.post_lie) == formats.write_text(value)
    elif kind == "skewbrace":
        log = brace_to_post_lie(value)
        flow = post_lie_to_brace(log.post_lie)
        eo, ie = log.basis.elem_of, log.basis.index_of_elem
        dot_back = eo[flow.brace.dot.table[ie[:, None], ie[None, :]]]
        circ_back = eo[flow.brace.circ.table[ie[:, None], ie[None, :]]]
        same = np.array_equal(dot_back, value.dot.table) and np.array_equal(
            circ_back, value.circ.table
        )
    else:
        raise ParseError(f"roundtrip needs a postlie or skewbrace file, got {kind}")
    print("roundtrip: " + ("exact" if same else "MISMATCH"))
    return EXIT_OK if same else EXIT_VERIFY


def cmd_bch_words(args) -> int:
    if args.class_bound > freelie.MAX_WORD_CLASS:
        raise CapExceededError(f"class bound capped at {freelie.MAX_WORD_CLASS}")
    text = freelie.dump_tables(args.class_bound)
    if args.recheck:
        c, bch, p_word, q_word = freelie.load_tables(text)
        basis = freelie.get_basis(c)
        ok = (
            freelie.evaluate_group_word(p_word, c) == basis.gen(0) + basis.gen(1)
            and freelie.evaluate_group_word(q_word, c) == basis.gen(0).bracket(basis.gen(1))
        )
        print(f"# self-inversion at class {c}: {'pass' if ok else 'FAIL'}", file=sys.stderr)
        if not ok:
            return EXIT_VERIFY
    if args.output:
        with open(args.output, "w", encoding="ascii") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _parse_shape(spec: str) -> PShape:
    try:
        p_s, exps_s = spec.split(":")
        return PShape(int(p_s), tuple(int(e) for e in exps_s.split(",")))
    except ValueError as exc:
        raise ParseError(f"bad shape spec {spec!r}; use 'p:e1,e2,...'") from exc


def cmd_enumerate(args) -> int:
    shape = _parse_shape(args.shape)
    p = shape.p
    k = sum(shape.exps)
    if k >= p:
        raise NotLazardError(
            f"order p^{k} with k >= p = {p} refused: the correspondence needs k < p"
        )
    if shape.order > args.max_order and not args.force:
        raise CapExceededError(
            f"order {shape.order} above --max-order {args.max_order} (use --force)"
        )
    coords = shape.all_coords()
    A = FinGroup(shape.index_batch(coords[:, None, :] + coords[None, :, :]), 0)
    braces = enumerate_braces(A)
    braces_chain = enumerate_braces_via_chains(A)
    prelie = enumerate_prelie_ops(shape)
    prelie_aff = enumerate_prelie_ops_aff(shape)
    print(f"shape {shape}: braces by lambda search: {len(braces)}")
    print(f"shape {shape}: braces by Hol^+ chain union: {len(braces_chain)}")
    print(f"shape {shape}: left-nilpotent pre-Lie by triangle search: {len(prelie)}")
    print(f"shape {shape}: left-nilpotent pre-Lie by graph closure: {len(prelie_aff)}")
    ok = len(braces) == len(braces_chain) and len(prelie) == len(prelie_aff)
    ok = ok and len(braces) == len(prelie)
    brace_keys = {B.circ.table.tobytes() for B in braces}
    matched = 0
    for P in prelie:
        flow = post_lie_to_brace(P, check=False)
        if flow.brace.circ.table.tobytes() in brace_keys:
            matched += 1
    print(f"flow images matched into the brace catalog: {matched}/{len(prelie)}")
    ok = ok and matched == len(prelie)
    if args.iso_dedup:
        classes = isomorphism_classes(braces)
        print(f"brace isomorphism classes: {len(classes)}")
    print("pairing: " + ("bijective" if ok else "MISMATCH"))
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_root_diff(args) -> int:
    kind, value = formats.parse_file(args.path)
    if kind != "skewbrace":
        raise ParseError(f"root-diff needs a skewbrace file, got {kind}")
    log = brace_to_post_lie(value)
    lambda_derivative(value, log)
    print("root-of-unity triangle matches the logged triangle: exact")
    text = formats.write_text(log.post_lie)
    if args.output:
        with open(args.output, "w", encoding="ascii") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="lazbrace",
        description="Exact Lazard correspondence between post-Lie rings and skew braces",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="verify a structure file and report invariants")
    p.add_argument("path")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("convert", help="apply the correspondence in either direction")
    p.add_argument("path")
    p.add_argument("--to", choices=("brace", "postlie"), required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("roundtrip", help="convert there and back, compare exactly")
    p.add_argument("path")
    p.set_defaults(func=cmd_roundtrip)

    p = sub.add_parser("bch-words", help="export the BCH and inverse-word tables")
    p.add_argument("class_bound", type=int)
    p.add_argument("-o", "--output")
    p.add_argument("--recheck", action="store_true", help="re-verify self-inversion")
    p.set_defaults(func=cmd_bch_words)

    p = sub.add_parser("enumerate", help="enumerate braces and pre-Lie rings on a shape")
    p.add_argument("shape", help="shape spec 'p:e1,e2,...'")
    p.add_argument("--max-order", type=int, default=9)
    p.add_argument("--force", action="store_true")
    p.add_argument("--iso-dedup", action="store_true")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("root-diff", help="recover the triangle from lambda via roots of unity")
    p.add_argument("path")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_root_diff)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CapabilityError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except FailedTheoremError as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
