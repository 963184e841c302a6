"""Line-oriented structure files: Lie rings, post-Lie rings, groups, braces.

Every file starts with `format 1` and a kind header.  All integers are
decimal, parsing is locale-free, and writing is deterministic, so write
-> parse -> write is byte-identical.
"""

from __future__ import annotations

import numpy as np

from .common import ParseError
from .liering import FinGroup, LieRingSC
from .modarith import PShape
from .postlie import PostLieRing
from .skewbrace import SkewBrace

__all__ = ["parse_file", "parse_text", "write_text", "FORMAT_VERSION"]

FORMAT_VERSION = 1


def _intline(tokens, what, line_no):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(f"line {line_no}: bad integer in {what}") from None


def _parse_table(lines, start, n, what):
    rows = []
    for k in range(n):
        ln_no, ln = lines[start + k]
        vals = _intline(ln.split(), what, ln_no)
        if len(vals) != n:
            raise ParseError(f"line {ln_no}: expected {n} entries in {what} row")
        rows.append(vals)
    table = np.asarray(rows, dtype=np.int64)
    if table.min() < 0 or table.max() >= n:
        raise ParseError(f"{what} entries out of range 0..{n - 1}")
    return table


def parse_text(text: str):
    """Parse a structure file; returns (kind, value)."""
    lines = [
        (no, ln.strip())
        for no, ln in enumerate(text.splitlines(), start=1)
        if ln.strip() and not ln.strip().startswith("#")
    ]
    if not lines:
        raise ParseError("empty file")
    no, first = lines[0]
    if first != f"format {FORMAT_VERSION}":
        raise ParseError(f"line {no}: expected 'format {FORMAT_VERSION}'")
    if len(lines) < 2:
        raise ParseError("missing kind header")
    no, header = lines[1]
    toks = header.split()
    kind = toks[0]
    body = lines[2:]
    if kind in ("lie", "postlie"):
        if len(toks) < 3:
            raise ParseError(f"line {no}: need '{kind} <p> <e1> [e2 ...]'")
        p, *exps = _intline(toks[1:], "shape", no)
        try:
            shape = PShape(p, tuple(exps))
        except ValueError as exc:
            raise ParseError(f"line {no}: {exc}") from None
        brackets = {}
        triangles = {}
        for ln_no, ln in body:
            toks = ln.split()
            if len(toks) < 4 or toks[3] != ":":
                raise ParseError(f"line {ln_no}: expected '<op> <i> <j> : <coords>'")
            op = toks[0]
            i, j = _intline(toks[1:3], "generator pair", ln_no)
            coords = _intline(toks[4:], "coordinates", ln_no)
            if len(coords) != shape.rank:
                raise ParseError(f"line {ln_no}: expected {shape.rank} coordinates")
            if not (1 <= i <= shape.rank and 1 <= j <= shape.rank):
                raise ParseError(f"line {ln_no}: generator index out of range")
            if op == "bracket":
                if i >= j:
                    raise ParseError(f"line {ln_no}: bracket lines need i < j")
                brackets[(i - 1, j - 1)] = coords
            elif op == "triangle":
                triangles[(i - 1, j - 1)] = coords
            else:
                raise ParseError(f"line {ln_no}: unknown op {op!r}")
        base = LieRingSC.from_brackets(shape, brackets)
        if kind == "lie":
            if triangles:
                raise ParseError("triangle lines in a lie file")
            return "lie", base
        return "postlie", PostLieRing.from_products(base, triangles)
    if kind == "group":
        if len(toks) != 4 or toks[2] != "identity":
            raise ParseError(f"line {no}: need 'group <n> identity <idx>'")
        n, e = int(toks[1]), int(toks[3])
        if len(body) != n:
            raise ParseError(f"group table needs exactly {n} rows, found {len(body)}")
        table = _parse_table(body, 0, n, "group table")
        return "group", FinGroup(table, e)
    if kind == "skewbrace":
        if len(toks) != 2:
            raise ParseError(f"line {no}: need 'skewbrace <n>'")
        n = int(toks[1])
        if len(body) != 2 * n + 2 or body[0][1] != "dot:" or body[n + 1][1] != "circ:":
            raise ParseError("skewbrace file needs 'dot:' and 'circ:' sections")
        dot = _parse_table(body, 1, n, "dot table")
        circ = _parse_table(body, n + 2, n, "circ table")
        hits = np.nonzero((dot == np.arange(n)).all(axis=1))[0]
        if hits.size != 1:
            raise ParseError("dot table has no unique identity")
        e = int(hits[0])
        return "skewbrace", SkewBrace(FinGroup(dot, e), FinGroup(circ, e))
    raise ParseError(f"line {no}: unknown kind {kind!r}")


def parse_file(path):
    with open(path, "r", encoding="ascii") as fh:
        return parse_text(fh.read())


def _table_lines(table) -> list[str]:
    return [" ".join(str(int(v)) for v in row) for row in np.asarray(table)]


def write_text(value) -> str:
    lines = [f"format {FORMAT_VERSION}"]
    if isinstance(value, PostLieRing):
        s = value.shape
        lines.append("postlie " + str(s.p) + " " + " ".join(str(e) for e in s.exps))
        for i in range(s.rank):
            for j in range(i + 1, s.rank):
                if value.base.sc[i, j].any():
                    coords = " ".join(str(int(v)) for v in value.base.sc[i, j])
                    lines.append(f"bracket {i + 1} {j + 1} : {coords}")
        for i in range(s.rank):
            for j in range(s.rank):
                if value.tri[i, j].any():
                    coords = " ".join(str(int(v)) for v in value.tri[i, j])
                    lines.append(f"triangle {i + 1} {j + 1} : {coords}")
    elif isinstance(value, LieRingSC):
        s = value.shape
        lines.append("lie " + str(s.p) + " " + " ".join(str(e) for e in s.exps))
        for i in range(s.rank):
            for j in range(i + 1, s.rank):
                if value.sc[i, j].any():
                    coords = " ".join(str(int(v)) for v in value.sc[i, j])
                    lines.append(f"bracket {i + 1} {j + 1} : {coords}")
    elif isinstance(value, SkewBrace):
        lines.append(f"skewbrace {value.order}")
        lines.append("dot:")
        lines.extend(_table_lines(value.dot.table))
        lines.append("circ:")
        lines.extend(_table_lines(value.circ.table))
    elif isinstance(value, FinGroup):
        lines.append(f"group {value.order} identity {value.identity}")
        lines.extend(_table_lines(value.table))
    else:
        raise TypeError(f"cannot serialize {type(value)!r}")
    return "\n".join(lines) + "\n"
