"""Post-Lie rings: axioms, the second Lie ring a-circ, L-series and
nilpotency predicates, fix/socle/annihilator, ideal classification, and
the adjoint filtration.

A post-Lie ring is a finite Lie ring with a biadditive product (right
triangle) satisfying the two compatibility axioms; the axioms are checked
on generator triples, to which tri-additivity reduces them.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .common import FailedTheoremError, IdealLevel
from .liering import (
    CheckReport,
    Filtration,
    LieRingSC,
    SeriesResult,
    add_closure,
    _bracket_set,
    _subgroup_gens,
    lower_central_series,
    verify_lie,
)
from .modarith import Endo, ModArithError, PShape, PVec

__all__ = [
    "PostLieRing",
    "verify_post_lie",
    "circ_ring",
    "l_series",
    "l_nilpotency_decomposition",
    "right_nilpotent",
    "substructures",
    "ideal_type",
    "classify_subset",
    "adjoint_filtration",
    "AdjointFiltration",
    "is_square_free",
    "l_mul",
    "enumerate_prelie_ops",
    "enumerate_prelie_ops_aff",
]


@dataclass(frozen=True)
class PostLieRing:
    """Lie ring plus triangle structure constants tri[i, j] = g_i > g_j."""

    base: LieRingSC
    tri: np.ndarray

    def __post_init__(self):
        s = self.base.shape
        arr = s.reduce(np.asarray(self.tri, dtype=np.int64))
        if arr.shape != (s.rank, s.rank, s.rank):
            raise ModArithError("triangle constants must be (r, r, r)")
        for i in range(s.rank):
            for j in range(s.rank):
                killer = s.p ** min(s.exps[i], s.exps[j])
                if s.reduce(killer * arr[i, j]).any():
                    raise ModArithError(
                        f"g{i} > g{j} not killed by p^min(e{i},e{j}); triangle ill-defined"
                    )
        arr.setflags(write=False)
        object.__setattr__(self, "tri", arr)

    @property
    def shape(self) -> PShape:
        return self.base.shape

    @classmethod
    def from_products(cls, base: LieRingSC, products: dict) -> "PostLieRing":
        """Build from {(i, j): coords of g_i > g_j}; omitted pairs are zero."""
        r = base.shape.rank
        tri = np.zeros((r, r, r), dtype=np.int64)
        for (i, j), coords in products.items():
            tri[i, j] = base.shape.reduce(np.asarray(coords, dtype=np.int64))
        return cls(base, tri)

    def tri_batch(self, U, V) -> np.ndarray:
        U = np.asarray(U, dtype=np.int64)
        V = np.asarray(V, dtype=np.int64)
        r = self.shape.rank
        flat = (U @ self.tri.reshape(r, r * r)).reshape(U.shape[:-1] + (r, r))
        flat = self.shape.reduce(flat)
        out = np.matmul(V[..., None, :], flat)[..., 0, :]
        return self.shape.reduce(out)

    def triangle(self, u: PVec, v: PVec) -> PVec:
        return self.shape.vec(self.tri_batch(u.np(), v.np()))


def l_mul(P: PostLieRing, a: PVec) -> Endo:
    """Left multiplication L_a : b -> a > b as an additive endomorphism."""
    rows = [P.triangle(a, P.shape.unit(j)).coords for j in range(P.shape.rank)]
    return Endo(P.shape, tuple(rows))


def verify_post_lie(P: PostLieRing) -> CheckReport:
    """Both post-Lie axioms on all generator triples (tri-additivity extends)."""
    base_rep = verify_lie(P.base)
    if not base_rep.ok:
        return CheckReport(False, tuple("base: " + f for f in base_rep.failures))
    s = P.shape
    failures = []
    units = np.eye(s.rank, dtype=np.int64)
    br = P.base.bracket_batch
    tri = P.tri_batch
    for i in range(s.rank):
        for j in range(s.rank):
            for k in range(j + 1, s.rank):
                lhs = tri(units[i], br(units[j], units[k]))
                rhs = br(tri(units[i], units[j]), units[k]) + br(units[j], tri(units[i], units[k]))
                if s.reduce(lhs - rhs).any():
                    failures.append(f"derivation axiom fails on (g{i},g{j},g{k})")
    for i in range(s.rank):
        for j in range(i + 1, s.rank):
            for k in range(s.rank):
                lhs = tri(br(units[i], units[j]), units[k])
                assoc_ijk = tri(units[i], tri(units[j], units[k])) - tri(tri(units[i], units[j]), units[k])
                assoc_jik = tri(units[j], tri(units[i], units[k])) - tri(tri(units[j], units[i]), units[k])
                if s.reduce(lhs - (assoc_ijk - assoc_jik)).any():
                    failures.append(f"associator axiom fails on (g{i},g{j},g{k})")
    return CheckReport(not failures, tuple(failures))


def circ_ring(P: PostLieRing) -> LieRingSC:
    """The second Lie ring {a,b} = [a,b] + a>b - b>a on the same carrier."""
    s = P.shape
    sc = s.reduce(P.base.sc + P.tri - P.tri.transpose(1, 0, 2))
    out = LieRingSC(s, sc)
    rep = verify_lie(out)
    if not rep.ok:
        raise FailedTheoremError(f"circ bracket is not a Lie ring: {rep.failures}")
    return out


def _tri_set(P: PostLieRing, A: frozenset, B: frozenset) -> set[int]:
    """{index(a > b) : a in A, b in B}."""
    s = P.shape
    ac = s.coords_batch(np.asarray(sorted(A), dtype=np.int64))
    bc = s.coords_batch(np.asarray(sorted(B), dtype=np.int64))
    out: set[int] = set()
    step = max(1, (1 << 18) // max(1, len(bc)))
    for start in range(0, len(ac), step):
        blk = P.tri_batch(ac[start:start + step, None, :], bc[None, :, :])
        out.update(int(v) for v in np.unique(s.index_batch(blk)))
    return out


def _descending_series(shape: PShape, step_gens) -> SeriesResult:
    """Generic descending series: step_gens(full_gens, cur_gens) -> new generators."""
    full = frozenset(range(shape.order))
    unit_idx = frozenset(shape.unit(i).index for i in range(shape.rank))
    terms = [full]
    cur, cur_gens = full, unit_idx
    while len(cur) > 1:
        new_gens = step_gens(unit_idx, frozenset(cur_gens))
        new = add_closure(shape, new_gens)
        if new == cur:
            return SeriesResult(tuple(terms), None)
        terms.append(new)
        cur = new
        cur_gens = frozenset(_subgroup_gens(shape, new)) or frozenset({0})
    return SeriesResult(tuple(terms), len(terms) - 1)


def l_series(P: PostLieRing) -> SeriesResult:
    """L^1 = a, L^(i+1) = <x > y and [x, y] : x in a, y in L^i>."""
    def step(full_gens, cur_gens):
        return sorted(_tri_set(P, full_gens, cur_gens) | _bracket_set(P.base, full_gens, cur_gens))

    return _descending_series(P.shape, step)


def left_series(P: PostLieRing) -> SeriesResult:
    """a^1 = a, a^(i+1) = <x > y : x in a, y in a^i> (left nilpotency series)."""
    def step(full_gens, cur_gens):
        return sorted(_tri_set(P, full_gens, cur_gens))

    return _descending_series(P.shape, step)


def right_series(P: PostLieRing) -> SeriesResult:
    def step(full_gens, cur_gens):
        return sorted(_tri_set(P, cur_gens, full_gens))

    return _descending_series(P.shape, step)


def l_nilpotency_decomposition(P: PostLieRing) -> tuple[bool, bool, bool]:
    """(left nilpotent, base nilpotent, L-nilpotent); asserts the equivalence
    L-nilpotent <=> left nilpotent and base nilpotent."""
    left = left_series(P).is_nilpotent
    base = lower_central_series(P.base).is_nilpotent
    lnil = l_series(P).is_nilpotent
    if lnil != (left and base):
        raise FailedTheoremError("L-nilpotency equivalence violated")
    return left, base, lnil


def right_nilpotent(P: PostLieRing) -> bool:
    return right_series(P).is_nilpotent


def substructures(P: PostLieRing) -> tuple[frozenset, frozenset, frozenset]:
    """(Fix, Soc, Ann) as index sets; verifies the claimed ideal levels."""
    s = P.shape
    coords = s.all_coords()
    units = np.eye(s.rank, dtype=np.int64)
    fix_mask = np.ones(s.order, dtype=bool)
    soc_mask = np.ones(s.order, dtype=bool)
    for i in range(s.rank):
        fix_mask &= ~P.tri_batch(units[i][None, :], coords).any(axis=-1)
        soc_mask &= ~P.tri_batch(coords, units[i][None, :].repeat(s.order, 0)).any(axis=-1)
        soc_mask &= ~P.base.bracket_batch(coords, units[i][None, :].repeat(s.order, 0)).any(axis=-1)
    fix = frozenset(int(i) for i in np.nonzero(fix_mask)[0])
    soc = frozenset(int(i) for i in np.nonzero(soc_mask)[0])
    ann = soc & fix
    if classify_subset(P, fix) < IdealLevel.LEFT_IDEAL:
        raise FailedTheoremError("fix is not a left ideal")
    for name, sub in (("socle", soc), ("annihilator", ann)):
        if classify_subset(P, sub) < IdealLevel.IDEAL:
            raise FailedTheoremError(f"{name} is not an ideal")
    return fix, soc, ann


def classify_subset(P: PostLieRing, members: frozenset) -> IdealLevel:
    """Strongest substructure level of an explicit subset (no closure taken)."""
    s = P.shape
    if add_closure(s, members) != members:
        return IdealLevel.NOT_CLOSED
    full = frozenset(range(s.order))
    if not _bracket_set(P.base, members, members) <= members:
        return IdealLevel.NOT_CLOSED
    if not _tri_set(P, members, members) <= members:
        return IdealLevel.NOT_CLOSED
    if not _tri_set(P, full, members) <= members:
        return IdealLevel.SUB
    if not _bracket_set(P.base, full, members) <= members:
        return IdealLevel.LEFT_IDEAL
    if not _bracket_set(circ_ring(P), full, members) <= members:
        return IdealLevel.STRONG_LEFT_IDEAL
    return IdealLevel.IDEAL


def ideal_type(P: PostLieRing, gens) -> IdealLevel:
    """Classification of the additive subgroup generated by `gens`."""
    return classify_subset(P, add_closure(P.shape, gens))


@dataclass(frozen=True)
class AdjointFiltration:
    terms: tuple[frozenset, ...]
    is_lazard_post: bool


def _strong_left_ideal_chain(P: PostLieRing, F: Filtration) -> None:
    s = P.shape
    full = frozenset(range(s.order))
    if F.terms[0] != full or F.terms[-1] != frozenset({0}):
        raise ModArithError("filtration must run from the whole ring to 0")
    for a, b in zip(F.terms, F.terms[1:]):
        if not b <= a:
            raise ModArithError("filtration is not descending")
    for i, term in enumerate(F.terms, start=1):
        if add_closure(s, term) != term:
            raise ModArithError(f"term {i} is not a subgroup")
        if not _tri_set(P, full, term) <= term:
            raise ModArithError(f"term {i} is not a left ideal")
        if not _bracket_set(P.base, full, term) <= term:
            raise ModArithError(f"term {i} is not a Lie ideal")
    for i, ti in enumerate(F.terms, start=1):
        for j, tj in enumerate(F.terms[i - 1:], start=i):
            if not _bracket_set(P.base, ti, tj) <= set(F.term(i + j)):
                raise ModArithError(f"[term {i}, term {j}] escapes term {i+j}")


def adjoint_filtration(P: PostLieRing, F: Filtration | None = None) -> AdjointFiltration:
    """Filtration of the circ ring: a-circ_i = {a in a_i : L_a raises F by i}.

    F defaults to the canonical L-filtration and must be a chain of strong
    left ideals forming a Lie filtration.
    """
    if F is None:
        ser = l_series(P)
        if not ser.is_nilpotent:
            raise ModArithError("no canonical filtration: not L-nilpotent")
        F = Filtration(ser.terms)
    else:
        _strong_left_ideal_chain(P, F)
    s = P.shape
    circ = circ_ring(P)
    term_arrays = [np.asarray(sorted(t), dtype=np.int64) for t in F.terms]
    out_terms: list[frozenset] = []
    for i in range(1, len(F.terms) + 1):
        keep = []
        for a_idx in sorted(F.term(i)):
            La = l_mul(P, s.vec_of_index(a_idx))
            ok = True
            for j in range(0, len(F.terms) + 1):
                src = term_arrays[min(max(j, 1), len(term_arrays)) - 1]
                target = F.term(i + j)
                img = s.index_batch(La.apply_batch(s.coords_batch(src)))
                if not set(int(v) for v in img) <= target:
                    ok = False
                    break
            if ok:
                keep.append(a_idx)
        out_terms.append(frozenset(keep))
        if out_terms[-1] == frozenset({0}):
            break
    if out_terms[-1] != frozenset({0}):
        out_terms.append(frozenset({0}))
    # must be a Lie filtration of the circ ring
    for i, ti in enumerate(out_terms, start=1):
        if add_closure(s, ti) != ti:
            raise FailedTheoremError("adjoint term is not a subgroup")
        if not _bracket_set(circ, frozenset(range(s.order)), ti) <= ti:
            raise FailedTheoremError("adjoint term is not an ideal of the circ ring")
    for i, ti in enumerate(out_terms, start=1):
        for j, tj in enumerate(out_terms[i - 1:], start=i):
            tgt = out_terms[i + j - 1] if i + j <= len(out_terms) else frozenset({0})
            if not _bracket_set(circ, ti, tj) <= tgt:
                raise FailedTheoremError("adjoint chain violates the filtration law")
    p = s.p
    lazard = F.length < p and (len(out_terms) - 1) < p and out_terms[-1] == frozenset({0})
    return AdjointFiltration(tuple(out_terms), lazard)


def is_square_free(P: PostLieRing) -> bool:
    """a > a = 0 for every element (checked on all elements, not generators)."""
    s = P.shape
    coords = s.all_coords()
    return not P.tri_batch(coords, coords).any()


# ---------------------------------------------------------------------------
# Enumeration oracles for pre-Lie structures on an abelian shape.


def _left_mul_candidates(shape: PShape, i: int) -> list[np.ndarray]:
    """All matrices of possible L_{g_i}: endomorphisms killed by p^e_i."""
    s = shape
    entry_choices = []
    for j in range(s.rank):
        for k in range(s.rank):
            gap = max(0, s.exps[k] - min(s.exps[i], s.exps[j]))
            entry_choices.append(range(0, s.p ** s.exps[k], s.p ** gap))
    return [
        np.asarray(combo, dtype=np.int64).reshape(s.rank, s.rank)
        for combo in product(*entry_choices)
    ]


def _candidate_tuples(shape: PShape):
    per_gen = [_left_mul_candidates(shape, i) for i in range(shape.rank)]
    total = 1
    for c in per_gen:
        total *= len(c)
    if total > 200_000:
        raise ModArithError(f"pre-Lie search space {total} exceeds the desk-scale cap")
    yield from product(*per_gen)


def _tri_from_left_muls(mats) -> np.ndarray:
    # tri[i, j] = L_{g_i}(g_j) = row j of the i-th matrix
    return np.stack([m for m in mats])


def enumerate_prelie_ops(shape: PShape, left_nilpotent_only: bool = True) -> list[PostLieRing]:
    """All pre-Lie products on the abelian Lie ring of `shape`.

    Direct structure-constant search: a candidate triangle passes iff the
    associator compatibility axiom holds on generator triples.
    """
    base = LieRingSC.from_brackets(shape, {})
    out = []
    for mats in _candidate_tuples(shape):
        P = PostLieRing(base, _tri_from_left_muls(mats))
        if not verify_post_lie(P).ok:
            continue
        if left_nilpotent_only and not left_series(P).is_nilpotent:
            continue
        out.append(P)
    return out


def enumerate_prelie_ops_aff(shape: PShape, left_nilpotent_only: bool = True) -> list[PostLieRing]:
    """Same catalog through the graph route: a candidate passes iff the graph
    {(a, L_a)} is closed under the semidirect bracket
    [(a,x),(b,y)] = (x(b) - y(a), [x,y]) inside a (+) End(a)."""
    s = shape
    base = LieRingSC.from_brackets(s, {})
    units = np.eye(s.rank, dtype=np.int64)
    out = []
    for mats in _candidate_tuples(shape):
        ok = True
        for i in range(s.rank):
            for j in range(i + 1, s.rank):
                first = s.reduce(units[j] @ mats[i] - units[i] @ mats[j])
                # row-image convention: the endo x -> x@M1 then x@M2 has matrix M1@M2
                commut = s.reduce(mats[j] @ mats[i] - mats[i] @ mats[j])
                lifted = s.reduce(np.tensordot(first, np.stack(mats), axes=(0, 0)))
                if s.reduce(commut - lifted).any():
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        P = PostLieRing(base, _tri_from_left_muls(mats))
        if left_nilpotent_only and not left_series(P).is_nilpotent:
            continue
        out.append(P)
    return out
