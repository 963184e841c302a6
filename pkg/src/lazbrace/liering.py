"""Finite Lie rings on mixed-modulus p-groups and the exact Lazard correspondence.

Structure-constant Lie rings, verification, lower central series, the
Lazard criterion (finite filtration shorter than p), the BCH product
(giving the group Laz(a)) and its inverse through the group words P and Q
(giving Laz^-1 of a finite p-group).  Cayley tables are numpy integer
arrays; bulk operations are vectorized over element-index arrays.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from . import freelie
from .common import CapExceededError, FailedTheoremError, NotLazardError
from .modarith import AbelianBasis, ModArithError, PShape, PVec, Endo, abelian_decompose, prime_power

__all__ = [
    "LieRingSC",
    "LieRingTable",
    "FinGroup",
    "Filtration",
    "SeriesResult",
    "CheckReport",
    "verify_lie",
    "lower_central_series",
    "canonical_filtration",
    "is_lazard",
    "bch_eval",
    "laz",
    "group_root",
    "laz_inv",
    "laz_of_table",
    "canonical_group_filtration",
    "validate_group_filtration",
    "add_closure",
    "group_closure",
    "all_add_subgroups",
    "verify_group_table",
    "verify_lie_table",
    "table_to_sc",
    "ad_endo",
]

_CHUNK = 1 << 18  # pairs handled per vectorized block
_SOFT_ORDER_CAP = 5 ** 6  # table constructions refuse beyond this unless forced


def _check_order_cap(n: int, force: bool) -> None:
    if n > _SOFT_ORDER_CAP and not force:
        raise CapExceededError(
            f"order {n} exceeds the soft cap {_SOFT_ORDER_CAP}; pass force=True"
        )


@dataclass(frozen=True)
class CheckReport:
    ok: bool
    failures: tuple[str, ...] = ()

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class SeriesResult:
    """Descending series with its stabilization verdict.

    terms[0] is the whole structure; nilpotency_class is None when the
    series stabilizes at a nontrivial term.
    """

    terms: tuple[frozenset, ...]
    nilpotency_class: int | None

    @property
    def is_nilpotent(self) -> bool:
        return self.nilpotency_class is not None


@dataclass(frozen=True)
class Filtration:
    """Descending chain X_1 >= X_2 >= ... ending at the trivial subgroup.

    Index i of the chain holds X_i (1-based); the implied X_0 equals X_1.
    length is the index of the last (potentially) nonzero term, so a
    nilpotent structure of class k has length k.
    """

    terms: tuple[frozenset, ...]

    def __post_init__(self):
        assert self.terms, "filtration needs at least the trivial term"

    @property
    def length(self) -> int:
        return len(self.terms) - 1

    def term(self, i: int) -> frozenset:
        """X_i with X_0 = X_1 and X_i trivial beyond the chain."""
        if i <= 0:
            return self.terms[0]
        if i > len(self.terms):
            return self.terms[-1]
        return self.terms[i - 1]


# ---------------------------------------------------------------------------
# Structure-constant Lie rings.


@dataclass(frozen=True)
class LieRingSC:
    """Finite Lie ring by bracket structure constants over a PShape.

    sc[i, j] holds the coordinates of [g_i, g_j]; the array is
    antisymmetric in (i, j) with zero diagonal by construction.
    """

    shape: PShape
    sc: np.ndarray

    def __post_init__(self):
        r = self.shape.rank
        arr = self.shape.reduce(np.asarray(self.sc, dtype=np.int64))
        if arr.shape != (r, r, r):
            raise ModArithError("structure constants must be (r, r, r)")
        arr.setflags(write=False)
        object.__setattr__(self, "sc", arr)

    @classmethod
    def from_brackets(cls, shape: PShape, brackets: dict | None = None) -> "LieRingSC":
        """Build from {(i, j): coords} for i < j; omitted pairs are zero."""
        r = shape.rank
        sc = np.zeros((r, r, r), dtype=np.int64)
        for (i, j), coords in (brackets or {}).items():
            if not 0 <= i < j < r:
                raise ModArithError("bracket pairs must have i < j")
            v = shape.reduce(np.asarray(coords, dtype=np.int64))
            sc[i, j] = v
            sc[j, i] = shape.reduce(-v)
        return cls(shape, sc)

    @property
    def order(self) -> int:
        return self.shape.order

    def bracket_batch(self, U, V) -> np.ndarray:
        U = np.asarray(U, dtype=np.int64)
        V = np.asarray(V, dtype=np.int64)
        r = self.shape.rank
        # [u,v]_k = sum_ij u_i v_j sc[i,j,k]; reduce u @ sc first to cap magnitudes
        flat = (U @ self.sc.reshape(r, r * r)).reshape(U.shape[:-1] + (r, r))
        flat = self.shape.reduce(flat)
        out = np.matmul(V[..., None, :], flat)[..., 0, :]
        return self.shape.reduce(out)

    def bracket(self, u: PVec, v: PVec) -> PVec:
        return self.shape.vec(self.bracket_batch(u.np(), v.np()))

    def is_abelian(self) -> bool:
        return not self.sc.any()


def verify_lie(L: LieRingSC) -> CheckReport:
    """Check well-definedness and the Jacobi identity on generators.

    Bilinearity extends both to the whole ring; antisymmetry holds by
    construction of the structure-constant array.
    """
    s = L.shape
    failures = []
    for i in range(s.rank):
        if L.sc[i, i].any():
            failures.append(f"[g{i},g{i}] != 0")
        for j in range(s.rank):
            killer = s.p ** min(s.exps[i], s.exps[j])
            if s.reduce(killer * L.sc[i, j]).any():
                failures.append(f"bracket [g{i},g{j}] not killed by p^min(e{i},e{j})")
    for i in range(s.rank):
        for j in range(i + 1, s.rank):
            if s.reduce(L.sc[i, j] + L.sc[j, i]).any():
                failures.append(f"antisymmetry fails on (g{i},g{j})")
    units = np.eye(s.rank, dtype=np.int64)
    for i in range(s.rank):
        for j in range(i + 1, s.rank):
            for k in range(j + 1, s.rank):
                total = (
                    L.bracket_batch(units[i], L.bracket_batch(units[j], units[k]))
                    + L.bracket_batch(units[j], L.bracket_batch(units[k], units[i]))
                    + L.bracket_batch(units[k], L.bracket_batch(units[i], units[j]))
                )
                if s.reduce(total).any():
                    failures.append(f"Jacobi fails on (g{i},g{j},g{k})")
    return CheckReport(not failures, tuple(failures))


# ---------------------------------------------------------------------------
# Additive subgroups of a shape module.


def add_closure(shape: PShape, gen_indices) -> frozenset:
    """Subgroup of (shape, +) generated by the given element indices."""
    gens = np.unique(np.asarray(sorted(set(int(g) for g in gen_indices)), dtype=np.int64))
    members = {0}
    frontier = [0]
    if gens.size == 0:
        return frozenset(members)
    gen_coords = shape.coords_batch(gens)
    while frontier:
        fc = shape.coords_batch(np.asarray(frontier, dtype=np.int64))
        sums = shape.index_batch(fc[:, None, :] + gen_coords[None, :, :]).ravel()
        frontier = [int(s) for s in np.unique(sums) if int(s) not in members]
        members.update(frontier)
    return frozenset(members)


def _subgroup_gens(shape: PShape, members: frozenset) -> list[int]:
    """Small generating set of an additive subgroup (greedy, deterministic)."""
    gens: list[int] = []
    have = frozenset({0})
    for x in sorted(members):
        if x not in have:
            gens.append(x)
            have = add_closure(shape, gens)
            if have == members:
                break
    return gens


def all_add_subgroups(shape: PShape) -> list[frozenset]:
    """Every additive subgroup, BFS over one-element extensions (desk scale)."""
    trivial = frozenset({0})
    seen = {trivial}
    queue = [trivial]
    out = [trivial]
    while queue:
        H = queue.pop()
        gens = _subgroup_gens(shape, H)
        for x in range(1, shape.order):
            if x in H:
                continue
            H2 = add_closure(shape, gens + [x])
            if H2 not in seen:
                seen.add(H2)
                out.append(H2)
                queue.append(H2)
    return sorted(out, key=lambda s: (len(s), sorted(s)))


def _bracket_set(L: LieRingSC, A: frozenset, B: frozenset) -> set[int]:
    """{index([a,b]) : a in A, b in B}, chunked."""
    ai = np.asarray(sorted(A), dtype=np.int64)
    bi = np.asarray(sorted(B), dtype=np.int64)
    ac = L.shape.coords_batch(ai)
    bc = L.shape.coords_batch(bi)
    out: set[int] = set()
    step = max(1, _CHUNK // max(1, len(bi)))
    for start in range(0, len(ai), step):
        blk = L.bracket_batch(ac[start:start + step, None, :], bc[None, :, :])
        out.update(int(v) for v in np.unique(L.shape.index_batch(blk)))
    return out


def lower_central_series(L: LieRingSC) -> SeriesResult:
    """gamma^1 = a, gamma^(i+1) = [a, gamma^i], until stabilization."""
    shape = L.shape
    full = frozenset(range(shape.order))
    terms = [full]
    cur = full
    unit_idx = frozenset(shape.unit(i).index for i in range(shape.rank))
    cur_gens = unit_idx
    while len(cur) > 1:
        new_gens = sorted(_bracket_set(L, unit_idx, frozenset(cur_gens)))
        new = add_closure(shape, new_gens)
        if new == cur:
            return SeriesResult(tuple(terms), None)
        terms.append(new)
        cur = new
        cur_gens = frozenset(_subgroup_gens(shape, new)) or frozenset({0})
    return SeriesResult(tuple(terms), len(terms) - 1)


def canonical_filtration(L: LieRingSC) -> Filtration:
    series = lower_central_series(L)
    if not series.is_nilpotent:
        raise NotLazardError("Lie ring is not nilpotent; no canonical Lazard filtration")
    return Filtration(series.terms)


def _validate_lie_filtration(L: LieRingSC, F: Filtration) -> None:
    shape = L.shape
    full = frozenset(range(shape.order))
    if F.terms[0] != full:
        raise ModArithError("filtration must start at the whole ring")
    if F.terms[-1] != frozenset({0}):
        raise ModArithError("filtration must terminate at 0")
    for a, b in zip(F.terms, F.terms[1:]):
        if not b <= a:
            raise ModArithError("filtration is not descending")
    for i, term in enumerate(F.terms, start=1):
        if add_closure(shape, term) != term:
            raise ModArithError(f"filtration term {i} is not an additive subgroup")
        if not _bracket_set(L, full, term) <= set(term):
            raise ModArithError(f"filtration term {i} is not an ideal")
    for i, ti in enumerate(F.terms, start=1):
        for j, tj in enumerate(F.terms, start=1):
            if j < i:
                continue
            target = F.term(i + j)
            if not _bracket_set(L, ti, tj) <= set(target):
                raise ModArithError(f"[term {i}, term {j}] escapes term {i+j}")


def is_lazard(L: LieRingSC, F: Filtration | None = None) -> bool:
    """True iff the filtration is finite of length < p (forces P_i-divisibility)."""
    if F is None:
        series = lower_central_series(L)
        if not series.is_nilpotent:
            return False
        F = Filtration(series.terms)
    else:
        _validate_lie_filtration(L, F)
    return F.length < L.shape.p


# ---------------------------------------------------------------------------
# BCH evaluation and the group Laz(a).


def _bch_batch(L: LieRingSC, degree: int, A, B) -> np.ndarray:
    """BCH(a, b) truncated at `degree` on coordinate arrays (m, r)."""
    shape = L.shape
    memo: dict = {}

    def ev(tree):
        if tree == 0:
            return A
        if tree == 1:
            return B
        if tree in memo:
            return memo[tree]
        out = L.bracket_batch(ev(tree[0]), ev(tree[1]))
        memo[tree] = out
        return out

    acc = np.zeros_like(np.asarray(A, dtype=np.int64))
    for deg, _word, tree, coeff in freelie.bch_basis_terms(max(degree, 1)):
        if deg > degree:
            break
        acc = shape.reduce(acc + shape.scale_batch(ev(tree), coeff))
    return acc


def bch_eval(L: LieRingSC, F: Filtration, a: PVec, b: PVec) -> PVec:
    """Exact truncated BCH product of two elements; requires a Lazard input."""
    if not is_lazard(L, F):
        raise NotLazardError("BCH product needs a Lazard Lie ring (class < p)")
    out = _bch_batch(L, max(F.length, 1), a.np()[None, :], b.np()[None, :])
    return L.shape.vec(out[0])


@dataclass(frozen=True)
class FinGroup:
    """Finite group as a Cayley table on 0..n-1."""

    table: np.ndarray
    identity: int

    def __post_init__(self):
        arr = np.ascontiguousarray(np.asarray(self.table, dtype=np.int64))
        arr.setflags(write=False)
        object.__setattr__(self, "table", arr)

    @property
    def order(self) -> int:
        return int(self.table.shape[0])

    @cached_property
    def inv(self) -> np.ndarray:
        n = self.order
        inv = np.empty(n, dtype=np.int64)
        rows, cols = np.nonzero(self.table == self.identity)
        inv[rows] = cols
        return inv

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def power_batch(self, X, m: int) -> np.ndarray:
        X = np.asarray(X, dtype=np.int64)
        if m < 0:
            X = self.inv[X]
            m = -m
        acc = np.full_like(X, self.identity)
        base = X
        while m > 0:
            if m & 1:
                acc = self.table[acc, base]
            base = self.table[base, base]
            m >>= 1
        return acc

    def power(self, g: int, m: int) -> int:
        return int(self.power_batch(np.asarray([g]), m)[0])

    def comm_batch(self, X, Y) -> np.ndarray:
        """Group commutator x^-1 y^-1 x y, elementwise."""
        X = np.asarray(X, dtype=np.int64)
        Y = np.asarray(Y, dtype=np.int64)
        return self.table[self.table[self.table[self.inv[X], self.inv[Y]], X], Y]

    @cached_property
    def element_orders(self) -> np.ndarray:
        """Orders of all elements; requires a p-group."""
        n = self.order
        p, _ = prime_power(n) if n > 1 else (2, 0)
        orders = np.zeros(n, dtype=np.int64)
        cur = np.arange(n)
        t = 0
        while (orders == 0).any():
            fresh = (cur == self.identity) & (orders == 0)
            orders[fresh] = p ** t
            if (orders != 0).all():
                break
            cur = self.power_batch(cur, p)
            t += 1
            if n > 1 and p ** t > n:
                raise ModArithError("element order is not a p-power")
        return orders

    @cached_property
    def exponent(self) -> int:
        return int(self.element_orders.max()) if self.order > 1 else 1

    def __eq__(self, other):
        return (
            isinstance(other, FinGroup)
            and self.identity == other.identity
            and np.array_equal(self.table, other.table)
        )

    def __hash__(self):
        return hash((self.identity, self.table.tobytes()))


def verify_group_table(table, assoc_limit: int = 300) -> CheckReport:
    """Latin-square, identity, inverse and associativity checks.

    Associativity is checked on all triples up to `assoc_limit` elements,
    else on a deterministic sample of rows (n^2 per sampled row).
    """
    table = np.asarray(table, dtype=np.int64)
    n = table.shape[0]
    failures = []
    if table.ndim != 2 or table.shape[1] != n:
        return CheckReport(False, ("table is not square",))
    if table.min() < 0 or table.max() >= n:
        return CheckReport(False, ("entries out of range",))
    for axis, name in ((1, "row"), (0, "column")):
        uniq = np.apply_along_axis(lambda r: np.unique(r).size, axis, table)
        if (uniq != n).any():
            failures.append(f"some {name} is not a permutation")
    ident = np.nonzero((table == np.arange(n)).all(axis=1))[0]
    if ident.size != 1 or not (table[:, int(ident[0])] == np.arange(n)).all():
        failures.append("no two-sided identity")
        return CheckReport(False, tuple(failures))
    rows = range(n) if n <= assoc_limit else range(0, n, max(1, n // assoc_limit))
    for a in rows:
        if not np.array_equal(table[table[a], :], table[a, table]):
            failures.append(f"associativity fails at row {a}")
            break
    return CheckReport(not failures, tuple(failures))


def laz(L: LieRingSC, F: Filtration | None = None, force: bool = False) -> FinGroup:
    """The Lazard group (a, BCH) of a Lazard Lie ring, as a Cayley table."""
    _check_order_cap(L.order, force)
    if F is None:
        F = canonical_filtration(L)
    if not is_lazard(L, F):
        raise NotLazardError(
            f"class {F.length} >= p = {L.shape.p}: BCH denominators would divide p"
        )
    shape = L.shape
    n = shape.order
    coords = shape.all_coords()
    table = np.empty((n, n), dtype=np.int64)
    step = max(1, _CHUNK // n)
    degree = max(F.length, 1)
    for start in range(0, n, step):
        stop = min(n, start + step)
        A = np.repeat(coords[start:stop], n, axis=0)
        B = np.tile(coords, (stop - start, 1))
        table[start:stop] = shape.index_batch(_bch_batch(L, degree, A, B)).reshape(stop - start, n)
    return FinGroup(table, 0)


def group_root(G: FinGroup, g: int, n: int) -> int:
    """Unique h with h^n = g in a finite p-group, gcd(n, p) = 1."""
    p, _ = prime_power(G.order) if G.order > 1 else (0, 0)
    if G.order > 1 and n % p == 0:
        raise ModArithError(f"root exponent {n} is divisible by p = {p}")
    e = G.exponent
    m = pow(n % e, -1, e) if e > 1 else 0
    return G.power(g, m)


# ---------------------------------------------------------------------------
# Group filtrations and Laz^-1.


def group_closure(G: FinGroup, gen_indices) -> frozenset:
    gens = sorted(set(int(g) for g in gen_indices) | {G.identity})
    members = {G.identity}
    frontier = list(gens)
    members.update(frontier)
    garr = np.asarray(gens, dtype=np.int64)
    while frontier:
        prods = G.table[np.asarray(frontier, dtype=np.int64)[:, None], garr[None, :]].ravel()
        frontier = [int(x) for x in np.unique(prods) if int(x) not in members]
        members.update(frontier)
    return frozenset(members)


def _comm_set(G: FinGroup, A: frozenset, B: frozenset) -> set[int]:
    ai = np.asarray(sorted(A), dtype=np.int64)
    bi = np.asarray(sorted(B), dtype=np.int64)
    out: set[int] = set()
    step = max(1, _CHUNK // max(1, len(bi)))
    for start in range(0, len(ai), step):
        blk = G.comm_batch(ai[start:start + step, None], bi[None, :])
        out.update(int(v) for v in np.unique(blk))
    return out


def canonical_group_filtration(G: FinGroup) -> SeriesResult:
    """Lower central series G_1 = G, G_(i+1) = [G, G_i]."""
    full = frozenset(range(G.order))
    terms = [full]
    cur = full
    while len(cur) > 1:
        new = group_closure(G, _comm_set(G, full, cur))
        if new == cur:
            return SeriesResult(tuple(terms), None)
        terms.append(new)
        cur = new
    return SeriesResult(tuple(terms), len(terms) - 1)


def validate_group_filtration(G: FinGroup, F: Filtration) -> None:
    full = frozenset(range(G.order))
    if F.terms[0] != full:
        raise ModArithError("group filtration must start at the whole group")
    if F.terms[-1] != frozenset({G.identity}):
        raise ModArithError("group filtration must terminate at the identity")
    for a, b in zip(F.terms, F.terms[1:]):
        if not b <= a:
            raise ModArithError("group filtration is not descending")
    for i, term in enumerate(F.terms, start=1):
        if group_closure(G, term) != term:
            raise ModArithError(f"filtration term {i} is not a subgroup")
    for i, ti in enumerate(F.terms, start=1):
        for j, tj in enumerate(F.terms[i - 1:], start=i):
            if not _comm_set(G, ti, tj) <= set(F.term(i + j)):
                raise ModArithError(f"[term {i}, term {j}] escapes term {i+j}")


def _p_of_group(G: FinGroup) -> int:
    if G.order == 1:
        raise ModArithError("trivial group has no prime")
    p, _ = prime_power(G.order)
    return p


def _eval_word_batch(G: FinGroup, word: freelie.GroupWord, A, B) -> np.ndarray:
    """Evaluate an inverse-BCH word on index arrays; commutator u^-1 v^-1 u v."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    e = G.exponent
    memo: dict = {}

    def ev(tree):
        if tree == 0:
            return A
        if tree == 1:
            return B
        if tree in memo:
            return memo[tree]
        out = G.comm_batch(ev(tree[0]), ev(tree[1]))
        memo[tree] = out
        return out

    acc = np.full(A.shape, G.identity, dtype=np.int64)
    for tree, q in word.factors:
        q = Fraction(q)
        m = (q.numerator * pow(q.denominator, -1, e)) % e if e > 1 else 0
        acc = G.table[acc, G.power_batch(ev(tree), m)]
    return acc


@dataclass(frozen=True)
class LieRingTable:
    """Lie ring in table form: pointwise addition and bracket tables."""

    add: np.ndarray
    bracket: np.ndarray
    zero: int

    def __post_init__(self):
        a = np.ascontiguousarray(np.asarray(self.add, dtype=np.int64))
        b = np.ascontiguousarray(np.asarray(self.bracket, dtype=np.int64))
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "add", a)
        object.__setattr__(self, "bracket", b)

    @property
    def order(self) -> int:
        return int(self.add.shape[0])

    def add_group(self) -> FinGroup:
        return FinGroup(self.add, self.zero)


def laz_inv(G: FinGroup, F: Filtration | None = None, force: bool = False) -> LieRingTable:
    """Laz^-1(G): a + b = P(a, b), [a, b] = Q(a, b), on the same carrier."""
    _check_order_cap(G.order, force)
    if F is None:
        series = canonical_group_filtration(G)
        if not series.is_nilpotent:
            raise NotLazardError("group is not nilpotent")
        F = Filtration(series.terms)
    else:
        validate_group_filtration(G, F)
    if G.order == 1:
        z = np.zeros((1, 1), dtype=np.int64)
        return LieRingTable(z, z, 0)
    p = _p_of_group(G)
    k = F.length
    if k >= p:
        raise NotLazardError(f"not Lazard: filtration length {k} >= p = {p}")
    p_word, q_word = freelie.inverse_words(max(k, 1))
    p_word = p_word.truncated(k)
    q_word = q_word.truncated(k)
    n = G.order
    add = np.empty((n, n), dtype=np.int64)
    br = np.empty((n, n), dtype=np.int64)
    idx = np.arange(n, dtype=np.int64)
    step = max(1, _CHUNK // n)
    for start in range(0, n, step):
        stop = min(n, start + step)
        A = np.repeat(idx[start:stop], n)
        B = np.tile(idx, stop - start)
        add[start:stop] = _eval_word_batch(G, p_word, A, B).reshape(stop - start, n)
        br[start:stop] = _eval_word_batch(G, q_word, A, B).reshape(stop - start, n)
    return LieRingTable(add, br, G.identity)


def table_to_sc(T: LieRingTable) -> tuple[LieRingSC, AbelianBasis]:
    """Structure-constant form of a table Lie ring, plus the carrier bijection.

    Checks that the bracket table is the biadditive extension of its
    generator values.
    """
    basis = abelian_decompose(T.add)
    shape = basis.shape
    r = shape.rank
    sc = np.zeros((r, r, r), dtype=np.int64)
    gen_elems = [basis.elem_of_vec(shape.unit(i)) for i in range(r)]
    for i in range(r):
        for j in range(r):
            sc[i, j] = basis.vec_of(int(T.bracket[gen_elems[i], gen_elems[j]])).np()
    L = LieRingSC(shape, sc)
    coords = shape.all_coords()[basis.index_of_elem]
    n = T.order
    step = max(1, _CHUNK // n)
    for start in range(0, n, step):
        stop = min(n, start + step)
        blk = L.bracket_batch(coords[start:stop, None, :], coords[None, :, :])
        if not np.array_equal(basis.elem_of[shape.index_batch(blk)], T.bracket[start:stop]):
            raise FailedTheoremError("bracket table is not biadditive over the decomposition")
    return L, basis


def verify_lie_table(T: LieRingTable) -> CheckReport:
    """Abelian p-group addition, antisymmetric biadditive bracket, Jacobi."""
    failures = []
    add_rep = verify_group_table(T.add)
    if not add_rep.ok:
        return CheckReport(False, tuple("addition: " + f for f in add_rep.failures))
    if not np.array_equal(T.add, T.add.T):
        failures.append("addition is not abelian")
    G = T.add_group()
    neg = G.inv
    if not np.array_equal(T.bracket.T, neg[T.bracket]):
        failures.append("bracket is not antisymmetric")
    if failures:
        return CheckReport(False, tuple(failures))
    try:
        L, basis = table_to_sc(T)
    except (ModArithError, FailedTheoremError) as exc:
        return CheckReport(False, (str(exc),))
    rep = verify_lie(L)
    if not rep.ok:
        failures.extend(rep.failures)
    return CheckReport(not failures, tuple(failures))


def laz_of_table(T: LieRingTable, force: bool = False) -> FinGroup:
    """Laz of a table Lie ring, computed purely on the tables (same carrier)."""
    n = T.order
    _check_order_cap(n, force)
    if n == 1:
        return FinGroup(np.zeros((1, 1), dtype=np.int64), 0)
    G = T.add_group()
    p = _p_of_group(G)
    # lower central series of the table ring, for the truncation degree
    full = frozenset(range(n))
    terms = [full]
    cur = full
    while len(cur) > 1:
        ai = np.asarray(sorted(full), dtype=np.int64)
        bi = np.asarray(sorted(cur), dtype=np.int64)
        gens: set[int] = set()
        step = max(1, _CHUNK // max(1, len(bi)))
        for start in range(0, len(ai), step):
            blk = T.bracket[ai[start:start + step, None], bi[None, :]]
            gens.update(int(v) for v in np.unique(blk))
        new = group_closure(G, gens)
        if new == cur:
            raise NotLazardError("table Lie ring is not nilpotent")
        terms.append(new)
        cur = new
    k = len(terms) - 1
    if k >= p:
        raise NotLazardError(f"not Lazard: class {k} >= p = {p}")
    e = G.exponent

    def scale(X, q: Fraction):
        m = (q.numerator * pow(q.denominator, -1, e)) % e if e > 1 else 0
        return G.power_batch(X, m)

    table = np.empty((n, n), dtype=np.int64)
    idx = np.arange(n, dtype=np.int64)
    step = max(1, _CHUNK // n)
    for start in range(0, n, step):
        stop = min(n, start + step)
        A = np.repeat(idx[start:stop], n)
        B = np.tile(idx, stop - start)
        memo: dict = {}

        def ev(tree):
            if tree == 0:
                return A
            if tree == 1:
                return B
            if tree in memo:
                return memo[tree]
            out = T.bracket[ev(tree[0]), ev(tree[1])]
            memo[tree] = out
            return out

        acc = np.full(A.shape, T.zero, dtype=np.int64)
        for deg, _w, tree, coeff in freelie.bch_basis_terms(max(k, 1)):
            if deg > k:
                break
            acc = T.add[acc, scale(ev(tree), coeff)]
        table[start:stop] = acc.reshape(stop - start, n)
    return FinGroup(table, T.zero)


def ad_endo(L: LieRingSC, a: PVec) -> Endo:
    """The adjoint map b -> [a, b] as an additive endomorphism."""
    rows = [L.bracket(a, L.shape.unit(j)).coords for j in range(L.shape.rank)]
    return Endo(L.shape, tuple(rows))
