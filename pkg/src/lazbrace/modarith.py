"""Exact arithmetic over finite abelian p-groups Z/p^e1 (+) ... (+) Z/p^er.

Coordinate vectors over an invariant-factor shape, rational scalars acting
through modular inverses, additive endomorphisms with truncated exp/log,
recovery of the shape from a raw addition table, and primitive (p-1)-th
roots of unity modulo p^e.

Everything is integer exact.  An operation that would divide by the
ambient prime raises ModArithError instead of silently reducing.  All
values are immutable after construction and safe to share between tasks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

__all__ = [
    "ModArithError",
    "PShape",
    "PVec",
    "Endo",
    "endo_exp",
    "endo_log",
    "AbelianBasis",
    "abelian_decompose",
    "root_of_unity",
    "is_prime",
    "prime_power",
]


class ModArithError(ValueError):
    """Raised when a modarith precondition fails."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def prime_power(n: int) -> tuple[int, int]:
    """Return (p, k) with n = p^k, k >= 1, or raise ModArithError."""
    if n < 2:
        raise ModArithError(f"{n} is not a prime power")
    p = 2
    while p * p <= n:
        if n % p == 0:
            break
        p += 1
    else:
        p = n
    k = 0
    m = n
    while m % p == 0:
        m //= p
        k += 1
    if m != 1:
        raise ModArithError(f"{n} is not a prime power")
    return p, k


@dataclass(frozen=True)
class PShape:
    """Invariant-factor shape (p; e1 >= e2 >= ... >= er >= 1).

    Elements are coordinate tuples, coordinate i reduced mod p^e_i.  The
    carrier is enumerated little-endian: coordinate 0 varies fastest, so
    index = sum_i c_i * stride_i with stride_0 = 1.
    """

    p: int
    exps: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "exps", tuple(int(e) for e in self.exps))
        if not is_prime(self.p):
            raise ModArithError(f"p = {self.p} is not prime")
        if not self.exps:
            raise ModArithError("shape needs at least one cyclic factor")
        if any(e < 1 for e in self.exps):
            raise ModArithError("shape exponents must be >= 1")
        if any(a < b for a, b in zip(self.exps, self.exps[1:])):
            raise ModArithError("shape exponents must be non-increasing")

    @property
    def rank(self) -> int:
        return len(self.exps)

    @property
    def moduli(self) -> tuple[int, ...]:
        return tuple(self.p ** e for e in self.exps)

    @property
    def order(self) -> int:
        n = 1
        for m in self.moduli:
            n *= m
        return n

    @property
    def max_modulus(self) -> int:
        return self.p ** self.exps[0]

    def np_moduli(self) -> np.ndarray:
        return np.array(self.moduli, dtype=np.int64)

    def reduce(self, arr) -> np.ndarray:
        """Reduce an integer array of coordinates (..., r) mod the moduli."""
        return np.mod(np.asarray(arr, dtype=np.int64), self.np_moduli())

    def strides(self) -> np.ndarray:
        s = np.ones(self.rank, dtype=np.int64)
        mods = self.np_moduli()
        for i in range(1, self.rank):
            s[i] = s[i - 1] * mods[i - 1]
        return s

    def index_batch(self, coords) -> np.ndarray:
        return (self.reduce(coords) * self.strides()).sum(axis=-1)

    def coords_batch(self, indices) -> np.ndarray:
        idx = np.asarray(indices, dtype=np.int64)
        out = np.empty(idx.shape + (self.rank,), dtype=np.int64)
        mods = self.moduli
        rem = idx
        for i in range(self.rank):
            out[..., i] = rem % mods[i]
            rem = rem // mods[i]
        return out

    def all_coords(self) -> np.ndarray:
        return self.coords_batch(np.arange(self.order))

    def index_of(self, coords) -> int:
        return int(self.index_batch(np.asarray(coords, dtype=np.int64)))

    def zero(self) -> "PVec":
        return PVec(self, (0,) * self.rank)

    def unit(self, i: int) -> "PVec":
        c = [0] * self.rank
        c[i] = 1
        return PVec(self, tuple(c))

    def units(self) -> tuple["PVec", ...]:
        return tuple(self.unit(i) for i in range(self.rank))

    def vec(self, coords) -> "PVec":
        return PVec(self, tuple(int(x) for x in self.reduce(np.asarray(coords))))

    def vec_of_index(self, index: int) -> "PVec":
        return PVec(self, tuple(int(x) for x in self.coords_batch(int(index))))

    def scale_multiplier(self, q: Fraction | int) -> int:
        """Integer m with m = q mod every modulus; q's denominator must be prime to p."""
        q = Fraction(q)
        if q.denominator % self.p == 0:
            raise ModArithError(
                f"not p-divisible: denominator {q.denominator} shares the prime {self.p}"
            )
        m = self.max_modulus
        return (q.numerator * pow(q.denominator, -1, m)) % m

    def scale_batch(self, arr, q: Fraction | int) -> np.ndarray:
        return self.reduce(np.asarray(arr, dtype=np.int64) * self.scale_multiplier(q))

    def __str__(self):
        return f"({self.p};[{','.join(str(e) for e in self.exps)}])"


@dataclass(frozen=True)
class PVec:
    """Element of the abelian p-group described by `shape`."""

    shape: PShape
    coords: tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) != self.shape.rank:
            raise ModArithError("coordinate count does not match shape rank")
        red = tuple(int(c) % m for c, m in zip(self.coords, self.shape.moduli))
        object.__setattr__(self, "coords", red)

    def _check(self, other: "PVec"):
        if self.shape != other.shape:
            raise ModArithError("shape mismatch")

    def __add__(self, other: "PVec") -> "PVec":
        self._check(other)
        return PVec(self.shape, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "PVec") -> "PVec":
        self._check(other)
        return PVec(self.shape, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "PVec":
        return PVec(self.shape, tuple(-a for a in self.coords))

    def __rmul__(self, n: int) -> "PVec":
        return PVec(self.shape, tuple(n * a for a in self.coords))

    def scale(self, q: Fraction | int) -> "PVec":
        """Rational scalar action; q.denominator must be coprime to p."""
        m = self.shape.scale_multiplier(q)
        return PVec(self.shape, tuple(m * a for a in self.coords))

    @property
    def index(self) -> int:
        return self.shape.index_of(self.coords)

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def np(self) -> np.ndarray:
        return np.array(self.coords, dtype=np.int64)

    def __str__(self):
        return "(" + ",".join(str(c) for c in self.coords) + ")"


@dataclass(frozen=True)
class Endo:
    """Additive endomorphism, stored by generator images.

    rows[j] is the image of the j-th generator; well-definedness demands
    p^e_j * rows[j] = 0, i.e. rows[j][i] = 0 mod p^(e_i - e_j) when e_i > e_j.
    Evaluation: f(v) = sum_j v_j * rows[j].
    """

    shape: PShape
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        s = self.shape
        if len(self.rows) != s.rank:
            raise ModArithError("endomorphism needs one image per generator")
        red = []
        for j, row in enumerate(self.rows):
            if len(row) != s.rank:
                raise ModArithError("image coordinate count mismatch")
            row = tuple(int(c) % m for c, m in zip(row, s.moduli))
            for i, c in enumerate(row):
                gap = s.exps[i] - s.exps[j]
                if gap > 0 and c % (s.p ** gap) != 0:
                    raise ModArithError(
                        f"not an additive map: p^{s.exps[j]} * image of g{j} is nonzero"
                    )
            red.append(row)
        object.__setattr__(self, "rows", tuple(red))

    @classmethod
    def from_matrix(cls, shape: PShape, mat) -> "Endo":
        mat = shape.reduce(np.asarray(mat, dtype=np.int64))
        return cls(shape, tuple(tuple(int(x) for x in row) for row in mat))

    @classmethod
    def identity(cls, shape: PShape) -> "Endo":
        return cls.from_matrix(shape, np.eye(shape.rank, dtype=np.int64))

    @classmethod
    def zero(cls, shape: PShape) -> "Endo":
        return cls.from_matrix(shape, np.zeros((shape.rank, shape.rank), dtype=np.int64))

    def matrix(self) -> np.ndarray:
        return np.array(self.rows, dtype=np.int64)

    def apply_batch(self, coords) -> np.ndarray:
        return self.shape.reduce(np.asarray(coords, dtype=np.int64) @ self.matrix())

    def apply(self, v: PVec) -> PVec:
        if v.shape != self.shape:
            raise ModArithError("shape mismatch")
        return self.shape.vec(self.apply_batch(v.np()))

    def _check(self, other: "Endo"):
        if self.shape != other.shape:
            raise ModArithError("shape mismatch")

    def __add__(self, other: "Endo") -> "Endo":
        self._check(other)
        return Endo.from_matrix(self.shape, self.matrix() + other.matrix())

    def __sub__(self, other: "Endo") -> "Endo":
        self._check(other)
        return Endo.from_matrix(self.shape, self.matrix() - other.matrix())

    def __neg__(self) -> "Endo":
        return Endo.from_matrix(self.shape, -self.matrix())

    def after(self, other: "Endo") -> "Endo":
        """Composition self o other, (self.after(other))(x) = self(other(x))."""
        self._check(other)
        return Endo.from_matrix(self.shape, other.matrix() @ self.matrix())

    def __pow__(self, n: int) -> "Endo":
        if n < 0:
            raise ModArithError("negative endomorphism powers are not defined")
        acc = Endo.identity(self.shape)
        for _ in range(n):
            acc = acc.after(self)
        return acc

    def scale(self, q: Fraction | int) -> "Endo":
        m = self.shape.scale_multiplier(q)
        return Endo.from_matrix(self.shape, self.matrix() * m)

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for row in self.rows for c in row)

    def commutator(self, other: "Endo") -> "Endo":
        return self.after(other) - other.after(self)


def endo_exp(d: Endo, nil_bound: int) -> Endo:
    """exp(d) = sum_{k<nil_bound} d^k / k! for d nilpotent of index <= nil_bound < p."""
    p = d.shape.p
    if nil_bound < 1 or nil_bound >= p:
        raise ModArithError("denominator divisible by p: need nil bound <= p-1")
    if not (d ** nil_bound).is_zero:
        raise ModArithError("endomorphism is not nilpotent within the stated bound")
    acc = Endo.identity(d.shape)
    power = Endo.identity(d.shape)
    fact = 1
    for k in range(1, nil_bound):
        power = power.after(d)
        fact *= k
        acc = acc + power.scale(Fraction(1, fact))
    return acc


def endo_log(f: Endo, nil_bound: int) -> Endo:
    """log(f) = sum_{1<=k<nil_bound} (-1)^(k+1) (f-id)^k / k, inverse of endo_exp."""
    p = f.shape.p
    if nil_bound < 1 or nil_bound >= p:
        raise ModArithError("denominator divisible by p: need nil bound <= p-1")
    z = f - Endo.identity(f.shape)
    if not (z ** nil_bound).is_zero:
        raise ModArithError("endomorphism is not unipotent within the stated bound")
    acc = Endo.zero(f.shape)
    power = Endo.identity(f.shape)
    for k in range(1, nil_bound):
        power = power.after(z)
        acc = acc + power.scale(Fraction((-1) ** (k + 1), k))
    return acc


# ---------------------------------------------------------------------------
# Invariant-factor decomposition of a raw addition table.


@dataclass(frozen=True)
class AbelianBasis:
    """Explicit isomorphism between a table group and its invariant-factor shape.

    elem_of[i] is the table element matching shape-enumeration index i;
    index_of_elem is its inverse permutation.
    """

    shape: PShape
    gens: tuple[int, ...]
    elem_of: np.ndarray
    index_of_elem: np.ndarray

    def vec_of(self, t: int) -> PVec:
        return self.shape.vec_of_index(int(self.index_of_elem[t]))

    def elem_of_vec(self, v: PVec) -> int:
        return int(self.elem_of[v.index])


def _table_times(table: np.ndarray, x: np.ndarray, n: int, identity: int) -> np.ndarray:
    """n-fold table sum of each entry of x (n >= 0), via doubling."""
    acc = np.full_like(x, identity)
    base = x
    while n > 0:
        if n & 1:
            acc = table[acc, base]
        base = table[base, base]
        n >>= 1
    return acc


def _find_identity(table: np.ndarray) -> int:
    n = table.shape[0]
    hits = np.nonzero((table == np.arange(n)).all(axis=1))[0]
    if hits.size != 1:
        raise ModArithError("table has no unique identity row")
    e = int(hits[0])
    if not (table[:, e] == np.arange(n)).all():
        raise ModArithError("identity is not two-sided")
    return e


def _greedy_decompose(table: np.ndarray, identity: int, p: int) -> list[tuple[int, int]]:
    """Return [(generator element, exponent e_i), ...], e_i non-increasing."""
    n = table.shape[0]
    if n == 1:
        return []
    # element orders through successive p-th powers; all must be p-power.
    orders = np.zeros(n, dtype=np.int64)
    cur = np.arange(n)
    t = 0
    while (orders == 0).any():
        done = (cur == identity) & (orders == 0)
        orders[done] = p ** t
        if (orders != 0).all():
            break
        cur = _table_times(table, cur, p, identity)
        t += 1
        if p ** t > n:
            raise ModArithError("element order is not a p-power")
    maxo = int(orders.max())
    e1 = 0
    while p ** e1 < maxo:
        e1 += 1
    g = int(np.nonzero(orders == maxo)[0][0])
    # cyclic subgroup of g, with discrete logs
    chain = [identity]
    x = identity
    for _ in range(maxo - 1):
        x = int(table[x, g])
        chain.append(x)
    dlog = {x: i for i, x in enumerate(chain)}
    # quotient by <g>: canonical representative = smallest index in the coset
    reps_of = table[:, np.array(chain, dtype=np.int64)].min(axis=1)
    reps = np.unique(reps_of)
    qn = reps.size
    if qn * maxo != n:
        raise ModArithError("table is not a group (coset sizes are uneven)")
    qindex = {int(r): i for i, r in enumerate(reps)}
    qtable = np.empty((qn, qn), dtype=np.int64)
    for i, r in enumerate(reps):
        qtable[i] = [qindex[int(reps_of[int(table[int(r), int(s)])])] for s in reps]
    qid = qindex[int(reps_of[identity])]
    sub = _greedy_decompose(qtable, qid, p)
    out = [(g, e1)]
    for qgen, f in sub:
        x = int(reps[qgen])
        pf = p ** f
        y = int(_table_times(table, np.array([x]), pf, identity)[0])
        c = dlog[y]
        if c % pf != 0:
            raise ModArithError("lift adjustment failed; table is not abelian p-group")
        tshift = (c // pf) % maxo
        adj = chain[(maxo - tshift) % maxo]
        x = int(table[x, adj])
        out.append((x, f))
    return out


def abelian_decompose(table) -> AbelianBasis:
    """Recover the invariant-factor shape of a finite abelian p-group table.

    Returns the shape together with an explicit index <-> vector bijection;
    the bijection provably reproduces the table (checked on all pairs).
    """
    table = np.asarray(table, dtype=np.int64)
    if table.ndim != 2 or table.shape[0] != table.shape[1]:
        raise ModArithError("addition table must be square")
    n = table.shape[0]
    if n < 2:
        raise ModArithError("trivial table carries no p-group shape")
    if table.min() < 0 or table.max() >= n:
        raise ModArithError("table entries out of range")
    if not np.array_equal(table, table.T):
        raise ModArithError("table is not abelian")
    for row in table:
        if np.unique(row).size != n:
            raise ModArithError("table rows are not permutations")
    p, _ = prime_power(n)
    identity = _find_identity(table)
    gens_exps = _greedy_decompose(table, identity, p)
    gens = tuple(g for g, _ in gens_exps)
    exps = tuple(e for _, e in gens_exps)
    if any(a < b for a, b in zip(exps, exps[1:])):
        raise ModArithError("decomposition produced increasing exponents")
    shape = PShape(p, exps)
    # little-endian enumeration: coordinate 0 (first generator) fastest
    elem_of = np.array([identity], dtype=np.int64)
    for g, e in gens_exps:
        m = p ** e
        chain = np.empty(m, dtype=np.int64)
        chain[0] = identity
        for i in range(1, m):
            chain[i] = table[chain[i - 1], g]
        elem_of = table[np.asarray(elem_of)[None, :], chain[:, None]].ravel()
    if np.unique(elem_of).size != n:
        raise ModArithError("decomposition is not bijective; table is not abelian p-group")
    index_of_elem = np.empty(n, dtype=np.int64)
    index_of_elem[elem_of] = np.arange(n)
    basis = AbelianBasis(shape, gens, elem_of, index_of_elem)
    # round trip: vecOps through the bijection must reproduce the table
    coords = shape.all_coords()[index_of_elem]
    for start in range(0, n, max(1, 2 ** 22 // n)):
        stop = min(n, start + max(1, 2 ** 22 // n))
        block = shape.index_batch(coords[start:stop, None, :] + coords[None, :, :])
        if not np.array_equal(elem_of[block], table[start:stop]):
            raise ModArithError("table does not match abelian reconstruction")
    return basis


@lru_cache(maxsize=None)
def root_of_unity(p: int, e: int) -> int:
    """Smallest primitive (p-1)-th root of unity modulo p^e, p an odd prime.

    The result x satisfies x^(p-1) = 1 mod p^e while x^k - 1 stays a unit
    for 1 <= k < p-1.
    """
    if not is_prime(p):
        raise ModArithError(f"p = {p} is not prime")
    if p == 2:
        raise ModArithError("p = 2 is degenerate here (p-1 = 1); need an odd prime")
    if e < 1:
        raise ModArithError("exponent must be >= 1")
    mod = p ** e
    for xi in range(2, mod):
        if pow(xi, p - 1, mod) != 1:
            continue
        if all(pow(xi, k, p) != 1 for k in range(1, p - 1)):
            return xi
    raise ModArithError("no primitive root found")  # unreachable for odd primes
