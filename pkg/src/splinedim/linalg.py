"""Exact rank of sparse integer matrices, over prime fields or the rationals.

Modular ranks use a block multifrontal elimination: rows are grouped into
fronts (dense blocks over the columns they touch), column groups are
eliminated one at a time, and the fronts touching a group are merged first.
Dense kernels run on float64 BLAS with 16-bit limbs, which stays exact for
primes below 2^32.
"""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable

import numpy as np
from sympy import isprime

from .errors import FieldFailure

log = logging.getLogger(__name__)

PRIME_LOW = 2**31
PRIME_HIGH = 2**32
EXACT_ENTRY_LIMIT = 6_000_000
_LEAF = 32


@dataclass(frozen=True)
class FieldSpec:
    """Field used for rank computations.

    kind is "prime_field" or "exact_rational". In prime-field mode `prime`
    pins the first prime; further primes are drawn from the seed.
    """

    kind: str = "prime_field"
    prime: int | None = None
    retries: int = 2
    escalate: bool = True

    def __post_init__(self):
        if self.kind not in ("prime_field", "exact_rational"):
            raise ValueError(f"unknown field kind {self.kind!r}")
        if self.retries < 1:
            raise ValueError("retries must be >= 1")
        if self.prime is not None:
            if not (2**30 < self.prime < PRIME_HIGH) or not isprime(self.prime):
                raise ValueError("prime must be a certified prime in (2^30, 2^32)")


PRIME = FieldSpec()
RATIONAL = FieldSpec(kind="exact_rational")


def draw_primes(seed: int, count: int, first: int | None = None) -> list[int]:
    rng = random.Random(f"primes:{seed}")
    out = [first] if first is not None else []
    while len(out) < count:
        p = rng.randrange(PRIME_LOW + 1, PRIME_HIGH, 2)
        if isprime(p) and p not in out:
            out.append(p)
    return out


class SparseMatrix:
    """COO matrix with arbitrary-precision integer entries.

    Optional `row_groups`/`col_groups` label rows and columns with block ids;
    the modular engine uses them as its elimination structure.
    """

    def __init__(self, nrows: int, ncols: int, rows, cols, vals, row_groups=None, col_groups=None):
        self.nrows = int(nrows)
        self.ncols = int(ncols)
        self.rows = np.asarray(rows, dtype=np.int64).ravel()
        self.cols = np.asarray(cols, dtype=np.int64).ravel()
        vals = np.asarray(vals, dtype=object).ravel()
        if not (len(self.rows) == len(self.cols) == len(vals)):
            raise ValueError("rows, cols and vals must have equal length")
        keep = np.array([v != 0 for v in vals], dtype=bool) if len(vals) else np.zeros(0, bool)
        self.rows, self.cols, self.vals = self.rows[keep], self.cols[keep], vals[keep]
        if len(self.rows):
            if self.rows.min() < 0 or self.rows.max() >= self.nrows:
                raise IndexError("row index out of range")
            if self.cols.min() < 0 or self.cols.max() >= self.ncols:
                raise IndexError("column index out of range")
            keys = self.rows * self.ncols + self.cols
            if len(np.unique(keys)) != len(keys):
                raise ValueError("duplicate (row, col) entry")
        self.row_groups = None if row_groups is None else np.asarray(row_groups, dtype=np.int64)
        self.col_groups = None if col_groups is None else np.asarray(col_groups, dtype=np.int64)
        if self.row_groups is not None and len(self.row_groups) != self.nrows:
            raise ValueError("row_groups length mismatch")
        if self.col_groups is not None and len(self.col_groups) != self.ncols:
            raise ValueError("col_groups length mismatch")

    @classmethod
    def from_entries(cls, nrows: int, ncols: int, entries: Iterable[tuple[int, int, object]], **kw):
        """Build from (row, col, scalar) triples; rational rows are scaled to integers."""
        entries = list(entries)
        dens: dict[int, int] = {}
        for i, _, v in entries:
            if isinstance(v, float):
                raise TypeError("floating-point entries are not allowed")
            den = Fraction(v).denominator
            if den != 1:
                dens[i] = lcm(dens.get(i, 1), den)
        rows = [e[0] for e in entries]
        cols = [e[1] for e in entries]
        vals = []
        for i, _, v in entries:
            s = Fraction(v) * dens.get(i, 1)
            vals.append(int(s))
        return cls(nrows, ncols, rows, cols, vals, **kw)

    @classmethod
    def from_dense(cls, data, **kw):
        data = [list(r) for r in data]
        nrows = len(data)
        ncols = len(data[0]) if nrows else 0
        entries = [(i, j, v) for i, row in enumerate(data) for j, v in enumerate(row) if v != 0]
        return cls.from_entries(nrows, ncols, entries, **kw)

    @property
    def entries(self) -> list[tuple[int, int, int]]:
        return [(int(i), int(j), v) for i, j, v in zip(self.rows, self.cols, self.vals)]

    @property
    def nnz(self) -> int:
        return len(self.rows)

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for i, j, v in self.entries:
            out[i][j] = v
        return out

    def permuted(self, row_perm, col_perm) -> "SparseMatrix":
        """Row i moves to row_perm[i], column j to col_perm[j]."""
        rp = np.asarray(row_perm, dtype=np.int64)
        cp = np.asarray(col_perm, dtype=np.int64)
        rg = None if self.row_groups is None else _scatter(self.row_groups, rp)
        cg = None if self.col_groups is None else _scatter(self.col_groups, cp)
        return SparseMatrix(self.nrows, self.ncols, rp[self.rows], cp[self.cols], self.vals, rg, cg)

    def __repr__(self):
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={self.nnz})"


def _scatter(labels, perm):
    out = np.empty_like(labels)
    out[perm] = labels
    return out


# ---------------------------------------------------------------- mod p kernels


def _split(a):
    lo = (a & np.uint64(0xFFFF)).astype(np.float64)
    hi = (a >> np.uint64(16)).astype(np.float64)
    return lo, hi


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """(a @ b) mod p for uint64 arrays with entries in [0, p), p < 2^32."""
    if a.shape[1] == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.uint64)
    if a.shape[1] >= 2**19:
        h = a.shape[1] // 2
        return (matmul_mod(a[:, :h], b[:h], p) + matmul_mod(a[:, h:], b[h:], p)) % np.uint64(p)
    P = np.uint64(p)
    a0, a1 = _split(a)
    b0, b1 = _split(b)
    lo = a0 @ b0
    hi = a1 @ b1
    mid = (a0 + a1) @ (b0 + b1) - lo - hi
    lo = lo.astype(np.uint64) % P
    mid = mid.astype(np.uint64) % P
    hi = hi.astype(np.uint64) % P
    out = (hi * np.uint64(pow(2, 32, p))) % P
    out += (mid << np.uint64(16)) % P
    out += lo
    return out % P


def _leaf_pivots(a: np.ndarray, p: int):
    """Sequential elimination on a narrow panel; returns rows, cols, inverse."""
    P = np.uint64(p)
    w = a.copy()
    nr, nc = w.shape
    active = np.ones(nr, dtype=bool)
    prow, pcol = [], []
    for j in range(nc):
        cand = np.flatnonzero(active & (w[:, j] != 0))
        if cand.size == 0:
            continue
        i = cand[0]
        prow.append(i)
        pcol.append(j)
        active[i] = False
        others = cand[1:]
        if others.size:
            inv = np.uint64(pow(int(w[i, j]), -1, p))
            f = (w[others, j] * inv) % P
            w[others, j:] = (w[others, j:] + (P - (f[:, None] * w[i, j:]) % P)) % P
    rows = np.array(prow, dtype=np.int64)
    cols = np.array(pcol, dtype=np.int64)
    return rows, cols, _small_inverse(a[np.ix_(rows, cols)], p)


def _small_inverse(b: np.ndarray, p: int) -> np.ndarray:
    k = b.shape[0]
    P = np.uint64(p)
    w = np.concatenate([b % P, np.eye(k, dtype=np.uint64)], axis=1)
    for j in range(k):
        piv = j + int(np.flatnonzero(w[j:, j])[0])
        if piv != j:
            w[[j, piv]] = w[[piv, j]]
        inv = np.uint64(pow(int(w[j, j]), -1, p))
        w[j] = (w[j] * inv) % P
        col = w[:, j].copy()
        col[j] = 0
        nz = np.flatnonzero(col)
        if nz.size:
            w[nz] = (w[nz] + (P - (col[nz, None] * w[j]) % P)) % P
    return w[:, k:]


def find_pivots(a: np.ndarray, p: int):
    """Maximal nonsingular square submatrix of `a` mod p.

    Returns (rows, cols, inv) with inv = a[rows][:, cols]^-1 mod p; the
    number of pivots is the rank.
    """
    nr, nc = a.shape
    if nr == 0 or nc == 0:
        e = np.zeros(0, dtype=np.int64)
        return e, e, np.zeros((0, 0), dtype=np.uint64)
    if nc <= _LEAF:
        return _leaf_pivots(a, p)
    P = np.uint64(p)
    h = nc // 2
    a1, a2 = a[:, :h], a[:, h:]
    r1, c1, inv1 = find_pivots(a1, p)
    mask = np.ones(nr, dtype=bool)
    mask[r1] = False
    nr1 = np.flatnonzero(mask)
    if r1.size:
        t = matmul_mod(inv1, a2[r1], p)
        a2p = (a2[nr1] + (P - matmul_mod(a1[np.ix_(nr1, c1)], t, p))) % P
    else:
        t = np.zeros((0, nc - h), dtype=np.uint64)
        a2p = a2[nr1]
    r2l, c2l, inv2 = find_pivots(a2p, p)
    if r2l.size == 0:
        return r1, c1, inv1
    if r1.size == 0:
        return nr1[r2l], c2l + h, inv2
    r2 = nr1[r2l]
    u = t[:, c2l]
    v = matmul_mod(a1[np.ix_(r2, c1)], inv1, p)
    uinv2 = matmul_mod(u, inv2, p)
    top_left = (inv1 + matmul_mod(uinv2, v, p)) % P
    top_right = (P - uinv2) % P
    bottom_left = (P - matmul_mod(inv2, v, p)) % P
    inv = np.block([[top_left, top_right], [bottom_left, inv2]])
    return np.concatenate([r1, r2]), np.concatenate([c1, c2l + h]), inv


def dense_rank_mod(a: np.ndarray, p: int) -> int:
    return len(find_pivots(np.asarray(a, dtype=np.uint64) % np.uint64(p), p)[0])


# ------------------------------------------------------------ multifrontal


class _Front:
    __slots__ = ("cols", "mat")

    def __init__(self, cols, mat):
        self.cols = cols
        self.mat = mat


def _compress(front: _Front, p: int) -> _Front | None:
    mat = front.mat
    nz = np.any(mat != 0, axis=0)
    if not nz.all():
        mat = mat[:, nz]
        cols = front.cols[nz]
    else:
        cols = front.cols
    if mat.shape[1] == 0:
        return None
    mat = mat[np.any(mat != 0, axis=1)]
    if mat.shape[0] == 0:
        return None
    if mat.shape[0] > mat.shape[1]:
        rows, _, _ = find_pivots(mat, p)
        mat = mat[np.sort(rows)]
    return _Front(cols, mat)


def _merge(fronts: list[_Front]) -> _Front:
    if len(fronts) == 1:
        return fronts[0]
    cols = np.unique(np.concatenate([f.cols for f in fronts]))
    nrows = sum(f.mat.shape[0] for f in fronts)
    mat = np.zeros((nrows, len(cols)), dtype=np.uint64)
    r = 0
    for f in fronts:
        pos = np.searchsorted(cols, f.cols)
        mat[r : r + f.mat.shape[0], pos] = f.mat
        r += f.mat.shape[0]
    return _Front(cols, mat)


def modular_rank(m: SparseMatrix, p: int) -> int:
    """Rank of `m` over F_p via block multifrontal elimination."""
    if m.nnz == 0:
        return 0
    P = np.uint64(p)
    vals = np.fromiter((int(v) % p for v in m.vals), dtype=np.uint64, count=m.nnz)
    if m.nrows * m.ncols <= 4_000_000 and (m.row_groups is None or m.col_groups is None):
        dense = np.zeros((m.nrows, m.ncols), dtype=np.uint64)
        dense[m.rows, m.cols] = vals
        return dense_rank_mod(dense, p)
    col_groups = m.col_groups if m.col_groups is not None else np.arange(m.ncols)
    row_groups = m.row_groups if m.row_groups is not None else np.arange(m.nrows)

    fronts: dict[int, _Front] = {}
    touching: dict[int, set[int]] = {}
    next_id = 0

    def register(front):
        nonlocal next_id
        if front is None:
            return
        fid = next_id
        next_id += 1
        fronts[fid] = front
        for g in np.unique(col_groups[front.cols]):
            touching.setdefault(int(g), set()).add(fid)

    order = np.argsort(row_groups[m.rows], kind="stable")
    rows, cols, v = m.rows[order], m.cols[order], vals[order]
    rg = row_groups[rows]
    bounds = np.flatnonzero(np.diff(rg)) + 1
    for lo, hi in zip(np.r_[0, bounds], np.r_[bounds, len(rows)]):
        r_loc, r_idx = np.unique(rows[lo:hi], return_inverse=True)
        c_loc, c_idx = np.unique(cols[lo:hi], return_inverse=True)
        mat = np.zeros((len(r_loc), len(c_loc)), dtype=np.uint64)
        mat[r_idx, c_idx] = v[lo:hi]
        register(_compress(_Front(c_loc, mat), p))

    rank = 0
    while touching:
        best, best_cost = None, None
        for g, fids in touching.items():
            cost = sum(fronts[f].mat.shape[1] for f in fids)
            if best_cost is None or cost < best_cost:
                best, best_cost = g, cost
        fids = touching.pop(best)
        if not fids:
            continue
        for f in fids:
            for g in np.unique(col_groups[fronts[f].cols]):
                g = int(g)
                if g != best and g in touching:
                    touching[g].discard(f)
        front = _merge([fronts.pop(f) for f in sorted(fids)])
        in_group = col_groups[front.cols] == best
        piv_cols = np.flatnonzero(in_group)
        rest = np.flatnonzero(~in_group)
        a = front.mat
        pr, pc, inv = find_pivots(a[:, piv_cols], p)
        rank += len(pr)
        if rest.size == 0:
            continue
        if pr.size:
            mask = np.ones(a.shape[0], dtype=bool)
            mask[pr] = False
            npr = np.flatnonzero(mask)
            x = matmul_mod(a[np.ix_(npr, piv_cols[pc])], inv, p)
            s = (a[np.ix_(npr, rest)] + (P - matmul_mod(x, a[np.ix_(pr, rest)], p))) % P
        else:
            s = a[:, rest]
        register(_compress(_Front(front.cols[rest], s), p))
    return rank


# ------------------------------------------------------------------- exact


def exact_rank(m: SparseMatrix, seed: int = 0, sketches: int = 2) -> int:
    """Rank over the rationals, in exact integer arithmetic.

    A pivot block found mod p is nonsingular over Q, so its size k is a
    lower bound. Full rank needs nothing more. Otherwise the rank is k iff
    the Schur complement of the block vanishes; it is applied exactly to
    random 64-bit vectors (a nonzero complement survives each one with
    probability at most 2^-64). If the test fails, another prime is tried,
    and as a last resort flint's fraction-free rank is used.
    """
    if m.nnz == 0:
        return 0
    import flint

    # drop empty rows and columns before densifying
    r_loc, r_idx = np.unique(m.rows, return_inverse=True)
    c_loc, c_idx = np.unique(m.cols, return_inverse=True)
    nr, nc = len(r_loc), len(c_loc)
    if nr * nc > EXACT_ENTRY_LIMIT:
        raise FieldFailure(f"exact rank of a {nr}x{nc} matrix exceeds the dense limit")
    data = [[0] * nc for _ in range(nr)]
    for i, j, v in zip(r_idx, c_idx, m.vals):
        data[i][j] = int(v)
    rng = random.Random(f"exact:{seed}")
    for p in draw_primes(seed, 3):
        reduced = (np.array(data, dtype=object) % p).astype(np.uint64)
        prow, pcol, _ = find_pivots(reduced, p)
        k = len(prow)
        if k == min(nr, nc):
            return k
        rest_cols = np.setdiff1d(np.arange(nc), pcol)
        rest_rows = np.setdiff1d(np.arange(nr), prow)
        vec = flint.fmpz_mat([[rng.getrandbits(64) for _ in range(sketches)] for _ in rest_cols])

        def block(rs, cs):
            return flint.fmpz_mat([[data[i][j] for j in cs] for i in rs])

        x = block(prow, pcol).solve(block(prow, rest_cols) * vec)
        lhs = flint.fmpq_mat(block(rest_rows, pcol)) * x
        if lhs == flint.fmpq_mat(block(rest_rows, rest_cols) * vec):
            return k
        log.warning("pivot block mod %d is not maximal over Q; retrying", p)
    return flint.fmpz_mat(data).rank()


@dataclass
class RankReport:
    rank: int
    modular_ranks: dict[int, int] = field(default_factory=dict)
    agreed: bool = True
    escalated: bool = False


def rank_report(m: SparseMatrix, field: FieldSpec | None = None, seed: int = 0) -> RankReport:
    field = field or PRIME
    if field.kind == "exact_rational":
        return RankReport(exact_rank(m, seed))
    primes = draw_primes(seed, field.retries, field.prime)
    ranks = {p: modular_rank(m, p) for p in primes}
    values = set(ranks.values())
    if len(values) == 1:
        return RankReport(values.pop(), ranks)
    log.warning("modular ranks disagree: %s", ranks)
    if not field.escalate:
        return RankReport(max(values), ranks, agreed=False)
    try:
        exact = exact_rank(m, seed)
    except FieldFailure as exc:
        raise FieldFailure(f"modular ranks disagree {ranks} and exact fallback failed: {exc}")
    return RankReport(exact, ranks, agreed=False, escalated=True)


def rank(m: SparseMatrix, field: FieldSpec | None = None, seed: int = 0) -> int:
    return rank_report(m, field, seed).rank


def kernel_dim(m: SparseMatrix, field: FieldSpec | None = None, seed: int = 0) -> int:
    return m.ncols - rank(m, field, seed)


def row_gcd_normalize(values: list[int]) -> list[int]:
    g = 0
    for v in values:
        g = gcd(g, v)
    return [v // g for v in values] if g > 1 else list(values)
