"""Dimensions of ideals generated by powers of linear forms.

Each quantity comes in two flavours: the closed formula and a rank oracle
on the matrix of generator multiples in the monomial basis.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

import numpy as np

from .bounds import EdgeData, binom_trunc, d_gamma, edge_data
from .complex import CellComplex, StarComplex, star
from .linalg import FieldSpec, SparseMatrix, rank
from .monomials import basis_size, form_power, shift_table


@dataclass(frozen=True)
class LinearForm:
    """Primitive integer coefficient vector, first nonzero entry positive."""

    coefficients: tuple[int, ...]

    @classmethod
    def from_coefficients(cls, coeffs: Sequence) -> "LinearForm":
        fr = [Fraction(c) for c in coeffs]
        if not any(fr):
            raise ValueError("zero linear form")
        den = 1
        for c in fr:
            den = lcm(den, c.denominator)
        ints = [int(c * den) for c in fr]
        g = 0
        for c in ints:
            g = gcd(g, c)
        ints = [c // g for c in ints]
        if next(c for c in ints if c) < 0:
            ints = [-c for c in ints]
        return cls(tuple(ints))

    @property
    def nvars(self) -> int:
        return len(self.coefficients)

    def __call__(self, point) -> Fraction:
        return sum(Fraction(c) * x for c, x in zip(self.coefficients, point))


def _det(m: list[list[Fraction]]) -> Fraction:
    m = [list(r) for r in m]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] / m[c][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return det


def normal_vector(vectors: list[Sequence[Fraction]]) -> list[Fraction]:
    """Generalized cross product of n-1 vectors in n-space."""
    n = len(vectors[0])
    assert len(vectors) == n - 1
    out = []
    for i in range(n):
        minor = [[v[j] for j in range(n) if j != i] for v in vectors]
        out.append((-1) ** i * _det(minor))
    return out


def _spanning_differences(points, need: int):
    """Greedily pick `need` independent difference vectors from points[0]."""
    from .complex import matrix_rank

    p0 = points[0]
    chosen: list[list[Fraction]] = []
    for p in points[1:]:
        v = [a - b for a, b in zip(p, p0)]
        if matrix_rank(chosen + [v]) == len(chosen) + 1:
            chosen.append(v)
            if len(chosen) == need:
                return chosen
    raise ValueError("points do not span a hyperplane")


def hyperplane_form(points) -> LinearForm:
    """Affine form c0 + c.x vanishing on `points` (constant first)."""
    pts = [tuple(Fraction(x) for x in p) for p in points]
    n = len(pts[0])
    normal = normal_vector(_spanning_differences(pts, n - 1))
    c0 = -sum(a * b for a, b in zip(normal, pts[0]))
    return LinearForm.from_coefficients([c0] + normal)


def linear_form_through_origin(points) -> LinearForm:
    """Homogeneous form vanishing on `points` and the origin."""
    pts = [tuple(Fraction(x) for x in p) for p in points if any(p)]
    n = len(pts[0])
    origin = tuple(Fraction(0) for _ in range(n))
    normal = normal_vector(_spanning_differences([origin] + pts, n - 1))
    return LinearForm.from_coefficients(normal)


def face_forms(cx: CellComplex, homogeneous: bool, origin=None) -> dict[int, LinearForm]:
    """Forms of the interior codimension-one faces.

    Homogeneous forms are taken after translating `origin` to 0.
    """
    out = {}
    shift = origin if origin is not None else tuple(0 for _ in range(cx.ambient))
    for fid in cx.face_ids(cx.dim - 1, True):
        pts = [tuple(a - b for a, b in zip(cx.vertices[v], shift)) for v in cx.faces[fid].vertex_ids]
        out[fid] = linear_form_through_origin(pts) if homogeneous else hyperplane_form(pts)
    return out


# ----------------------------------------------------------------- formulas


def dim_twoface_ideal(d: int, r: int, coned: bool = False) -> int:
    if coned:
        return binom_trunc(d + 2 - r, 3)
    return binom_trunc(d + 1 - r, 2)


def dim_edge_ideal_formula(ed: EdgeData, d: int) -> int:
    r = ed.r
    return (
        ed.t * binom_trunc(d + 1 - r, 2)
        - ed.a * binom_trunc(d + 1 - ed.q, 2)
        - ed.b * binom_trunc(d + 2 - ed.q, 2)
    )


def dim_edge_ideal_coned(ed: EdgeData, d: int) -> int:
    """Coned edge ideal via the sum over homogeneous pieces."""
    return sum(dim_edge_ideal_formula(ed, i) for i in range(d + 1))


# ------------------------------------------------------------------- oracle


def ideal_matrix(generators: list[tuple[LinearForm, int]], d: int) -> SparseMatrix:
    """Columns: form^power * monomial, one block per generator, in degree d."""
    nvars = generators[0][0].nvars
    nrows = basis_size(nvars, d, True)
    rows, cols, vals, col_groups = [], [], [], []
    off = 0
    for g, (form, power) in enumerate(generators):
        src = d - power
        if src < 0:
            continue
        terms = form_power(form.coefficients, power)
        tindex, table = shift_table(nvars, src, power, True)
        ncols = table.shape[1]
        for exp, c in terms.items():
            rows.append(table[tindex[exp]])
            cols.append(np.arange(ncols) + off)
            vals.append(np.full(ncols, c, dtype=object))
        col_groups.append(np.full(ncols, g))
        off += ncols
    if not rows:
        return SparseMatrix(nrows, off, [], [], [])
    return SparseMatrix(
        nrows,
        off,
        np.concatenate(rows),
        np.concatenate(cols),
        np.concatenate(vals),
    )


def dim_ideal_oracle(
    generators: list[tuple[LinearForm, int]], d: int, field: FieldSpec | None = None, seed: int = 0
) -> int:
    if not generators or d < 0:
        return 0
    if len({f.nvars for f, _ in generators}) != 1:
        raise ValueError("generators use different numbers of variables")
    return rank(ideal_matrix(generators, d), field, seed)


def dim_ideal_coned_oracle(generators, d: int, field: FieldSpec | None = None, seed: int = 0) -> int:
    """Homogenized ideal: add a variable the forms do not involve."""
    lifted = [(LinearForm.from_coefficients((0,) + f.coefficients), k) for f, k in generators]
    return dim_ideal_oracle(lifted, d, field, seed)


def _star_forms(st: StarComplex) -> dict[int, LinearForm]:
    apex = st.base.vertices[st.apex]
    return face_forms(st.base, homogeneous=True, origin=apex)


def edge_ideal_generators(st: StarComplex, edge_id: int, r: int) -> list[tuple[LinearForm, int]]:
    forms = _star_forms(st)
    walls = st.base.faces[edge_id].cofaces
    return [(forms[w], r + 1) for w in walls if w in forms]


def vertex_ideal_generators(st: StarComplex, r: int) -> list[tuple[LinearForm, int]]:
    return [(f, r + 1) for f in _star_forms(st).values()]


def star_interior_edges(st: StarComplex) -> list[int]:
    return list(st.base.face_ids(1, True))


# ------------------------------------------------------ Euler characteristics


def euler_char_J_star(
    st: StarComplex, d: int, r: int, method: str = "formula", field: FieldSpec | None = None, seed: int = 0
) -> int:
    """Faces minus edges plus (closed stars only) the apex ideal, in degree d.

    The formula method uses the generic edge formula and, for the apex,
    C(d+2, 2) above D_gamma; below it the oracle is consulted.
    """
    cx = st.base
    total = cx.f_interior(2) * dim_twoface_ideal(d, r)
    edges = star_interior_edges(st)
    for e in edges:
        if method == "formula":
            total -= dim_edge_ideal_formula(edge_data(cx, e, r), d)
        else:
            total -= dim_ideal_oracle(edge_ideal_generators(st, e, r), d, field, seed)
    if st.apex_is_interior:
        if method == "formula" and d > d_gamma(st, r):
            total += binom_trunc(d + 2, 2)
        else:
            total += dim_ideal_oracle(vertex_ideal_generators(st, r), d, field, seed)
    return total


def _vertex_ideal_dims(cx: CellComplex, v: int, d: int, r: int, field, seed) -> int:
    """Sum over i <= d of dim J(v)_i, with the formula above D_gamma."""
    st = star(cx, v)
    dg = d_gamma(st, r)
    gens = None
    total = 0
    for i in range(d + 1):
        if i > dg:
            total += binom_trunc(i + 2, 2)
        else:
            gens = gens or vertex_ideal_generators(st, r)
            total += dim_ideal_oracle(gens, i, field, seed)
    return total


def euler_char_J_coned(
    cx: CellComplex, d: int, r: int, method: str = "formula", field: FieldSpec | None = None, seed: int = 0
) -> int:
    """Euler characteristic of the coned ideal complex in degree d.

    Coned ideal dimensions accumulate the homogeneous ones over i <= d.
    """
    total = cx.f_interior(2) * dim_twoface_ideal(d, r, coned=True)
    for e in cx.face_ids(1, True):
        ed = edge_data(cx, e, r)
        if method == "formula":
            total -= dim_edge_ideal_coned(ed, d)
        else:
            v0 = cx.faces[e].vertex_ids[0]
            st = star(cx, v0)
            local = st.base.face_id([st.source_vertices.index(v) for v in cx.faces[e].vertex_ids])
            gens = edge_ideal_generators(st, local, r)
            total -= sum(dim_ideal_oracle(gens, i, field, seed) for i in range(d + 1))
    for v in cx.face_ids(0, True):
        total += _vertex_ideal_dims(cx, cx.faces[v].vertex_ids[0], d, r, field, seed)
    return total


def chi_prime(cx: CellComplex, d: int, r: int) -> int:
    """Interior 2-face and edge terms of the coned Euler characteristic."""
    total = cx.f_interior(2) * dim_twoface_ideal(d, r, coned=True)
    for e in cx.face_ids(1, True):
        total -= dim_edge_ideal_coned(edge_data(cx, e, r), d)
    return total
