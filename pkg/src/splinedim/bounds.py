"""Closed-form lower bounds for spline dimensions on 3-dimensional partitions."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb

from .complex import CellComplex, StarComplex, star
from .errors import InvalidEdgeValence, MalformedStar, NotClosedStar, NotOpenStar

MODES = ("standard", "polytopal_extended")
BINOMIALS = ("extended", "truncated")


def binom_trunc(n: int, k: int) -> int:
    """C(n, k), taken to be 0 whenever n < k (including negative n)."""
    assert k >= 0
    return comb(n, k) if n >= k else 0


def binom_extended(n: int, k: int) -> int:
    """C(n, k) as a polynomial in n for n < 0, and 0 for 0 <= n < k.

    This is the binomial of most computer algebra systems; it agrees with
    binom_trunc whenever n >= 0.
    """
    assert k >= 0
    if n >= 0:
        return binom_trunc(n, k)
    return (-1) ** k * comb(k - n - 1, k)


def _cubic_binom(binomials: str):
    if binomials not in BINOMIALS:
        raise ValueError(f"unknown binomial convention {binomials!r}")
    return binom_extended if binomials == "extended" else binom_trunc


@dataclass(frozen=True)
class EdgeData:
    edge_id: int | None
    n: int
    r: int
    t: int
    q: int
    a: int
    b: int


def edge_constants(n: int, r: int, edge_id: int | None = None) -> EdgeData:
    if n < 2:
        raise InvalidEdgeValence(f"edge lies in {n} two-faces; at least 2 are needed")
    if r < 0:
        raise ValueError("r must be >= 0")
    t = min(n, r + 2)
    q = t * (r + 1) // (t - 1)
    a = t * (r + 1) - (t - 1) * q
    return EdgeData(edge_id, n, r, t, q, a, t - 1 - a)


def edge_data(cx: CellComplex, edge_id, r: int) -> EdgeData:
    """Edge constants from the number of 2-faces containing the edge.

    `edge_id` is a face index or a pair of vertex ids.
    """
    if isinstance(edge_id, (tuple, list)):
        edge_id = cx.face_id(edge_id)
    face = cx.faces[edge_id]
    if face.dim != 1:
        raise ValueError(f"face {face.vertex_ids} is not an edge")
    return edge_constants(len(face.cofaces), r, edge_id)


def interior_edge_data(cx: CellComplex, r: int) -> list[EdgeData]:
    return [edge_data(cx, e, r) for e in cx.face_ids(1, True)]


def d_gamma(st: StarComplex, r: int) -> int:
    if not st.apex_is_interior:
        raise NotClosedStar("the apex is a boundary vertex")
    return d_gamma_from_count(st.base.f_interior(1), r)


def d_gamma_from_count(f1: int, r: int) -> int:
    if f1 < 4:
        raise MalformedStar(f"a closed star needs at least 4 interior edges, got {f1}")
    if f1 == 4:
        return 2 * r
    if f1 == 5:
        return (5 * r + 2) // 3
    return (3 * r + 1) // 2


def star_sum(edges: list[EdgeData], f2: int, d: int, r: int) -> int:
    """Face and edge contributions shared by the closed and open star bounds."""
    total = (f2 - sum(e.t for e in edges)) * binom_trunc(d + 1 - r, 2)
    for e in edges:
        total += e.a * binom_trunc(d + 1 - e.q, 2) + e.b * binom_trunc(d + 2 - e.q, 2)
    return total


def _star_edges(st: StarComplex, r: int) -> tuple[list[EdgeData], int]:
    return interior_edge_data(st.base, r), st.base.f_interior(2)


def lb_closed_star(st: StarComplex, d: int, r: int) -> int:
    if not st.apex_is_interior:
        raise NotClosedStar("the apex is a boundary vertex")
    edges, f2 = _star_edges(st, r)
    return 2 * binom_trunc(d + 2, 2) + star_sum(edges, f2, d, r)


def lb_open_star(st: StarComplex, d: int, r: int) -> int:
    if st.apex_is_interior:
        raise NotOpenStar("the apex is an interior vertex")
    edges, f2 = _star_edges(st, r)
    return binom_trunc(d + 2, 2) + star_sum(edges, f2, d, r)


@dataclass(frozen=True)
class VertexSummary:
    vertex_id: int
    is_interior: bool
    d_gamma: int | None
    n_gamma: int
    lb_star_values: dict[int, int] = field(default_factory=dict)


def _summary(vertex_id: int, interior: bool, edges, f1: int, f2: int, r: int, mode: str) -> VertexSummary:
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    lead = 2 if interior else 1
    values: dict[int, int] = {}

    def bound(d):
        values[d] = lead * binom_trunc(d + 2, 2) + star_sum(edges, f2, d, r)
        return values[d]

    total = 0
    dg = None
    start = r + 1
    if interior:
        dg = d_gamma_from_count(f1, r)
        for d in range(r + 1, dg + 1):
            total += binom_trunc(d + 2, 2) - bound(d)
        start = max(dg + 1, r + 1)
    for d in range(start, 3 * r + 2):
        total += max(0, binom_trunc(d + 2, 2) - bound(d))
    if mode == "polytopal_extended":
        for d in range(max(start, 3 * r + 2), 10 * (r + 1) + 1):
            gap = binom_trunc(d + 2, 2) - bound(d)
            if gap <= 0:
                break
            total += gap
    return VertexSummary(vertex_id, interior, dg, total, values)


def vertex_summary(cx: CellComplex, v: int, r: int, mode: str = "standard") -> VertexSummary:
    st = star(cx, v)
    edges, f2 = _star_edges(st, r)
    return _summary(v, st.apex_is_interior, edges, st.base.f_interior(1), f2, r, mode)


def n_gamma(cx: CellComplex, v: int, r: int, mode: str = "standard") -> int:
    return vertex_summary(cx, v, r, mode).n_gamma


@lru_cache(maxsize=256)
def _n_gamma_total(cx: CellComplex, r: int, mode: str) -> int:
    return sum(n_gamma(cx, v, r, mode) for v in range(len(cx.vertices)))


def _check_3d(cx: CellComplex) -> None:
    if cx.dim != 3:
        raise ValueError("bounds are defined for 3-dimensional partitions")


def lb(cx: CellComplex, d: int, r: int, mode: str = "standard", binomials: str = "extended") -> int:
    """The large-degree lower bound, evaluated at any d >= 0.

    The cubic binomials follow `binomials`: "truncated" zeroes every C(n, 3)
    with n < 3, "extended" keeps the polynomial value for negative n. They
    differ only below lb_polynomial(...).valid_from.
    """
    _check_3d(cx)
    C3 = _cubic_binom(binomials)
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    edges = interior_edge_data(cx, r)
    f3, f2, f1, f0 = cx.f(3), cx.f_interior(2), cx.f_interior(1), cx.f_interior(0)
    total = (f3 - f2 + f1) * C3(d + 3, 3)
    total += (f2 - sum(e.t for e in edges)) * C3(d + 2 - r, 3)
    for e in edges:
        total += e.a * C3(d + 2 - e.q, 3) + e.b * C3(d + 3 - e.q, 3)
    total -= f0 * binom_trunc(r + 3, 3)
    return total + _n_gamma_total(cx, r, mode)


@dataclass(frozen=True)
class CubicPolynomial:
    """c0 + c1 d + c2 d^2 + c3 d^3, meaningful for d >= valid_from."""

    coefficients: tuple[Fraction, Fraction, Fraction, Fraction]
    valid_from: int = 0

    def __call__(self, d) -> Fraction:
        return sum(c * Fraction(d) ** i for i, c in enumerate(self.coefficients))

    def __str__(self) -> str:
        parts = []
        for i in (3, 2, 1, 0):
            c = self.coefficients[i]
            if c == 0:
                continue
            mag = abs(c)
            var = {3: "d^3", 2: "d^2", 1: "d", 0: ""}[i]
            if var and mag == 1:
                body = var
            else:
                body = f"{mag}" + (f" {var}" if var else "")
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        if not parts:
            return "0"
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


def binomial_cubic(shift: int) -> tuple[Fraction, ...]:
    """Coefficients of the polynomial C(d + shift, 3) in d."""
    s = Fraction(shift)
    # (d+s)(d+s-1)(d+s-2)/6
    roots = [s, s - 1, s - 2]
    c = [Fraction(1)]
    for rt in roots:
        nxt = [Fraction(0)] * (len(c) + 1)
        for i, v in enumerate(c):
            nxt[i] += v * rt
            nxt[i + 1] += v
        c = nxt
    return tuple(x / 6 for x in c)


def lb_polynomial(cx: CellComplex, r: int, mode: str = "standard") -> CubicPolynomial:
    """The bound as a cubic in d, with the degree from which they agree."""
    _check_3d(cx)
    edges = interior_edge_data(cx, r)
    f3, f2, f1, f0 = cx.f(3), cx.f_interior(2), cx.f_interior(1), cx.f_interior(0)
    terms: dict[int, int] = {}

    def add(shift, coef):
        terms[shift] = terms.get(shift, 0) + coef

    add(3, f3 - f2 + f1)
    add(2 - r, f2 - sum(e.t for e in edges))
    for e in edges:
        add(2 - e.q, e.a)
        add(3 - e.q, e.b)
    coeffs = [Fraction(0)] * 4
    coeffs[0] = Fraction(-f0 * binom_trunc(r + 3, 3) + _n_gamma_total(cx, r, mode))
    valid_from = 0
    for shift, coef in terms.items():
        if coef == 0:
            continue
        valid_from = max(valid_from, -shift)
        for i, c in enumerate(binomial_cubic(shift)):
            coeffs[i] += coef * c
    return CubicPolynomial(tuple(coeffs), valid_from)
