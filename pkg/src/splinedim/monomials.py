"""Monomial bases in graded-lex order and powers of linear forms."""
from __future__ import annotations

from functools import lru_cache
from math import factorial, prod

import numpy as np


@lru_cache(maxsize=None)
def homogeneous_monomials(nvars: int, degree: int) -> tuple[tuple[int, ...], ...]:
    """Exponent vectors of total `degree`, lex-descending (x0^d first)."""
    if degree < 0:
        return ()
    if nvars == 1:
        return ((degree,),)
    out = []
    for e in range(degree, -1, -1):
        for rest in homogeneous_monomials(nvars - 1, degree - e):
            out.append((e,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def monomials_upto(nvars: int, degree: int) -> tuple[tuple[int, ...], ...]:
    """Graded-lex basis of polynomials of degree <= `degree`."""
    out: list[tuple[int, ...]] = []
    for k in range(degree + 1):
        out.extend(homogeneous_monomials(nvars, k))
    return tuple(out)


def basis(nvars: int, degree: int, homogeneous: bool) -> tuple[tuple[int, ...], ...]:
    if homogeneous:
        return homogeneous_monomials(nvars, degree)
    return monomials_upto(nvars, degree)


def basis_size(nvars: int, degree: int, homogeneous: bool) -> int:
    if degree < 0:
        return 0
    from math import comb

    if homogeneous:
        return comb(degree + nvars - 1, nvars - 1)
    return comb(degree + nvars, nvars)


def multinomial(exps: tuple[int, ...]) -> int:
    return factorial(sum(exps)) // prod(factorial(e) for e in exps)


def form_power(coeffs: tuple[int, ...], k: int) -> dict[tuple[int, ...], int]:
    """Expand (sum c_i x_i)^k as {exponent: coefficient}, zero terms dropped."""
    out = {}
    for e in homogeneous_monomials(len(coeffs), k):
        c = multinomial(e) * prod(ci**ei for ci, ei in zip(coeffs, e))
        if c:
            out[e] = c
    return out


def affine_power(coeffs: tuple[int, ...], k: int) -> dict[tuple[int, ...], int]:
    """Expand (c0 + c1 x1 + ... )^k; the first coefficient is the constant."""
    out: dict[tuple[int, ...], int] = {}
    for e, c in form_power(coeffs, k).items():
        out[e[1:]] = out.get(e[1:], 0) + c
    return {e: c for e, c in out.items() if c}


@lru_cache(maxsize=None)
def _keyed(nvars: int, degree: int, homogeneous: bool):
    mons = np.array(basis(nvars, degree, homogeneous), dtype=np.int64).reshape(-1, nvars)
    radix = degree + 1
    weights = radix ** np.arange(nvars - 1, -1, -1, dtype=np.int64)
    keys = mons @ weights
    order = np.argsort(keys)
    return weights, keys[order], order


def index_of(exps: np.ndarray, nvars: int, degree: int, homogeneous: bool) -> np.ndarray:
    """Positions of exponent rows `exps` inside basis(nvars, degree, homogeneous)."""
    weights, skeys, order = _keyed(nvars, degree, homogeneous)
    keys = np.asarray(exps, dtype=np.int64).reshape(-1, nvars) @ weights
    pos = np.searchsorted(skeys, keys)
    if np.any(pos >= len(skeys)) or np.any(skeys[np.minimum(pos, len(skeys) - 1)] != keys):
        raise ValueError("exponent outside basis")
    return order[pos]


@lru_cache(maxsize=64)
def shift_table(nvars: int, src_degree: int, term_degree: int, homogeneous: bool):
    """Target indices of term*source products.

    Returns (terms, table) where table[i, j] is the index of terms[i] * src[j]
    in the degree-(src_degree + term_degree) basis.
    """
    src = np.array(basis(nvars, src_degree, homogeneous), dtype=np.int64).reshape(-1, nvars)
    terms = basis(nvars, term_degree, homogeneous)
    tarr = np.array(terms, dtype=np.int64).reshape(-1, nvars)
    total = src_degree + term_degree
    sums = tarr[:, None, :] + src[None, :, :]
    table = index_of(sums.reshape(-1, nvars), nvars, total, homogeneous).reshape(len(terms), len(src))
    return {t: i for i, t in enumerate(terms)}, table
