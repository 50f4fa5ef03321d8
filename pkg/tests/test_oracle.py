from fractions import Fraction
from math import comb

import pytest

from splinedim import (
    build_complex,
    cone_star,
    generate_example,
    hilbert_polynomial,
    homog_spline_dim,
    initial_degree,
    spline_dim,
    star,
)
from splinedim.errors import NoStabilization, NotFound
from splinedim.linalg import RATIONAL
from splinedim.oracle import build_system, dual_cycles, fit_cubic


@pytest.fixture(scope="module")
def two_tets():
    pts = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)]
    return build_complex(pts, [(0, 1, 2, 3), (1, 2, 3, 4)])


@pytest.mark.parametrize("r", range(3))
def test_single_tet_is_polynomial_space(tet, r):
    for d in range(6):
        assert spline_dim(tet, d, r) == comb(d + 3, 3)


@pytest.mark.parametrize("r", range(3))
def test_two_tets(two_tets, r):
    # one interior face: a polynomial plus a multiple of the face form to the r+1
    for d in range(7):
        assert spline_dim(two_tets, d, r) == comb(d + 3, 3) + (comb(d + 2 - r, 3) if d > r else 0)


def test_negative_degree(tet, octa_star):
    assert spline_dim(tet, -1, 0) == 0
    assert homog_spline_dim(octa_star, -1, 0) == 0


@pytest.mark.parametrize("r", range(3))
def test_low_degree_is_global_polynomial(ms3d, r):
    for d in range(r + 1):
        assert spline_dim(ms3d, d, r) == comb(d + 3, 3)


def test_monotone_in_r_and_bounded_below(ms3d):
    for d in range(2, 6):
        dims = [spline_dim(ms3d, d, r) for r in range(4)]
        assert dims == sorted(dims, reverse=True)
        assert dims[-1] >= comb(d + 3, 3)


def test_c0_bernstein_count(ms3d):
    for d in range(1, 5):
        expected = ms3d.f(0) + ms3d.f(1) * (d - 1) + ms3d.f(2) * comb(d - 1, 2) + ms3d.f(3) * comb(d - 1, 3)
        assert spline_dim(ms3d, d, 0) == expected


@pytest.mark.parametrize("d,r", [(3, 1), (4, 1), (4, 2), (5, 2)])
def test_formulations_agree(ms3d, d, r):
    assert spline_dim(ms3d, d, r, formulation="full") == spline_dim(ms3d, d, r, formulation="cycles")


@pytest.mark.parametrize("d,r", [(3, 1), (5, 2)])
def test_prime_and_rational_agree(ms3d, d, r):
    assert spline_dim(ms3d, d, r) == spline_dim(ms3d, d, r, RATIONAL)


def test_seeds_agree(ms3d):
    assert spline_dim(ms3d, 7, 2, seed=0) == spline_dim(ms3d, 7, 2, seed=5) == 132


def test_cycle_count(ms3d, torus, cavity):
    for cx in (ms3d, torus, cavity):
        cycles, comps = dual_cycles(cx)
        assert comps == 1
        edges = cx.f_interior(2)
        assert len(cycles) == edges - cx.f(3) + comps


def test_system_shape(ms3d):
    sys_ = build_system(ms3d, 5, 1)
    assert sys_.matrix.ncols == ms3d.f_interior(2) * comb(5 - 2 + 3, 3)
    assert sys_.dimension() == spline_dim(ms3d, 5, 1)


@pytest.mark.parametrize("d", range(0, 6))
def test_cone_identity_small(ms3d, d):
    cs = cone_star(ms3d)
    assert spline_dim(ms3d, d, 1) == homog_spline_dim(cs, d, 1)


@pytest.mark.parametrize("r", [1, 2])
def test_star_splits_into_homogeneous_strands(octa_star, r):
    for d in range(0, 6):
        total = spline_dim(octa_star.base, d, r)
        assert total == sum(homog_spline_dim(octa_star, i, r) for i in range(d + 1))


def test_homogeneous_low_degree(octa_star):
    for r in range(3):
        for d in range(r + 1):
            assert homog_spline_dim(octa_star, d, r) == comb(d + 2, 2)
    # the non-generic branch: only the global cubics survive at d = 3, r = 2
    assert homog_spline_dim(octa_star, 3, 2) == 10


def test_star_apex_translation(ms3d):
    # every interior vertex of the example gives the same homogeneous counts
    counts = {tuple(homog_spline_dim(star(ms3d, v), d, 1) for d in range(5)) for v in range(4, 8)}
    assert len(counts) == 1


def test_fit_cubic():
    pts = [(d, comb(d + 3, 3)) for d in (2, 3, 4, 5)]
    assert fit_cubic(pts) == (1, Fraction(11, 6), 1, Fraction(1, 6))


def test_hilbert_polynomial_single_tet(tet):
    fit = hilbert_polynomial(tet, 0, dim_fn=lambda d: comb(d + 3, 3))
    assert fit.poly.coefficients == (1, Fraction(11, 6), 1, Fraction(1, 6))
    assert fit.stabilized_at == 2


def test_hilbert_polynomial_two_tets(two_tets):
    fit = hilbert_polynomial(two_tets, 1)
    for d in range(5, 12):
        assert fit.poly(d) == comb(d + 3, 3) + comb(d + 1, 3)


def test_hilbert_no_stabilization(tet):
    # a sample sequence that is never cubic
    with pytest.raises(NoStabilization):
        hilbert_polynomial(tet, 0, dim_fn=lambda d: 2**d)


def test_initial_degree(two_tets, tet):
    for r in range(3):
        assert initial_degree(two_tets, r) == r + 1
    with pytest.raises(NotFound):
        initial_degree(tet, 1)
    with pytest.raises(NotFound):
        initial_degree(two_tets, 1, dim_fn=lambda d: comb(d + 3, 3))


def test_flat_cube_is_special():
    flat = generate_example("cube_octahedron_flat", 1)
    generic = generate_example("cube_octahedron", 1)
    assert spline_dim(flat, 5, 1) >= spline_dim(generic, 5, 1) == 60


@pytest.mark.slow
@pytest.mark.parametrize("name", ["ms3d", "ms3d_cavity", "square_torus", "octahedron_star", "ms_cone_star", "cube_octahedron"])
@pytest.mark.parametrize("r", [1, 2])
def test_prime_and_rational_agree_on_examples(name, r):
    cx = generate_example(name, 1)
    for d in range(r + 1, 7):
        assert spline_dim(cx, d, r) == spline_dim(cx, d, r, RATIONAL), d
