from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from formalpi.errors import CompositionNonzeroError
from formalpi.exactlin import (
    RationalMatrix,
    SubspaceBasis,
    coordinates_in_span,
    homology_dim,
    image_subspace,
    kernel_basis,
    preimage_subspace,
    rank,
    subspace_intersection,
    subspace_sum,
)


# --- independent oracles -----------------------------------------------------
# Plain dense Gaussian elimination with first-nonzero pivoting.  Shares no
# code with the Bareiss path under test.


def gauss_rank(rows):
    rows = [[Fraction(x) for x in r] for r in rows]
    if not rows:
        return 0
    ncols = len(rows[0])
    rk = 0
    for col in range(ncols):
        piv = None
        for i in range(rk, len(rows)):
            if rows[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        pr = rows[rk]
        for i in range(rk + 1, len(rows)):
            if rows[i][col] != 0:
                f = rows[i][col] / pr[col]
                rows[i] = [a - f * b for a, b in zip(rows[i], pr)]
        rk += 1
    return rk


def det(rows):
    rows = [[Fraction(x) for x in r] for r in rows]
    n = len(rows)
    sign = 1
    for col in range(n):
        piv = None
        for i in range(col, n):
            if rows[i][col] != 0:
                piv = i
                break
        if piv is None:
            return Fraction(0)
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            sign = -sign
        for i in range(col + 1, n):
            if rows[i][col] != 0:
                f = rows[i][col] / rows[col][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[col])]
    out = Fraction(sign)
    for i in range(n):
        out *= rows[i][i]
    return out


def minor_rank(rows):
    """Largest k such that some k x k minor is nonzero."""
    n = len(rows)
    m = len(rows[0]) if rows else 0
    for k in range(min(n, m), 0, -1):
        for ri in itertools.combinations(range(n), k):
            for ci in itertools.combinations(range(m), k):
                sub = [[rows[i][j] for j in ci] for i in ri]
                if det(sub) != 0:
                    return k
    return 0


# --- rank --------------------------------------------------------------------


def test_rank_identity():
    assert rank(RationalMatrix.identity(6)) == 6


def test_rank_matches_minor_enumeration_oracle():
    rng = random.Random(7001)
    for _ in range(12):
        rows = [[rng.randint(-3, 3) for _ in range(7)] for _ in range(5)]
        m = RationalMatrix.from_rows(rows)
        assert rank(m) == minor_rank(rows)


small_entries = st.integers(min_value=-6, max_value=6)


@st.composite
def matrices(draw, max_dim=6):
    n = draw(st.integers(min_value=1, max_value=max_dim))
    m = draw(st.integers(min_value=1, max_value=max_dim))
    rows = draw(
        st.lists(
            st.lists(small_entries, min_size=m, max_size=m), min_size=n, max_size=n
        )
    )
    return RationalMatrix.from_rows(rows)


@settings(max_examples=120, deadline=None)
@given(matrices())
def test_rank_equals_rank_of_transpose(m):
    assert rank(m) == rank(m.transpose())


@settings(max_examples=120, deadline=None)
@given(matrices())
def test_rank_nullity(m):
    assert rank(m) + kernel_basis(m).dim == m.cols


@settings(max_examples=120, deadline=None)
@given(matrices())
def test_kernel_vectors_are_killed(m):
    k = kernel_basis(m)
    for v in k.vectors:
        assert all(x == 0 for x in m.apply(v))


def test_rank_matches_gauss_oracle():
    rng = random.Random(7002)
    for _ in range(25):
        n, m = rng.randint(1, 6), rng.randint(1, 6)
        rows = [
            [Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(m)]
            for _ in range(n)
        ]
        assert rank(RationalMatrix.from_rows(rows)) == gauss_rank(rows)


# --- kernel ------------------------------------------------------------------


def test_kernel_of_row_sum():
    m = RationalMatrix.from_rows([[1, 1]])
    k = kernel_basis(m)
    assert k.vectors == ((Fraction(1), Fraction(-1)),)


def test_kernel_is_canonical_echelon():
    # Different generating sets of the same subspace give equal bases.
    a = SubspaceBasis.from_vectors([(1, 2, 0), (0, 0, 1)], 3)
    b = SubspaceBasis.from_vectors([(2, 4, 3), (1, 2, 1), (3, 6, 4)], 3)
    assert a == b


def test_entry_order_does_not_matter():
    entries1 = {(0, 0): 1, (0, 1): 2, (1, 0): 3, (1, 1): 5}
    entries2 = dict(reversed(list(entries1.items())))
    m1 = RationalMatrix(2, 2, entries1)
    m2 = RationalMatrix(2, 2, entries2)
    assert rank(m1) == rank(m2)
    assert kernel_basis(m1) == kernel_basis(m2)


# --- homology ----------------------------------------------------------------


def test_homology_of_zero_maps():
    for n in (0, 1, 4):
        d_in = RationalMatrix.zero(n, 3)
        d_out = RationalMatrix.zero(2, n)
        assert homology_dim(d_in, d_out) == n


def test_homology_matches_independent_row_reduction():
    # 3-term complex Q^2 -> Q^3 -> Q^2 with d_out @ d_in = 0.
    d_in = RationalMatrix.from_rows([[1, 0], [0, 1], [1, 1]])
    d_out = RationalMatrix.from_rows([[1, 1, -1], [2, 2, -2]])
    assert d_out.matmul(d_in).is_zero()
    expected = (3 - gauss_rank(d_out.to_rows())) - gauss_rank(d_in.to_rows())
    assert homology_dim(d_in, d_out) == expected == 0


def test_homology_rejects_nonzero_composition():
    d_in = RationalMatrix.identity(2)
    d_out = RationalMatrix.identity(2)
    with pytest.raises(CompositionNonzeroError):
        homology_dim(d_in, d_out)


# --- subspace arithmetic -----------------------------------------------------


def test_sum_and_intersection_dimension_formula():
    rng = random.Random(7003)
    for _ in range(20):
        n = rng.randint(2, 5)
        a = SubspaceBasis.from_vectors(
            [[rng.randint(-2, 2) for _ in range(n)] for _ in range(rng.randint(0, n))], n
        )
        b = SubspaceBasis.from_vectors(
            [[rng.randint(-2, 2) for _ in range(n)] for _ in range(rng.randint(0, n))], n
        )
        s = subspace_sum(a, b)
        i = subspace_intersection(a, b)
        assert s.dim + i.dim == a.dim + b.dim
        for v in i.vectors:
            assert a.contains(v) and b.contains(v)


def test_preimage_and_image():
    m = RationalMatrix.from_rows([[1, 0, 1], [0, 1, 1]])
    w = SubspaceBasis.from_vectors([(1, 1)], 2)
    pre = preimage_subspace(m, w)
    # x + z = y + z on the preimage of the diagonal.
    for v in pre.vectors:
        img = m.apply(v)
        assert w.contains(img)
    assert pre.dim == 2
    img = image_subspace(m, SubspaceBasis.full(3))
    assert img == SubspaceBasis.full(2)


def test_coordinates_in_span_roundtrip():
    rows = [(1, 0, 2), (0, 1, 1)]
    v = (3, -2, 4)
    c = coordinates_in_span(rows, v, 3)
    rebuilt = [Fraction(0)] * 3
    for coef, row in zip(c, rows):
        for j, x in enumerate(row):
            rebuilt[j] += coef * x
    assert tuple(rebuilt) == tuple(Fraction(x) for x in v)
    with pytest.raises(ValueError):
        coordinates_in_span(rows, (0, 0, 1), 3)
