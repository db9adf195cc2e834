import random
from fractions import Fraction

import pytest

from formalpi.errors import InvalidInputError, OutOfRangeError
from formalpi.exactlin import RationalMatrix, SubspaceBasis, homology_dim
from formalpi.free_lie import dim as lie_dim
from formalpi.free_lie import e1_index_to_lie
from formalpi.quillen_weight import build_model, homotopy_table
from formalpi.ss_engine import (
    FilteredComplex,
    check_degeneration,
    e_infinity,
    filtered_from_model,
    page,
)

from oracles import gauss_rank


def two_step_example():
    dims = {1: 1, 0: 1}
    diffs = {1: RationalMatrix.from_rows([[1]])}
    filtration = {
        1: (SubspaceBasis.full(1), SubspaceBasis.zero(1)),
        0: (SubspaceBasis.full(1), SubspaceBasis.full(1), SubspaceBasis.zero(1)),
    }
    return FilteredComplex(dims, diffs, filtration)


def test_two_step_example_pages():
    fc = two_step_example()
    p1 = page(fc, 1)
    assert p1.dims == {(1, 2): 1, (2, 2): 1}
    d1 = p1.d(1, 2)
    assert (d1.rows, d1.cols) == (1, 1) and not d1.is_zero()
    assert page(fc, 2).dims == {}
    assert e_infinity(fc) == {}


def test_two_step_example_degeneration():
    fc = two_step_example()
    rep1 = check_degeneration(fc, 1, 4)
    assert not rep1.degenerate
    assert rep1.first_failure == (1, 1, 2)
    rep2 = check_degeneration(fc, 2, 4)
    assert rep2.degenerate and rep2.first_failure is None


def test_trivial_filtration_is_homology():
    d2 = RationalMatrix.from_rows([[1], [0]])  # Q -> Q^2, rank 1
    fc = FilteredComplex({2: 1, 1: 2, 0: 1}, {2: d2, 1: RationalMatrix.zero(1, 2)})
    p1 = page(fc, 1)
    # H_2 = 0, H_1 = 1, H_0 = 1
    assert p1.dims == {(1, 2): 1, (1, 1): 1}
    assert p1.all_differentials_zero()
    assert check_degeneration(fc, 1, 3).degenerate
    assert e_infinity(fc) == {(1, 2): 1, (1, 1): 1}


def test_validation_rejects_bad_input():
    with pytest.raises(InvalidInputError):
        FilteredComplex({1: 1, 0: 1}, {1: RationalMatrix.from_rows([[1], [0]])})
    good = RationalMatrix.from_rows([[1]])
    with pytest.raises(InvalidInputError):
        FilteredComplex(
            {1: 1, 0: 1},
            {1: good},
            {
                1: (SubspaceBasis.full(1), SubspaceBasis.zero(1)),
                0: (SubspaceBasis.zero(1), SubspaceBasis.zero(1)),
            },
        )
    # d(F^1) must stay inside F^1: here F^1 in degree 0 is zero while d is onto
    with pytest.raises(InvalidInputError):
        FilteredComplex(
            {1: 1, 0: 1},
            {1: good},
            {
                1: (SubspaceBasis.full(1), SubspaceBasis.full(1), SubspaceBasis.zero(1)),
                0: (SubspaceBasis.full(1), SubspaceBasis.zero(1), SubspaceBasis.zero(1)),
            },
        )
    # d^2 = 0 enforced
    two = RationalMatrix.from_rows([[1]])
    with pytest.raises(InvalidInputError):
        FilteredComplex({2: 1, 1: 1, 0: 1}, {2: two, 1: two})
    with pytest.raises(OutOfRangeError):
        page(two_step_example(), 0)


@pytest.fixture(scope="module")
def cp2_setup(corpus):
    model = build_model(corpus["cp2"], 8, 7)
    return model, filtered_from_model(model)


def test_model_filtration_shape(cp2_setup):
    model, fc = cp2_setup
    # degree n collects all weight blocks of reduced degree n
    b = model.basis
    for n in fc.degrees():
        expected = sum(
            b.slot_dim(r, w, c)
            for (r, w, c) in b.slot_keys()
            if r == n and w <= model.max_w + 1
        )
        assert fc.dim(n) == expected


def test_model_e1_is_free_lie_dims(cp2_setup):
    model, fc = cp2_setup
    p1 = page(fc, 1)
    for (p, q), d in p1.dims.items():
        r, w = q - p, p  # reduced degree and weight of the slot
        if w > model.max_w:
            continue
        total_degree, length = e1_index_to_lie(p, q + 1)
        assert (total_degree, length) == (r + w, w)
        assert d == lie_dim(total_degree, length, model.basis)


def test_model_d1_transports_differential(cp2_setup):
    model, fc = cp2_setup
    p1 = page(fc, 1)
    d = p1.differentials[(1, 4)]  # the generator dual to the degree-4 class
    assert d.entries == {(0, 0): Fraction(-1, 2)}


def test_model_e2_matches_homotopy_table(cp2_setup):
    model, fc = cp2_setup
    table = homotopy_table(model)
    p2 = page(fc, 2)
    seen = {}
    for (m, w, _), v in table.entries.items():
        key = (w, w + m - 1)
        seen[key] = seen.get(key, 0) + v
    published = {
        (p, q): v
        for (p, q), v in p2.dims.items()
        # the reporting window: weight within max_w, reduced degree within max_m-1
        if p <= model.max_w and q - p <= model.max_m - 1
    }
    assert {k: v for k, v in seen.items() if v} == published
    assert check_degeneration(fc, 2, 6).degenerate


def test_model_einfinity_equals_e2(cp2_setup):
    model, fc = cp2_setup
    assert e_infinity(fc) == page(fc, 2).dims


def total_homology_dims(fc):
    out = {}
    degrees = fc.degrees()
    if not degrees:
        return out
    span = range(min(degrees) - 1, max(degrees) + 2)
    for n in span:
        c = fc.dim(n)
        if c == 0:
            continue
        rank_out = gauss_rank(fc.d(n).to_rows()) if fc.dim(n - 1) else 0
        rank_in = gauss_rank(fc.d(n + 1).to_rows()) if fc.dim(n + 1) else 0
        h = c - rank_out - rank_in
        if h:
            out[n] = h
    return out


def assert_ss_invariants(fc, r_span=4):
    """Shared checks: E_infinity sums to total homology; pages step by homology."""
    inf = e_infinity(fc)
    collapsed = {}
    for (p, q), d in inf.items():
        collapsed[q - p] = collapsed.get(q - p, 0) + d
    assert collapsed == total_homology_dims(fc)
    prev = page(fc, 1)
    for r in range(1, r_span + 1):
        nxt = page(fc, r + 1)
        slots = set(prev.dims) | {
            (p - r, q - r + 1) for (p, q) in prev.dims
        }
        for p, q in slots:
            h = homology_dim(prev.d(p - r, q - r + 1), prev.d(p, q))
            assert h == nxt.dim(p, q), (r, p, q)
        prev = nxt


def test_invariants_on_worked_examples(cp2_setup):
    assert_ss_invariants(two_step_example())
    _, fc = cp2_setup
    assert_ss_invariants(fc)


# -- random filtered complexes ------------------------------------------------


def dense_inverse(rows):
    n = len(rows)
    aug = [
        [Fraction(x) for x in row] + [Fraction(1 if i == j else 0) for j in range(n)]
        for i, row in enumerate(rows)
    ]
    for col in range(n):
        piv = next(i for i in range(col, n) if aug[i][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for i in range(n):
            if i != col and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[col])]
    return [row[n:] for row in aug]


def random_filtered_complex(rng, max_degree=3, max_dim=4, max_levels=3):
    """A valid random filtered complex with a non-coordinate filtration.

    Starts from a matching differential on levelled coordinates (source level
    <= target level, every vector in at most one pair, so d^2 = 0 and the
    coordinate filtration is preserved), then conjugates by a level-unipotent
    change of basis to exercise genuine subspace arithmetic.
    """
    degrees = list(range(0, max_degree + 1))
    dims = {n: rng.randint(0, max_dim) for n in degrees}
    levels = {n: [rng.randrange(max_levels) for _ in range(dims[n])] for n in degrees}

    coeff = lambda: Fraction(rng.choice([1, -1, 2, -2, 3]), rng.choice([1, 1, 2]))
    used = {n: set() for n in degrees}
    pairs = []
    for n in degrees:
        if n - 1 not in dims:
            continue
        for i in range(dims[n]):
            if i in used[n] or rng.random() < 0.35:
                continue
            candidates = [
                j
                for j in range(dims[n - 1])
                if j not in used[n - 1] and levels[n - 1][j] >= levels[n][i]
            ]
            if not candidates:
                continue
            j = rng.choice(candidates)
            used[n].add(i)
            used[n - 1].add(j)
            pairs.append((n, i, j))

    diff_rows = {
        n: [[Fraction(0)] * dims[n] for _ in range(dims.get(n - 1, 0))] for n in degrees
    }
    for n, i, j in pairs:
        diff_rows[n][j][i] = coeff()

    basis_change = {}
    for n in degrees:
        k = dims[n]
        rows = [[Fraction(1 if i == j else 0) for j in range(k)] for i in range(k)]
        for i in range(k):
            for j in range(k):
                if levels[n][i] > levels[n][j] and rng.random() < 0.5:
                    rows[i][j] = coeff()
        basis_change[n] = rows

    def matmul_rows(a, b):
        return [
            [sum(a[i][t] * b[t][j] for t in range(len(b))) for j in range(len(b[0]))]
            for i in range(len(a))
        ]

    differentials = {}
    for n in degrees:
        if dims.get(n - 1, 0) == 0 or dims[n] == 0:
            continue
        rows = matmul_rows(
            matmul_rows(basis_change[n - 1], diff_rows[n]),
            dense_inverse(basis_change[n]),
        )
        differentials[n] = RationalMatrix.from_rows(rows)

    filtration = {}
    for n in degrees:
        if dims[n] == 0:
            continue
        cols = basis_change[n]
        stages = []
        for s in range(max_levels + 1):
            vecs = [
                tuple(cols[t][v] for t in range(dims[n]))
                for v in range(dims[n])
                if levels[n][v] >= s
            ]
            stages.append(SubspaceBasis.from_vectors(vecs, dims[n]))
        filtration[n] = tuple(stages)

    return FilteredComplex(dims, differentials, filtration)


def test_random_filtered_complexes_smoke():
    rng = random.Random(20260814)
    built = 0
    while built < 12:
        fc = random_filtered_complex(rng)
        if not fc.degrees():
            continue
        assert_ss_invariants(fc)
        built += 1
