"""Spectral sequence of a filtered chain complex, exactly over Q.

Input: a homologically graded complex (d lowers degree by one) with a
decreasing filtration C = F^0 >= F^1 >= ... >= F^L = 0 per degree, preserved
by d.  Pages are computed from the chain-level approximation subspaces

    A_r(s, n) = {x in F^s C_n : d x in F^(s+r) C_(n-1)},
    E_r(s, n) = A_r(s, n) / (A_(r-1)(s+1, n) + d {x in F^(s-r+1) : d x in F^s}),

where the boundary-source stage s-r+1 clamps at 0 (F^t = C for t <= 0) while
its landing condition stays in F^s.  The differential
d_r is induced by d on representatives and shifts (s, n) to (s+r, n-1).
Because every filtration is finite, pages stabilize: for r > L the formula
above literally computes (F^s ker d)/(F^(s+1) ker d + F^s im d), the infinity
page, and sum over s at fixed n recovers the homology of the total complex.

Reported indices: a slot (s, n) is published as (p, q) = (s + 1, s + 1 + n),
so p numbers the filtration stage starting at 1 for the top graded piece and
q - p is the chain degree.  d_r sends (p, q) to (p + r, q + r - 1).  For the
weight filtration of a Lie model (filtered_from_model) this puts the weight-w
block of reduced degree n at p = w, q = w + n.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InvalidInputError, OutOfRangeError
from .exactlin import (
    RationalMatrix,
    SubspaceBasis,
    coordinates_in_span,
    extend_to_complement,
    preimage_subspace,
    subspace_intersection,
    subspace_sum,
)

Slot = tuple[int, int]


@dataclass
class FilteredComplex:
    """Finite filtered chain complex; validated on construction.

    dims[n] is the dimension of C_n; differentials[n] is d_n : C_n -> C_(n-1);
    filtration[n] lists F^0 >= F^1 >= ... ending with the zero subspace.
    Missing filtration entries default to the two-step (full, zero).
    """

    dims: dict[int, int]
    differentials: dict[int, RationalMatrix]
    filtration: dict[int, tuple[SubspaceBasis, ...]] = field(default_factory=dict)

    def __post_init__(self):
        self.dims = {n: d for n, d in self.dims.items() if d}
        for n, d in self.dims.items():
            if d < 0:
                raise InvalidInputError(f"negative dimension at degree {n}")
        for n in list(self.filtration):
            self.filtration[n] = tuple(self.filtration[n])
        for n in self.dims:
            if n not in self.filtration:
                self.filtration[n] = (
                    SubspaceBasis.full(self.dims[n]),
                    SubspaceBasis.zero(self.dims[n]),
                )
        self._validate()

    # -- accessors ------------------------------------------------------------

    def dim(self, n: int) -> int:
        return self.dims.get(n, 0)

    def d(self, n: int) -> RationalMatrix:
        m = self.differentials.get(n)
        if m is None:
            return RationalMatrix.zero(self.dim(n - 1), self.dim(n))
        return m

    def level(self, n: int, s: int) -> SubspaceBasis:
        """F^s C_n, clamped: full below 0, zero beyond the recorded length."""
        if self.dim(n) == 0:
            return SubspaceBasis.zero(0)
        levels = self.filtration[n]
        if s <= 0:
            return levels[0]
        if s >= len(levels):
            return SubspaceBasis.zero(self.dim(n))
        return levels[s]

    def degrees(self) -> list[int]:
        return sorted(self.dims)

    @property
    def max_level(self) -> int:
        longest = 1
        for n in self.dims:
            longest = max(longest, len(self.filtration[n]) - 1)
        return longest

    # -- validation -------------------------------------------------------------

    def _validate(self):
        for n, m in self.differentials.items():
            if (m.rows, m.cols) != (self.dim(n - 1), self.dim(n)):
                raise InvalidInputError(
                    f"differential at degree {n} has shape {(m.rows, m.cols)}, "
                    f"expected {(self.dim(n - 1), self.dim(n))}"
                )
        for n in self.dims:
            if not self.d(n - 1).matmul(self.d(n)).is_zero():
                raise InvalidInputError(f"d squared is nonzero out of degree {n}")
        for n in self.dims:
            levels = self.filtration[n]
            if len(levels) < 2:
                raise InvalidInputError(f"filtration at degree {n} too short")
            if levels[0].dim != self.dim(n):
                raise InvalidInputError(f"filtration at degree {n} does not start full")
            if levels[-1].dim != 0:
                raise InvalidInputError(f"filtration at degree {n} does not end at zero")
            for s in range(1, len(levels)):
                if not levels[s - 1].contains_subspace(levels[s]):
                    raise InvalidInputError(
                        f"filtration at degree {n} is not nested at stage {s}"
                    )
        for n in self.dims:
            dmat = self.d(n)
            for s in range(1, len(self.filtration[n])):
                sub = self.level(n, s)
                tgt = self.level(n - 1, s)
                for v in sub.vectors:
                    if not _contains_or_zero(tgt, dmat.apply(v)):
                        raise InvalidInputError(
                            f"differential does not preserve F^{s} at degree {n}"
                        )


def _contains_or_zero(space: SubspaceBasis, vec) -> bool:
    if all(x == 0 for x in vec):
        return True
    if space.ambient_dim == 0:
        return False
    return space.contains(vec)


@dataclass
class SpectralSequencePage:
    """One page: nonzero slot dimensions and the d_r matrices out of them."""

    r: int
    dims: dict[Slot, int]
    differentials: dict[Slot, RationalMatrix]

    def dim(self, p: int, q: int) -> int:
        return self.dims.get((p, q), 0)

    def d(self, p: int, q: int) -> RationalMatrix:
        m = self.differentials.get((p, q))
        if m is not None:
            return m
        return RationalMatrix.zero(
            self.dim(p + self.r, q + self.r - 1), self.dim(p, q)
        )

    def all_differentials_zero(self) -> bool:
        return all(m.is_zero() for m in self.differentials.values())


def _approx(fc: FilteredComplex, cache: dict, s: int, t: int, n: int) -> SubspaceBasis:
    """{x in F^s C_n : d x in F^t C_(n-1)}; A_r(s, n) is the case t = s + r."""
    key = (s, t, n)
    got = cache.get(key)
    if got is not None:
        return got
    dim_n = fc.dim(n)
    if dim_n == 0:
        out = SubspaceBasis.zero(0)
    else:
        fs = fc.level(n, s)
        pre = preimage_subspace(fc.d(n), fc.level(n - 1, t))
        out = subspace_intersection(fs, pre)
    cache[key] = out
    return out


def page(fc: FilteredComplex, r: int) -> SpectralSequencePage:
    if r < 1:
        raise OutOfRangeError("pages start at r = 1")
    cache: dict = {}
    numerators: dict[Slot, SubspaceBasis] = {}
    denominators: dict[Slot, SubspaceBasis] = {}
    reps: dict[Slot, list] = {}
    for n in fc.degrees():
        for s in range(0, len(fc.filtration[n]) - 1):
            z = _approx(fc, cache, s, s + r, n)
            d1 = _approx(fc, cache, s + 1, s + r, n)
            # boundary sources sit r-1 stages up; below stage 0 the source
            # clamps to the whole space while the landing condition stays F^s
            src = _approx(fc, cache, max(s - r + 1, 0), s, n + 1)
            dmat = fc.d(n + 1)
            boundary = SubspaceBasis.from_vectors(
                [dmat.apply(v) for v in src.vectors], fc.dim(n)
            )
            denom = subspace_sum(d1, boundary)
            rep_vectors = extend_to_complement(denom, z)
            if not rep_vectors:
                continue
            slot = (s, n)
            numerators[slot] = z
            denominators[slot] = denom
            reps[slot] = rep_vectors

    dims = {_publish(s, n): len(v) for (s, n), v in reps.items()}
    diffs: dict[Slot, RationalMatrix] = {}
    for (s, n), vectors in reps.items():
        tgt = (s + r, n - 1)
        tgt_reps = reps.get(tgt, [])
        tgt_denom = denominators.get(tgt)
        if tgt_denom is None:
            # target slot is zero; record the zero map out of this slot
            diffs[_publish(s, n)] = RationalMatrix.zero(0, len(vectors))
            continue
        span_rows = list(tgt_reps) + list(tgt_denom.vectors)
        entries = {}
        dmat = fc.d(n)
        for j, v in enumerate(vectors):
            coords = coordinates_in_span(span_rows, dmat.apply(v), fc.dim(n - 1))
            for i in range(len(tgt_reps)):
                if coords[i]:
                    entries[(i, j)] = coords[i]
        diffs[_publish(s, n)] = RationalMatrix(len(tgt_reps), len(vectors), entries)
    return SpectralSequencePage(r, dims, diffs)


def _publish(s: int, n: int) -> Slot:
    return (s + 1, s + 1 + n)


@dataclass
class DegenerationReport:
    r_from: int
    r_to: int
    degenerate: bool
    first_failure: tuple | None  # (r, p, q) of the first nonzero d_r, if any


def check_degeneration(fc: FilteredComplex, r0: int, r_max: int) -> DegenerationReport:
    """True iff every d_r vanishes for r0 <= r <= r_max and the dims freeze."""
    if r0 < 1:
        raise OutOfRangeError("pages start at r = 1")
    first_failure = None
    for r in range(r0, r_max + 1):
        pg = page(fc, r)
        for slot, m in sorted(pg.differentials.items()):
            if not m.is_zero():
                first_failure = (r, *slot)
                break
        if first_failure:
            break
    frozen = page(fc, r0).dims == page(fc, r_max + 1).dims
    return DegenerationReport(r0, r_max, first_failure is None and frozen, first_failure)


def e_infinity(fc: FilteredComplex) -> dict[Slot, int]:
    """Stable page dims; with finite filtration this is page max_level + 1."""
    return page(fc, fc.max_level + 1).dims


# ---------------------------------------------------------------------------
# the weight filtration of a Lie model


def filtered_from_model(model) -> FilteredComplex:
    """Chain complex of the model with its by-weight decreasing filtration.

    Degree n holds every basis slot of reduced degree n; F^p spans the words
    of weight > p.  Weights above the model's reporting window are kept as a
    final block with zero outgoing differential (the quotient complex of the
    truncation), so slots inside the window see their full incoming boundary.
    """
    b = model.basis
    w_top = model.max_w + 1
    layout: dict[int, list[tuple[int, tuple, int]]] = {}
    for (r, w, char) in b.slot_keys():
        if w > w_top:
            continue
        layout.setdefault(r, []).append((w, char, b.slot_dim(r, w, char)))
    for blocks in layout.values():
        blocks.sort(key=lambda t: (t[0], t[1]))

    dims = {n: sum(k for (_, _, k) in blocks) for n, blocks in layout.items()}
    offsets: dict[tuple[int, int, tuple], int] = {}
    for n, blocks in layout.items():
        at = 0
        for w, char, k in blocks:
            offsets[(n, w, char)] = at
            at += k

    differentials: dict[int, RationalMatrix] = {}
    for n, blocks in layout.items():
        if dims.get(n - 1, 0) == 0:
            continue
        entries = {}
        for w, char, k in blocks:
            if w + 1 > w_top:
                continue  # quotient truncation: top block maps to zero
            tgt_off = offsets.get((n - 1, w + 1, char))
            if tgt_off is None:
                continue
            block = model.slot_matrix(n, w, char)
            col_off = offsets[(n, w, char)]
            for (i, j), val in block.entries.items():
                entries[(tgt_off + i, col_off + j)] = val
        differentials[n] = RationalMatrix(dims[n - 1], dims[n], entries)

    filtration: dict[int, tuple[SubspaceBasis, ...]] = {}
    for n, blocks in layout.items():
        levels = []
        for p in range(0, w_top + 1):
            vecs = []
            for w, char, k in blocks:
                if w > p:
                    off = offsets[(n, w, char)]
                    for i in range(k):
                        vec = [Fraction(0)] * dims[n]
                        vec[off + i] = Fraction(1)
                        vecs.append(tuple(vec))
            levels.append(SubspaceBasis.from_vectors(vecs, dims[n]))
        filtration[n] = tuple(levels)

    return FilteredComplex(dims, differentials, filtration)
