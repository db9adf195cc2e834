"""Lie models of graded-commutative cohomology presentations.

The model of a presentation is the free graded Lie algebra on one generator
per positive-degree basis class (reduced degree = class degree - 1, character
copied), equipped with the quadratic differential dual to the product: for a
generator g dual to the class xi with reduced coproduct
Delta(xi) = sum c_i a_i (x) b_i,

    d g = 1/2 sum_i c_i (-1)^(reduced degree of a_i) [g_{a_i}, g_{b_i}],

extended to bracket words as a graded derivation,
d[u,v] = [du,v] + (-1)^|u| [u,dv].  The scalar and sign convention is pinned
by machine checks: build_model verifies d has square zero on every basis
word within cutoffs, and the test suite verifies d descends through
rewriting into the Lyndon basis.  Any convention passing both yields the
same homology.

Homology of (L, d) at reduced degree m-1, weight w, character chi is the
weight-w, character-chi piece of the degree-m homotopy group.  For simply
connected input (no degree-1 classes) the weight of a contribution to degree
m is at most m-1, so tables up to max_m are complete once max_w >= max_m - 1;
otherwise results are truncations of the weight tower and flagged as such.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    CutoffExceededError,
    CutoffTooSmallError,
    DSquaredNonzeroError,
    NotCompleteError,
    OutOfRangeError,
)
from .exactlin import RationalMatrix, SubspaceBasis, homology_dim, kernel_basis
from .free_lie import BracketWord, FreeLieBasis, Generator, GeneratorSet, expand
from .graded_core import AlgebraPresentation, dualize, is_simply_connected_type

SlotKey = tuple[int, int, tuple[int, ...]]


def model_generators(p: AlgebraPresentation) -> GeneratorSet:
    """One generator per positive-degree class, named after it."""
    gens = tuple(
        Generator(ident, p.element(ident).degree - 1, p.lattice.reduce(p.element(ident).character))
        for ident in p.positive_ids()
    )
    return GeneratorSet(gens, lattice=p.lattice)


@dataclass
class FormalLieModel:
    presentation: AlgebraPresentation
    generators: GeneratorSet
    basis: FreeLieBasis  # internal cutoffs exceed the reporting window
    max_m: int
    max_w: int
    differential: dict[SlotKey, RationalMatrix]
    _leaf_d: dict[str, dict[BracketWord, Fraction]]
    _table_cache: dict = field(default_factory=dict, repr=False)

    @property
    def complete(self) -> bool:
        return is_simply_connected_type(self.presentation)

    def slot_matrix(self, r: int, w: int, char: tuple[int, ...] = ()) -> RationalMatrix:
        """Differential out of slot (r, w, char), into (r-1, w+1, char)."""
        key = (r, w, tuple(char))
        m = self.differential.get(key)
        if m is not None:
            return m
        src = self.basis.slot_dim(r, w, char)
        tgt = self.basis.slot_dim(r - 1, w + 1, char) if r >= 1 else 0
        return RationalMatrix.zero(tgt, src)

    def d_word(self, bw: BracketWord) -> dict[BracketWord, Fraction]:
        """Value of the differential on one bracket word, as a combination."""
        if bw.is_leaf:
            return dict(self._leaf_d.get(bw.gen, {}))
        out: dict[BracketWord, Fraction] = {}
        for lw, c in self.d_word(bw.left).items():
            _accumulate(out, self.generators.bracket(lw, bw.right), c)
        sign = -1 if bw.left.parity else 1
        for rw, c in self.d_word(bw.right).items():
            _accumulate(out, self.generators.bracket(bw.left, rw), sign * c)
        return out


def _accumulate(acc: dict, key, val):
    val = acc.get(key, Fraction(0)) + val
    if val:
        acc[key] = val
    else:
        acc.pop(key, None)


def build_model(p: AlgebraPresentation, max_m: int, max_w: int) -> FormalLieModel:
    """Construct the Lie model with verified differential.

    Internal slots extend two weights and one reduced degree beyond the
    reporting window so that homology at the window edge sees its incoming
    differential and d^2 = 0 can be checked on every reported word.
    """
    if max_m < 2:
        raise CutoffTooSmallError("max_m must be at least 2")
    if max_w < 1:
        raise CutoffTooSmallError("max_w must be at least 1")
    coproduct = dualize(p)  # validates the presentation
    gens = model_generators(p)
    b = FreeLieBasis(gens, max_r=max_m, max_w=max_w + 2)

    leaf_d: dict[str, dict[BracketWord, Fraction]] = {}
    for g in gens.gens:
        combo: dict[BracketWord, Fraction] = {}
        for a, bb, c in coproduct.on(g.ident):
            ra = p.element(a).degree - 1
            sign = -1 if ra % 2 else 1
            word = gens.bracket(gens.leaf(a), gens.leaf(bb))
            _accumulate(combo, word, Fraction(c) * sign / 2)
        leaf_d[g.ident] = combo

    model = FormalLieModel(p, gens, b, max_m, max_w, {}, leaf_d)

    for key in b.slot_keys():
        r, w, char = key
        # below reduced degree 0 there is nothing; the top internal weight
        # block is target-only (its image would leave the internal basis)
        if r < 1 or w + 1 > b.max_w:
            continue
        words = b.slots[key]
        tgt_dim = b.slot_dim(r - 1, w + 1, char)
        cols = {}
        for j, bw in enumerate(words):
            combo = model.d_word(bw)
            if not combo:
                continue
            coords = expand(combo, b)
            for i, c in enumerate(coords):
                if c:
                    cols[(i, j)] = c
        model.differential[key] = RationalMatrix(tgt_dim, len(words), cols)

    _check_d_squared(model)
    return model


def _check_d_squared(model: FormalLieModel):
    b = model.basis
    for key in b.slot_keys():
        r, w, char = key
        if w > model.max_w or r < 2:
            continue
        first = model.slot_matrix(r, w, char)
        second = model.slot_matrix(r - 1, w + 1, char)
        comp = second.matmul(first)
        if not comp.is_zero():
            bad_col = min(j for (_, j) in comp.entries)
            witness = repr(b.slots[key][bad_col])
            raise DSquaredNonzeroError(
                f"d squared is nonzero on {witness} at slot (r={r}, w={w})",
                witness=witness,
            )


# ---------------------------------------------------------------------------
# homotopy tables


@dataclass
class HomotopyTable:
    """Weight- and character-graded dimensions of the homotopy groups.

    entries[(m, w, char)] holds the dimension of the weight-w, character-char
    piece of the degree-m group; zero entries are omitted.  pi1_pieces holds
    the reduced-degree-0 slots (the unipotent fundamental-group layer) keyed
    by (w, char); it is empty for simply connected input.
    """

    max_m: int
    max_w: int
    complete: bool
    entries: dict[tuple[int, int, tuple[int, ...]], int]
    pi1_pieces: dict[tuple[int, tuple[int, ...]], int]

    def entry(self, m: int, w: int, char: tuple[int, ...] = ()) -> int:
        return self.entries.get((m, w, tuple(char)), 0)

    def total(self, m: int) -> int:
        return sum(v for (mm, _, _), v in self.entries.items() if mm == m)

    def weight_breakdown(self, m: int) -> dict[tuple[int, tuple[int, ...]], int]:
        return {
            (w, char): v for (mm, w, char), v in sorted(self.entries.items()) if mm == m
        }

    def characters(self, m: int) -> set[tuple[int, ...]]:
        return {char for (mm, _, char), v in self.entries.items() if mm == m and v}


def _slot_homology(model: FormalLieModel, r: int, w: int, char) -> int:
    d_out = model.slot_matrix(r, w, char)
    d_in = model.slot_matrix(r + 1, w - 1, char) if w >= 2 else RationalMatrix.zero(
        model.basis.slot_dim(r, w, char), 0
    )
    return homology_dim(d_in, d_out)


def homotopy_table(
    model: FormalLieModel, max_m: int | None = None, max_w: int | None = None
) -> HomotopyTable:
    max_m = model.max_m if max_m is None else max_m
    max_w = model.max_w if max_w is None else max_w
    if max_m > model.max_m or max_w > model.max_w:
        raise CutoffExceededError(
            f"table to (m={max_m}, w={max_w}) exceeds the model cutoffs "
            f"(m={model.max_m}, w={model.max_w})"
        )
    complete = model.complete
    if complete and max_w < max_m - 1:
        raise CutoffExceededError(
            f"a complete table to degree {max_m} needs weights to {max_m - 1}, "
            f"got max_w={max_w}"
        )
    cache_key = (max_m, max_w)
    cached = model._table_cache.get(cache_key)
    if cached is not None:
        return cached

    entries: dict[tuple[int, int, tuple[int, ...]], int] = {}
    for m in range(2, max_m + 1):
        r = m - 1
        w_top = min(max_w, m - 1) if complete else max_w
        for w in range(1, w_top + 1):
            for char in model.basis.characters_at(r, w):
                h = _slot_homology(model, r, w, char)
                if h:
                    entries[(m, w, char)] = h

    pi1: dict[tuple[int, tuple[int, ...]], int] = {}
    for w in range(1, max_w + 1):
        for char in model.basis.characters_at(0, w):
            h = _slot_homology(model, 0, w, char)
            if h:
                pi1[(w, char)] = h

    table = HomotopyTable(max_m, max_w, complete, entries, pi1)
    model._table_cache[cache_key] = table
    return table


def supports(model: FormalLieModel, m: int) -> frozenset[tuple[int, ...]]:
    """Characters carrying a nonzero piece of the degree-m group."""
    if m < 2 or m > model.max_m:
        raise OutOfRangeError(f"m={m} outside [2, {model.max_m}]")
    return frozenset(homotopy_table(model).characters(m))


def hurewicz_rank(model: FormalLieModel, m: int) -> tuple[int, SubspaceBasis]:
    """Rank and image of the degree-m homotopy-to-homology map.

    The image is the weight-1 part of the homology: kernel vectors of the
    differential on generator slots, written in the dual basis of the
    degree-m classes (the annihilator of decomposables).
    """
    if not model.complete:
        raise NotCompleteError("input has degree-1 classes; table is a truncation")
    if m < 2 or m > model.max_m:
        raise OutOfRangeError(f"m={m} outside [2, {model.max_m}]")
    p = model.presentation
    ambient_ids = [i for i in p.positive_ids() if p.element(i).degree == m]
    ambient_index = {ident: k for k, ident in enumerate(ambient_ids)}
    vectors = []
    r = m - 1
    for char in model.basis.characters_at(r, 1):
        slot = model.basis.slot(r, 1, char)
        kern = kernel_basis(model.slot_matrix(r, 1, char))
        for kv in kern.vectors:
            amb = [Fraction(0)] * len(ambient_ids)
            for pos, c in enumerate(kv):
                amb[ambient_index[slot[pos].gen]] = c
            vectors.append(tuple(amb))
    image = SubspaceBasis.from_vectors(vectors, len(ambient_ids))
    return image.dim, image
