"""Free graded Lie algebras over Q with super-Lyndon word bases.

Generators carry a reduced degree r >= 0; the parity of an element is its
reduced degree mod 2.  Brackets obey graded antisymmetry

    [a, b] = -(-1)^(|a||b|) [b, a]

and the graded Jacobi identity.  A basis of the bigraded piece of reduced
degree r and bracket length (weight) w is given by the standard bracketings
of Lyndon words in the generators, together with one extra element [z, z]
for every Lyndon word z of odd parity (its square survives in a Lie
superalgebra and sits at doubled degree and weight).

Elements are expanded in this basis through the embedding into the free
associative algebra, [a, b] |-> ab - (-1)^(|a||b|) ba, which is faithful in
characteristic zero.  The expansion of a basis word is triangular: its
lexicographically smallest associative word is the Lyndon word itself (the
concatenation zz for squares), so coordinates are read off by peeling
leading words.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import CutoffTooSmallError, OutOfRangeError
from .graded_core import CharacterLattice

Word = tuple[int, ...]  # associative word in generator indices


@dataclass(frozen=True)
class Generator:
    ident: str
    reduced_degree: int
    character: tuple[int, ...] = ()

    def __post_init__(self):
        if self.reduced_degree < 0:
            raise ValueError("reduced degree must be >= 0")


@dataclass(frozen=True)
class GeneratorSet:
    """Ordered alphabet of generators; the input order is the total order."""

    gens: tuple[Generator, ...]
    lattice: CharacterLattice = CharacterLattice()

    def __post_init__(self):
        ids = [g.ident for g in self.gens]
        if len(set(ids)) != len(ids):
            raise ValueError("generator ids must be unique")
        for g in self.gens:
            if len(g.character) != self.lattice.length:
                raise ValueError(f"character of {g.ident!r} has wrong length")

    def __len__(self):
        return len(self.gens)

    def index(self, ident: str) -> int:
        for i, g in enumerate(self.gens):
            if g.ident == ident:
                return i
        raise KeyError(ident)

    def leaf(self, ident: str) -> "BracketWord":
        i = self.index(ident)
        g = self.gens[i]
        return BracketWord(ident, None, None, g.reduced_degree, 1, g.character)

    def bracket(self, u: "BracketWord", v: "BracketWord") -> "BracketWord":
        return BracketWord(
            None,
            u,
            v,
            u.reduced_degree + v.reduced_degree,
            u.weight + v.weight,
            self.lattice.add(u.character, v.character),
        )


@dataclass(frozen=True)
class BracketWord:
    """A fully parenthesized bracket expression with cached gradings."""

    gen: str | None
    left: "BracketWord | None"
    right: "BracketWord | None"
    reduced_degree: int
    weight: int
    character: tuple[int, ...]

    @property
    def is_leaf(self) -> bool:
        return self.gen is not None

    @property
    def parity(self) -> int:
        return self.reduced_degree % 2

    def __repr__(self):
        if self.is_leaf:
            return self.gen
        return f"[{self.left!r},{self.right!r}]"


# ---------------------------------------------------------------------------
# Lyndon machinery


def lyndon_words(
    alphabet_size: int,
    max_len: int,
    degrees: list[int] | None = None,
    max_degree: int | None = None,
) -> list[Word]:
    """All Lyndon words of length <= max_len, sorted.

    When letter degrees and a degree budget are given, branches whose additive
    degree already exceeds the budget are pruned (degrees are >= 0, so no
    extension can recover).  This keeps enumeration cheap for alphabets whose
    letters are expensive.

    Words are grown as pre-necklaces a[1..t-1] of period p; such a prefix is a
    Lyndon word exactly when it is aperiodic, p == t-1.
    """
    if alphabet_size == 0 or max_len == 0:
        return []
    out: list[Word] = []
    a = [0] * (max_len + 2)

    def rec(t: int, p: int, deg: int):
        if p == t - 1:
            out.append(tuple(a[1:t]))
        if t > max_len:
            return
        c0 = a[t - p]
        for c in range(c0, alphabet_size):
            nd = deg + (degrees[c] if degrees is not None else 0)
            if max_degree is not None and nd > max_degree:
                continue
            a[t] = c
            rec(t + 1, p if c == c0 else t, nd)

    for c in range(alphabet_size):
        d0 = degrees[c] if degrees is not None else 0
        if max_degree is not None and d0 > max_degree:
            continue
        a[1] = c
        rec(2, 1, d0)
    out.sort()
    return out


def standard_factorization(w: Word) -> tuple[Word, Word]:
    """Split a Lyndon word (len >= 2) as u v with v its smallest proper suffix."""
    best = None
    split = None
    for i in range(1, len(w)):
        s = w[i:]
        if best is None or s < best:
            best, split = s, i
    return w[:split], w[split:]


class FreeLieBasis:
    """Super-Lyndon basis, complete for reduced degree <= max_r, weight <= max_w."""

    def __init__(self, gens: GeneratorSet, max_r: int, max_w: int):
        if max_w < 1:
            raise CutoffTooSmallError("max_w must be at least 1")
        if max_r < 0:
            raise CutoffTooSmallError("max_r must be at least 0")
        self.gens = gens
        self.max_r = max_r
        self.max_w = max_w
        self.slots: dict[tuple[int, int, tuple[int, ...]], tuple[BracketWord, ...]] = {}
        self._bracketing_cache: dict[Word, BracketWord] = {}
        self._expansion_cache: dict[BracketWord, dict[Word, Fraction]] = {}
        self._peel_cache: dict = {}
        self._build()

    # -- construction ---------------------------------------------------------

    def _bracketing(self, w: Word) -> BracketWord:
        cached = self._bracketing_cache.get(w)
        if cached is not None:
            return cached
        if len(w) == 1:
            bw = self.gens.leaf(self.gens.gens[w[0]].ident)
        else:
            u, v = standard_factorization(w)
            bw = self.gens.bracket(self._bracketing(u), self._bracketing(v))
        self._bracketing_cache[w] = bw
        return bw

    def _word_profile(self, w: Word) -> tuple[int, tuple[int, ...]]:
        r = sum(self.gens.gens[i].reduced_degree for i in w)
        char = self.gens.lattice.zero()
        for i in w:
            char = self.gens.lattice.add(char, self.gens.gens[i].character)
        return r, char

    def _build(self):
        staging: dict[tuple[int, int, tuple[int, ...]], list[tuple[Word, BracketWord]]] = {}
        degrees = [g.reduced_degree for g in self.gens.gens]
        for w in lyndon_words(len(self.gens), self.max_w, degrees, self.max_r):
            r, char = self._word_profile(w)
            if r <= self.max_r:
                staging.setdefault((r, len(w), char), []).append((w, self._bracketing(w)))
            # squares of odd Lyndon words live at doubled degree and weight
            if r % 2 == 1 and 2 * r <= self.max_r and 2 * len(w) <= self.max_w:
                bw = self._bracketing(w)
                sq = self.gens.bracket(bw, bw)
                char2 = self.gens.lattice.add(char, char)
                staging.setdefault((2 * r, 2 * len(w), char2), []).append((w + w, sq))
        for key, entries in staging.items():
            entries.sort(key=lambda e: e[0])
            self.slots[key] = tuple(bw for _, bw in entries)

    # -- accessors --------------------------------------------------------------

    def slot(self, r: int, w: int, char=None) -> tuple[BracketWord, ...]:
        if char is None:
            char = self.gens.lattice.zero()
        return self.slots.get((r, w, tuple(char)), ())

    def slot_dim(self, r: int, w: int, char=None) -> int:
        return len(self.slot(r, w, char))

    def slot_keys(self):
        return sorted(self.slots.keys())

    def characters_at(self, r: int, w: int) -> list[tuple[int, ...]]:
        return sorted({c for (rr, ww, c) in self.slots if rr == r and ww == w})

    def in_range(self, r: int, w: int) -> bool:
        return 0 <= r <= self.max_r and 1 <= w <= self.max_w

    # -- associative expansion ----------------------------------------------------

    def expansion(self, bw: BracketWord) -> dict[Word, Fraction]:
        cached = self._expansion_cache.get(bw)
        if cached is not None:
            return cached
        if bw.is_leaf:
            out = {(self.gens.index(bw.gen),): Fraction(1)}
        else:
            lhs = self.expansion(bw.left)
            rhs = self.expansion(bw.right)
            sign = -1 if (bw.left.parity and bw.right.parity) else 1
            out = {}
            for wa, ca in lhs.items():
                for wb, cb in rhs.items():
                    k = wa + wb
                    out[k] = out.get(k, Fraction(0)) + ca * cb
                    k = wb + wa
                    out[k] = out.get(k, Fraction(0)) - sign * ca * cb
            out = {k: v for k, v in out.items() if v}
        self._expansion_cache[bw] = out
        return out

    def _peel_data(self, key):
        cached = self._peel_cache.get(key)
        if cached is not None:
            return cached
        data = []
        for pos, bw in enumerate(self.slots.get(key, ())):
            exp = self.expansion(bw)
            lead = min(exp)
            data.append((lead, exp[lead], exp))
        # leading words are the Lyndon words (or zz) themselves: strictly sorted
        leads = [d[0] for d in data]
        assert leads == sorted(leads) and len(set(leads)) == len(leads)
        index = {lead: i for i, (lead, _, _) in enumerate(data)}
        self._peel_cache[key] = (data, index)
        return data, index


def basis(gens: GeneratorSet, max_r: int, max_w: int) -> FreeLieBasis:
    """Complete super-Lyndon basis for all slots with r <= max_r, w <= max_w."""
    return FreeLieBasis(gens, max_r, max_w)


def expand(expr, b: FreeLieBasis) -> tuple[Fraction, ...]:
    """Coordinates of a bracket expression in its slot's basis.

    ``expr`` is a BracketWord or a {BracketWord: coeff} combination within a
    single slot.  Rewriting by graded antisymmetry and Jacobi is implicit in
    the associative embedding plus leading-word peeling.
    """
    if isinstance(expr, BracketWord):
        expr = {expr: Fraction(1)}
    if not expr:
        raise ValueError("empty expression has no well-defined slot")
    first = next(iter(expr))
    key = (first.reduced_degree, first.weight, first.character)
    for bw in expr:
        if (bw.reduced_degree, bw.weight, bw.character) != key:
            raise ValueError("mixed slots in one expansion request")
    r, w, char = key
    if not b.in_range(r, w):
        raise OutOfRangeError(f"slot (r={r}, w={w}) beyond cutoffs ({b.max_r}, {b.max_w})")

    assoc: dict[Word, Fraction] = {}
    for bw, c in expr.items():
        for word, coeff in b.expansion(bw).items():
            val = assoc.get(word, Fraction(0)) + Fraction(c) * coeff
            if val:
                assoc[word] = val
            else:
                assoc.pop(word, None)

    data, index = b._peel_data(key)
    coords = [Fraction(0)] * len(data)
    while assoc:
        lead = min(assoc)
        pos = index.get(lead)
        if pos is None:
            raise ValueError(f"expression is not in the free Lie algebra span at {lead}")
        _, lead_coeff, exp = data[pos]
        c = assoc[lead] / lead_coeff
        coords[pos] += c
        for word, coeff in exp.items():
            val = assoc.get(word, Fraction(0)) - c * coeff
            if val:
                assoc[word] = val
            else:
                assoc.pop(word, None)
    return tuple(coords)


def dim(p: int, q: int, b: FreeLieBasis) -> int:
    """Dimension of the piece with total unreduced degree p, bracket length q.

    Each generator contributes its reduced degree plus one to p, so the slot
    of reduced degree r and weight w sits at (p, q) = (r + w, w).
    """
    if q < 1:
        raise OutOfRangeError("bracket length must be >= 1")
    if p < q:
        return 0
    r = p - q
    if r > b.max_r or q > b.max_w:
        raise OutOfRangeError(f"(p={p}, q={q}) beyond cutoffs ({b.max_r}, {b.max_w})")
    return sum(len(words) for (rr, ww, _), words in b.slots.items() if rr == r and ww == q)


def translate_index(m: int, i: int) -> tuple[int, int]:
    """Bigraded address of the weight i+1 piece of the degree-m homotopy group."""
    return (m + i, i + 1)


def e1_index_to_lie(p: int, q: int) -> tuple[int, int]:
    """First-page slot (p, q) of the weight tower corresponds to piece (q-1, p)."""
    return (q - 1, p)
