"""Exact linear algebra over the rationals.

Everything downstream (Lie model differentials, spectral sequence pages,
minimal model cohomology) reduces to ranks, kernels and quotient dimensions
of matrices with Fraction entries.  Floating point is never used.

Elimination runs fraction-free (Bareiss): rows are scaled to integers once,
and the forward sweep keeps integer entries by dividing out the previous
pivot at each step.  The pivot in a column is the candidate with the largest
absolute value, ties broken by lowest row index, which makes every result
deterministic and independent of entry insertion order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .errors import CompositionNonzeroError

Entry = tuple[int, int]


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class RationalMatrix:
    """Sparse matrix over Q.  Only nonzero entries are stored.

    Fractions are canonical by construction (reduced, positive denominator),
    so equal matrices compare equal as dataclasses.
    """

    rows: int
    cols: int
    entries: dict[Entry, Fraction]

    def __post_init__(self):
        clean = {}
        for (i, j), v in self.entries.items():
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise ValueError(f"entry ({i},{j}) outside {self.rows}x{self.cols}")
            v = _frac(v)
            if v != 0:
                clean[(i, j)] = v
        object.__setattr__(self, "entries", clean)

    @classmethod
    def from_rows(cls, rows: list[list]) -> "RationalMatrix":
        n = len(rows)
        m = len(rows[0]) if rows else 0
        entries = {}
        for i, row in enumerate(rows):
            if len(row) != m:
                raise ValueError("ragged rows")
            for j, v in enumerate(row):
                v = _frac(v)
                if v != 0:
                    entries[(i, j)] = v
        return cls(n, m, entries)

    @classmethod
    def zero(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls(rows, cols, {})

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(n, n, {(i, i): Fraction(1) for i in range(n)})

    def to_rows(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(
            self.cols, self.rows, {(j, i): v for (i, j), v in self.entries.items()}
        )

    def matmul(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        by_row: dict[int, list[tuple[int, Fraction]]] = {}
        for (k, j), v in other.entries.items():
            by_row.setdefault(k, []).append((j, v))
        acc: dict[Entry, Fraction] = {}
        for (i, k), a in self.entries.items():
            for j, b in by_row.get(k, ()):
                key = (i, j)
                acc[key] = acc.get(key, Fraction(0)) + a * b
        return RationalMatrix(self.rows, other.cols, acc)

    def apply(self, vec: tuple) -> tuple[Fraction, ...]:
        """Matrix times column vector."""
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        out = [Fraction(0)] * self.rows
        for (i, j), v in self.entries.items():
            if vec[j]:
                out[i] += v * _frac(vec[j])
        return tuple(out)

    def is_zero(self) -> bool:
        return not self.entries

    def row_dicts(self) -> list[dict[int, Fraction]]:
        out: list[dict[int, Fraction]] = [dict() for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out


def _integerize(row: dict[int, Fraction]) -> dict[int, int]:
    if not row:
        return {}
    mult = lcm(*(v.denominator for v in row.values()))
    return {j: int(v * mult) for j, v in row.items()}


def _bareiss_echelon(rows: list[dict[int, int]], cols: int):
    """Fraction-free forward elimination.

    Returns (pivot column list, echelon rows as integer dicts).  Pivot rule:
    within the leftmost eligible column, maximal absolute value, then lowest
    row index.
    """
    rows = [dict(r) for r in rows if r]
    pivots: list[int] = []
    prev = 1
    top = 0
    for col in range(cols):
        best = -1
        best_val = 0
        for i in range(top, len(rows)):
            v = rows[i].get(col, 0)
            if v and (best < 0 or abs(v) > abs(best_val)):
                best, best_val = i, v
        if best < 0:
            continue
        rows[top], rows[best] = rows[best], rows[top]
        piv_row = rows[top]
        piv = piv_row[col]
        for i in range(top + 1, len(rows)):
            r = rows[i]
            f = r.get(col, 0)
            new: dict[int, int] = {}
            for j in set(r) | set(piv_row):
                val = piv * r.get(j, 0) - f * piv_row.get(j, 0)
                if val:
                    new[j] = val // prev
            rows[i] = new
        pivots.append(col)
        prev = piv
        top += 1
    return pivots, rows[: len(pivots)]


def _rref(m: RationalMatrix):
    """Reduced row echelon form: (pivot columns, rows as Fraction dicts)."""
    int_rows = [_integerize(r) for r in m.row_dicts()]
    pivots, ech = _bareiss_echelon(int_rows, m.cols)
    frac_rows = [{j: Fraction(v) for j, v in r.items()} for r in ech]
    for i in reversed(range(len(pivots))):
        col = pivots[i]
        piv = frac_rows[i][col]
        if piv != 1:
            frac_rows[i] = {j: v / piv for j, v in frac_rows[i].items()}
        for k in range(i):
            f = frac_rows[k].get(col)
            if f:
                row = dict(frac_rows[k])
                for j, v in frac_rows[i].items():
                    nv = row.get(j, Fraction(0)) - f * v
                    if nv:
                        row[j] = nv
                    else:
                        row.pop(j, None)
                frac_rows[k] = row
    return pivots, frac_rows


def rank(m: RationalMatrix) -> int:
    int_rows = [_integerize(r) for r in m.row_dicts()]
    pivots, _ = _bareiss_echelon(int_rows, m.cols)
    return len(pivots)


@dataclass(frozen=True)
class SubspaceBasis:
    """A subspace of Q^n, stored as the reduced row echelon basis.

    The RREF form is a canonical representative: two constructions of the
    same subspace yield equal objects.
    """

    ambient_dim: int
    vectors: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        for v in self.vectors:
            if len(v) != self.ambient_dim:
                raise ValueError("vector length != ambient dimension")

    @classmethod
    def from_vectors(cls, vectors, ambient_dim: int) -> "SubspaceBasis":
        m = RationalMatrix.from_rows([list(v) for v in vectors]) if vectors else None
        if m is None:
            return cls(ambient_dim, ())
        if m.cols != ambient_dim:
            raise ValueError("vector length != ambient dimension")
        _, rows = _rref(m)
        vecs = []
        for r in rows:
            vecs.append(tuple(r.get(j, Fraction(0)) for j in range(ambient_dim)))
        return cls(ambient_dim, tuple(vecs))

    @classmethod
    def full(cls, n: int) -> "SubspaceBasis":
        vecs = tuple(
            tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n)
        )
        return cls(n, vecs)

    @classmethod
    def zero(cls, n: int) -> "SubspaceBasis":
        return cls(n, ())

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def contains(self, vec) -> bool:
        vec = tuple(_frac(x) for x in vec)
        stacked = SubspaceBasis.from_vectors(list(self.vectors) + [vec], self.ambient_dim)
        return stacked.dim == self.dim

    def contains_subspace(self, other: "SubspaceBasis") -> bool:
        return all(self.contains(v) for v in other.vectors)


def kernel_basis(m: RationalMatrix) -> SubspaceBasis:
    """Right null space {x : m x = 0}, canonical RREF basis."""
    pivots, rows = _rref(m)
    pivot_set = set(pivots)
    free_cols = [j for j in range(m.cols) if j not in pivot_set]
    vecs = []
    for f in free_cols:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            c = rows[i].get(f)
            if c:
                v[p] = -c
        vecs.append(tuple(v))
    return SubspaceBasis.from_vectors(vecs, m.cols)


def homology_dim(d_in: RationalMatrix, d_out: RationalMatrix) -> int:
    """dim ker(d_out) - rank(d_in) for a three-term piece  . -d_in-> V -d_out-> .

    Raises CompositionNonzeroError unless d_out @ d_in == 0.
    """
    if d_out.cols != d_in.rows:
        raise ValueError(
            f"middle dimension mismatch: d_out has {d_out.cols} cols, d_in has {d_in.rows} rows"
        )
    if not d_out.matmul(d_in).is_zero():
        raise CompositionNonzeroError("d_out @ d_in is not zero")
    return (d_out.cols - rank(d_out)) - rank(d_in)


# ---------------------------------------------------------------------------
# subspace arithmetic


def subspace_sum(a: SubspaceBasis, b: SubspaceBasis) -> SubspaceBasis:
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    return SubspaceBasis.from_vectors(list(a.vectors) + list(b.vectors), a.ambient_dim)


def subspace_intersection(a: SubspaceBasis, b: SubspaceBasis) -> SubspaceBasis:
    """Intersection of row spans, via the kernel of the stacked transpose."""
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    ka, kb = a.dim, b.dim
    if ka == 0 or kb == 0:
        return SubspaceBasis.zero(a.ambient_dim)
    entries = {}
    for i, v in enumerate(a.vectors):
        for r, x in enumerate(v):
            if x:
                entries[(r, i)] = x
    for i, v in enumerate(b.vectors):
        for r, x in enumerate(v):
            if x:
                entries[(r, ka + i)] = -x
    stacked = RationalMatrix(a.ambient_dim, ka + kb, entries)
    vecs = []
    for k in kernel_basis(stacked).vectors:
        vec = [Fraction(0)] * a.ambient_dim
        for i, v in enumerate(a.vectors):
            c = k[i]
            if c:
                for r, x in enumerate(v):
                    vec[r] += c * x
        vecs.append(tuple(vec))
    return SubspaceBasis.from_vectors(vecs, a.ambient_dim)


def image_subspace(m: RationalMatrix, s: SubspaceBasis) -> SubspaceBasis:
    """{m x : x in s} inside Q^rows."""
    if m.cols != s.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    return SubspaceBasis.from_vectors([m.apply(v) for v in s.vectors], m.rows)


def preimage_subspace(m: RationalMatrix, s: SubspaceBasis) -> SubspaceBasis:
    """{x : m x in s} inside Q^cols."""
    if m.rows != s.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    ann = kernel_basis(
        RationalMatrix.from_rows([list(v) for v in s.vectors])
        if s.dim
        else RationalMatrix.zero(0, s.ambient_dim)
    )
    # m x lies in s  iff  every annihilator functional kills m x.
    if ann.dim == 0:
        return SubspaceBasis.full(m.cols)
    cond = RationalMatrix.from_rows([list(v) for v in ann.vectors]).matmul(m)
    return kernel_basis(cond)


def coordinates_in_span(rows: list[tuple], vec, ambient_dim: int) -> tuple[Fraction, ...]:
    """Solve vec = sum c_i rows[i]; raises ValueError when vec is outside."""
    vec = tuple(_frac(x) for x in vec)
    k = len(rows)
    entries = {}
    for i, r in enumerate(rows):
        for j, x in enumerate(r):
            x = _frac(x)
            if x:
                entries[(j, i)] = x
    for j, x in enumerate(vec):
        if x:
            entries[(j, k)] = x
    aug = RationalMatrix(ambient_dim, k + 1, entries)
    pivots, rref_rows = _rref(aug)
    if k in pivots:
        raise ValueError("vector not in span")
    coords = [Fraction(0)] * k
    for i, p in enumerate(pivots):
        coords[p] = rref_rows[i].get(k, Fraction(0))
    return tuple(coords)


def extend_to_complement(sub: SubspaceBasis, space: SubspaceBasis) -> list[tuple]:
    """Vectors from space's basis extending sub to span space (greedy, stable)."""
    if sub.ambient_dim != space.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    current = sub
    extra = []
    for v in space.vectors:
        if not current.contains(v):
            extra.append(v)
            current = subspace_sum(current, SubspaceBasis.from_vectors([v], sub.ambient_dim))
    return extra
