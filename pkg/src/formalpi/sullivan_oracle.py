"""Sullivan minimal models of formal simply connected algebras.

The input algebra carries the zero differential, so its own cohomology is
itself and a minimal model is built degree by degree: at each degree adjoin
closed generators hitting a complement of the image inside the target, then
generators whose differentials kill the kernel of the comparison map one
degree above.  Generator differentials are decomposable polynomials in the
previously adjoined generators, which is exactly minimality.

Generator counts per degree form the output of record: they are compared
against the homotopy table computed on the Lie side, and agreement of the
two machineries is the point of this module.

All computations happen in the free graded-commutative algebra truncated
just above the cutoff, so every step is finite exact linear algebra.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import CutoffMismatchError, DegreeCutoffError, NotSimplyConnectedError
from .exactlin import (
    RationalMatrix,
    SubspaceBasis,
    extend_to_complement,
    kernel_basis,
)
from .graded_core import AlgebraPresentation, is_simply_connected_type, validate_algebra
from .errors import InvalidInputError

Monomial = tuple[int, ...]  # sorted generator indices; odd indices never repeat


@dataclass(frozen=True)
class ModelGenerator:
    name: str
    degree: int
    # decomposable polynomial in earlier generators, {} for closed generators
    differential: tuple[tuple[Monomial, Fraction], ...]
    # image in the target algebra as (basis id, coeff) pairs
    image: tuple[tuple[str, Fraction], ...]


@dataclass(frozen=True)
class MinimalModel:
    presentation: AlgebraPresentation
    cutoff: int
    generators: tuple[ModelGenerator, ...]

    def generators_in_degree(self, m: int) -> tuple[ModelGenerator, ...]:
        return tuple(g for g in self.generators if g.degree == m)

    def generator_counts(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for g in self.generators:
            out[g.degree] = out.get(g.degree, 0) + 1
        return out


def _merge(a: Monomial, b: Monomial, parities) -> tuple[int, Monomial] | None:
    """Sorted merge with the Koszul sign; None when an odd index repeats."""
    sign = 1
    out = []
    ia, ib = 0, 0
    # parity of the tail a[ia:], updated as we consume a
    odd_tail = sum(parities[x] for x in a)
    while ia < len(a) and ib < len(b):
        if a[ia] <= b[ib]:
            odd_tail -= parities[a[ia]]
            out.append(a[ia])
            ia += 1
        else:
            if parities[b[ib]] and odd_tail % 2:
                sign = -sign
            out.append(b[ib])
            ib += 1
    out.extend(a[ia:])
    out.extend(b[ib:])
    for t in range(len(out) - 1):
        if out[t] == out[t + 1] and parities[out[t]]:
            return None
    return sign, tuple(out)


class _Truncation:
    """Monomial bases, differential and comparison matrices through a bound."""

    def __init__(self, p: AlgebraPresentation, gens: tuple[ModelGenerator, ...], top: int):
        self.p = p
        self.gens = gens
        self.top = top
        self.degrees = tuple(g.degree for g in gens)
        self.parities = tuple(g.degree % 2 for g in gens)
        by_deg: dict[int, list[Monomial]] = {n: [] for n in range(top + 1)}

        def rec(start: int, mono: list[int], deg: int):
            by_deg[deg].append(tuple(mono))
            for i in range(start, len(gens)):
                nd = deg + self.degrees[i]
                if nd > top:
                    continue
                if self.parities[i] and mono and mono[-1] == i:
                    continue
                mono.append(i)
                rec(i, mono, nd)
                mono.pop()

        rec(0, [], 0)
        self.monomials = {n: tuple(sorted(by_deg[n])) for n in range(top + 1)}
        self.index = {
            n: {m: i for i, m in enumerate(self.monomials[n])} for n in range(top + 1)
        }
        self._ids_by_degree: dict[int, list[str]] = {}
        for e in p.basis:
            self._ids_by_degree.setdefault(e.degree, []).append(e.ident)

    def dim(self, n: int) -> int:
        return len(self.monomials.get(n, ()))

    def target_ids(self, n: int) -> list[str]:
        return self._ids_by_degree.get(n, [])

    def target_dim(self, n: int) -> int:
        return len(self.target_ids(n))

    def d_of_monomial(self, mono: Monomial) -> dict[Monomial, Fraction]:
        out: dict[Monomial, Fraction] = {}
        for j, gi in enumerate(mono):
            terms = self.gens[gi].differential
            if not terms:
                continue
            pre, suf = mono[:j], mono[j + 1 :]
            base = -1 if sum(self.degrees[t] for t in pre) % 2 else 1
            for dm, coeff in terms:
                first = _merge(pre, dm, self.parities)
                if first is None:
                    continue
                s1, m1 = first
                second = _merge(m1, suf, self.parities)
                if second is None:
                    continue
                s2, m2 = second
                acc = out.get(m2, Fraction(0)) + base * s1 * s2 * coeff
                if acc:
                    out[m2] = acc
                else:
                    out.pop(m2, None)
        return out

    def d_matrix(self, n: int) -> RationalMatrix:
        rows, cols = self.dim(n + 1), self.dim(n)
        entries = {}
        for j, mono in enumerate(self.monomials[n]):
            for m2, c in self.d_of_monomial(mono).items():
                entries[(self.index[n + 1][m2], j)] = c
        return RationalMatrix(rows, cols, entries)

    def image_of_monomial(self, mono: Monomial) -> dict[str, Fraction]:
        acc = {self.p.unit_id: Fraction(1)}
        for gi in mono:
            vec = dict(self.gens[gi].image)
            acc = self.p.multiply_vectors(acc, vec)
            if not acc:
                return {}
        return acc

    def comparison_matrix(self, n: int) -> RationalMatrix:
        """Monomials of degree n mapped into the target degree-n basis."""
        ids = self.target_ids(n)
        pos = {ident: i for i, ident in enumerate(ids)}
        entries = {}
        for j, mono in enumerate(self.monomials[n]):
            for ident, c in self.image_of_monomial(mono).items():
                entries[(pos[ident], j)] = c
        return RationalMatrix(len(ids), self.dim(n), entries)

    def cohomology_reps(self, n: int):
        """Echelon representatives of H^n, first-in-basis-order choices."""
        cocycles = kernel_basis(self.d_matrix(n))
        boundaries = SubspaceBasis.from_vectors(
            [self.d_matrix(n - 1).apply(v) for v in _unit_vectors(self.dim(n - 1))]
            if n >= 1
            else [],
            self.dim(n),
        )
        return extend_to_complement(boundaries, cocycles), boundaries, cocycles


def _unit_vectors(n: int):
    return [tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n)]


def minimal_model(p: AlgebraPresentation, cutoff: int) -> MinimalModel:
    """Degreewise construction; generator counts per degree are the output."""
    report = validate_algebra(p)
    if not report.ok:
        raise InvalidInputError(f"presentation invalid:\n{report}")
    if not is_simply_connected_type(p):
        raise NotSimplyConnectedError(
            "presentation has degree-1 classes; minimal model construction "
            "requires a simply connected input"
        )
    if cutoff < 2:
        raise DegreeCutoffError("cutoff must be at least 2")
    gens: list[ModelGenerator] = []
    for n in range(2, cutoff + 1):
        # surject onto the target in degree n
        tr = _Truncation(p, tuple(gens), n + 2)
        reps, _, _ = tr.cohomology_reps(n)
        ids = tr.target_ids(n)
        pos = {ident: i for i, ident in enumerate(ids)}
        image_vecs = []
        for r in reps:
            img = [Fraction(0)] * len(ids)
            for j, c in enumerate(r):
                if c:
                    for ident, v in tr.image_of_monomial(tr.monomials[n][j]).items():
                        img[pos[ident]] += c * v
            image_vecs.append(tuple(img))
        hit = SubspaceBasis.from_vectors(image_vecs, len(ids))
        for vec in extend_to_complement(hit, SubspaceBasis.full(len(ids))):
            gens.append(
                ModelGenerator(
                    name=f"v{n}_{sum(1 for g in gens if g.degree == n)}",
                    degree=n,
                    differential=(),
                    image=tuple((ids[t], c) for t, c in enumerate(vec) if c),
                )
            )
        # kill the kernel of the comparison one degree up
        tr = _Truncation(p, tuple(gens), n + 2)
        reps, _, _ = tr.cohomology_reps(n + 1)
        if reps:
            cmp_matrix = tr.comparison_matrix(n + 1)
            cols = {}
            for j, r in enumerate(reps):
                for i, c in enumerate(cmp_matrix.apply(r)):
                    if c:
                        cols[(i, j)] = c
            induced = RationalMatrix(tr.target_dim(n + 1), len(reps), cols)
            for lam in kernel_basis(induced).vectors:
                cocycle: dict[Monomial, Fraction] = {}
                for j, c in enumerate(lam):
                    if c:
                        for t, x in enumerate(reps[j]):
                            if x:
                                mono = tr.monomials[n + 1][t]
                                acc = cocycle.get(mono, Fraction(0)) + c * x
                                if acc:
                                    cocycle[mono] = acc
                                else:
                                    cocycle.pop(mono, None)
                gens.append(
                    ModelGenerator(
                        name=f"v{n}_{sum(1 for g in gens if g.degree == n)}",
                        degree=n,
                        differential=tuple(sorted(cocycle.items())),
                        image=(),
                    )
                )
    return MinimalModel(p, cutoff, tuple(gens))


def model_violations(mm: MinimalModel) -> list[str]:
    """Exact checks: d² = 0, minimality, comparison iso through the cutoff.

    The comparison map must be an isomorphism on cohomology through the
    cutoff and injective one degree above; returns human-readable failures.
    """
    bad = []
    p, cutoff = mm.presentation, mm.cutoff
    tr = _Truncation(p, mm.generators, cutoff + 2)
    for g in mm.generators:
        if any(len(m) < 2 for m, _ in g.differential):
            bad.append(f"generator {g.name} has a linear differential term")
        for m, _ in g.differential:
            if sum(tr.degrees[t] for t in m) != g.degree + 1:
                bad.append(f"generator {g.name} has an inhomogeneous differential")
    for n in range(cutoff + 1):
        if not tr.d_matrix(n + 1).matmul(tr.d_matrix(n)).is_zero():
            bad.append(f"d squared is nonzero out of degree {n}")
    for n in range(cutoff + 1):
        comparison = tr.comparison_matrix(n)
        # chain map against the zero target differential: boundaries map to zero
        for v in _unit_vectors(tr.dim(n - 1)) if n >= 1 else []:
            if any(comparison.apply(tr.d_matrix(n - 1).apply(v))):
                bad.append(f"comparison map is not a chain map in degree {n}")
                break
    for n in range(2, cutoff + 2):
        reps, _, _ = tr.cohomology_reps(n)
        comparison = tr.comparison_matrix(n)
        images = [comparison.apply(r) for r in reps]
        rank = SubspaceBasis.from_vectors(images, tr.target_dim(n)).dim
        if rank != len(reps):
            bad.append(f"comparison map is not injective on H^{n}")
        if n <= cutoff and rank != tr.target_dim(n):
            bad.append(f"comparison map is not surjective onto degree {n}")
    return bad


@dataclass(frozen=True)
class ComparisonReport:
    cutoff: int
    # (degree, model generator count, homotopy table total)
    mismatches: tuple[tuple[int, int, int], ...]

    @property
    def passed(self) -> bool:
        return not self.mismatches

    @property
    def status(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def __str__(self):
        if self.passed:
            return f"PASS through degree {self.cutoff}"
        parts = ", ".join(
            f"degree {m}: model {a} != table {b}" for m, a, b in self.mismatches
        )
        return f"FAIL ({parts})"


def compare(mm: MinimalModel, table) -> ComparisonReport:
    """PASS iff generator counts match homotopy totals in every degree."""
    if table.max_m != mm.cutoff:
        raise CutoffMismatchError(
            f"model cutoff {mm.cutoff} != table cutoff {table.max_m}"
        )
    counts = mm.generator_counts()
    mismatches = []
    for m in range(2, mm.cutoff + 1):
        want = table.total(m)
        got = counts.get(m, 0)
        if got != want:
            mismatches.append((m, got, want))
    return ComparisonReport(mm.cutoff, tuple(mismatches))
