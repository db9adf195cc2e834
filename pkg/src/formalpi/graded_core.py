"""Graded-commutative algebra presentations and their dual coproducts.

A presentation is a finite basis with degrees (and optional character
multidegrees over a finitely generated abelian lattice), a unit, and a
product table stored for ordered index pairs i <= j only; the other order is
derived through the Koszul sign.  Products involving the unit are implicit
(the unit acts as the identity); if a table lists one anyway it must agree.

``validate_algebra`` checks the whole table and reports every violation
instead of stopping at the first, so a bad input file produces a complete
diagnosis in one run.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InvalidInputError


@dataclass(frozen=True)
class CharacterLattice:
    """Character group of a finitely generated abelian group.

    Elements are integer tuples of length free_rank + len(torsion); torsion
    coordinates are kept reduced into [0, t).
    """

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0 or any(t < 2 for t in self.torsion):
            raise ValueError("free_rank must be >= 0 and torsion orders >= 2")

    @property
    def length(self) -> int:
        return self.free_rank + len(self.torsion)

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.length

    def reduce(self, char) -> tuple[int, ...]:
        char = tuple(int(c) for c in char)
        if len(char) != self.length:
            raise ValueError(f"character length {len(char)} != {self.length}")
        free = char[: self.free_rank]
        tors = tuple(c % t for c, t in zip(char[self.free_rank :], self.torsion))
        return free + tors

    def add(self, a, b) -> tuple[int, ...]:
        return self.reduce(tuple(x + y for x, y in zip(a, b)))


@dataclass(frozen=True)
class BasisElement:
    ident: str
    degree: int
    character: tuple[int, ...]


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    subjects: tuple[str, ...] = ()

    def __str__(self):
        return f"{self.code}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self):
        if self.ok:
            return "OK"
        return "\n".join(str(v) for v in self.violations)


class AlgebraPresentation:
    """Finite graded-commutative algebra given by basis and product table."""

    def __init__(
        self,
        name: str,
        basis: list[tuple],
        unit_id: str,
        products: dict[tuple[str, str], dict[str, Fraction]],
        lattice: CharacterLattice | None = None,
    ):
        self.name = name
        self.lattice = lattice or CharacterLattice()
        elems = []
        for entry in basis:
            if len(entry) == 2:
                ident, degree = entry
                char = self.lattice.zero()
            else:
                ident, degree, char = entry
                char = self.lattice.reduce(char)
            elems.append(BasisElement(str(ident), int(degree), char))
        self.basis: tuple[BasisElement, ...] = tuple(elems)
        self.unit_id = str(unit_id)
        self.index = {e.ident: i for i, e in enumerate(self.basis)}
        self.products = {
            (str(a), str(b)): {str(t): Fraction(c) for t, c in terms.items() if Fraction(c) != 0}
            for (a, b), terms in products.items()
        }

    # -- accessors -----------------------------------------------------------

    def element(self, ident: str) -> BasisElement:
        return self.basis[self.index[ident]]

    def degree(self, ident: str) -> int:
        return self.element(ident).degree

    def positive_ids(self) -> list[str]:
        return [e.ident for e in self.basis if e.degree > 0]

    def product(self, a: str, b: str) -> dict[str, Fraction]:
        """Full product, deriving the unstored order by the Koszul sign."""
        if a == self.unit_id:
            return {b: Fraction(1)}
        if b == self.unit_id:
            return {a: Fraction(1)}
        ia, ib = self.index[a], self.index[b]
        if ia <= ib:
            stored = self.products.get((a, b))
            if stored is not None:
                return dict(stored)
            return {}
        stored = self.products.get((b, a))
        if stored is None:
            return {}
        sign = -1 if (self.degree(a) % 2) and (self.degree(b) % 2) else 1
        return {t: sign * c for t, c in stored.items()}

    def multiply_vectors(self, u: dict[str, Fraction], v: dict[str, Fraction]) -> dict[str, Fraction]:
        out: dict[str, Fraction] = {}
        for a, ca in u.items():
            for b, cb in v.items():
                for t, c in self.product(a, b).items():
                    val = out.get(t, Fraction(0)) + ca * cb * c
                    if val:
                        out[t] = val
                    else:
                        out.pop(t, None)
        return out

    def dims_by_degree(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for e in self.basis:
            out[e.degree] = out.get(e.degree, 0) + 1
        return out


def is_simply_connected_type(p: AlgebraPresentation) -> bool:
    """True when the presentation has no basis element of degree one."""
    return all(e.degree != 1 for e in p.basis)


def validate_algebra(p: AlgebraPresentation) -> ValidationReport:
    """Check every structural constraint; collects violations, never aborts."""
    v: list[Violation] = []
    seen = set()
    for e in p.basis:
        if e.ident in seen:
            v.append(Violation("DUPLICATE_ID", f"basis id {e.ident!r} repeated", (e.ident,)))
        seen.add(e.ident)
        if e.degree < 0:
            v.append(Violation("DEGREE_MISMATCH", f"{e.ident!r} has negative degree", (e.ident,)))

    if p.unit_id not in p.index:
        v.append(Violation("NO_UNIT", f"unit id {p.unit_id!r} not in basis", (p.unit_id,)))
        return ValidationReport(tuple(v))

    unit = p.element(p.unit_id)
    if unit.degree != 0:
        v.append(Violation("UNIT_DEGREE", "unit must sit in degree 0", (p.unit_id,)))
    if unit.character != p.lattice.zero():
        v.append(Violation("UNIT_CHARACTER", "unit must carry the zero character", (p.unit_id,)))
    degree_zero = [e.ident for e in p.basis if e.degree == 0]
    if degree_zero != [p.unit_id]:
        v.append(
            Violation(
                "CONNECTEDNESS",
                f"degree 0 must contain exactly the unit, found {degree_zero}",
                tuple(degree_zero),
            )
        )

    structural = False
    for (a, b), terms in p.products.items():
        ids = [a, b] + list(terms)
        missing = [x for x in ids if x not in p.index]
        if missing:
            v.append(Violation("UNKNOWN_ID", f"product ({a},{b}) uses unknown ids {missing}", tuple(missing)))
            structural = True
            continue
        if p.index[a] > p.index[b]:
            v.append(
                Violation(
                    "PRODUCT_ORDER",
                    f"product ({a},{b}) stored against basis order; list (i,j) with i <= j only",
                    (a, b),
                )
            )
            structural = True
            continue
        if p.unit_id in (a, b):
            other = b if a == p.unit_id else a
            if terms != {other: Fraction(1)}:
                v.append(
                    Violation(
                        "UNIT_PRODUCT",
                        f"listed unit product ({a},{b}) must equal {other!r}",
                        (a, b),
                    )
                )
            continue
        da, db = p.degree(a), p.degree(b)
        ea, eb = p.element(a), p.element(b)
        want_char = p.lattice.add(ea.character, eb.character)
        for t, c in terms.items():
            if p.degree(t) != da + db:
                v.append(
                    Violation(
                        "DEGREE_MISMATCH",
                        f"({a},{b}) -> {t}: degree {p.degree(t)} != {da}+{db}",
                        (a, b, t),
                    )
                )
            if p.element(t).character != want_char:
                v.append(
                    Violation(
                        "CHARACTER_MISMATCH",
                        f"({a},{b}) -> {t}: character {p.element(t).character} != {want_char}",
                        (a, b, t),
                    )
                )
        if a == b and da % 2 == 1 and terms:
            v.append(
                Violation(
                    "COMMUTATIVITY",
                    f"odd square ({a},{a}) must vanish in characteristic 0",
                    (a,),
                )
            )

    if structural:
        return ValidationReport(tuple(v))

    ids = [e.ident for e in p.basis]
    for a in ids:
        for b in ids:
            for c in ids:
                left = p.multiply_vectors(p.product(a, b), {c: Fraction(1)})
                right = p.multiply_vectors({a: Fraction(1)}, p.product(b, c))
                if left != right:
                    v.append(
                        Violation(
                            "ASSOCIATIVITY",
                            f"({a}*{b})*{c} != {a}*({b}*{c})",
                            (a, b, c),
                        )
                    )
    return ValidationReport(tuple(v))


@dataclass(frozen=True)
class ReducedCoproduct:
    """Transpose of the positive-degree product table.

    terms[c] lists (a, b, coeff) over ordered pairs of positive-degree basis
    ids with coeff(a*b, c) nonzero.  Counit terms never appear.
    """

    presentation: AlgebraPresentation
    terms: dict[str, tuple[tuple[str, str, Fraction], ...]] = field(compare=False)

    def on(self, ident: str) -> tuple[tuple[str, str, Fraction], ...]:
        return self.terms.get(ident, ())


def dualize(p: AlgebraPresentation) -> ReducedCoproduct:
    """Dual reduced coproduct on positive-degree dual basis elements."""
    report = validate_algebra(p)
    if not report.ok:
        raise InvalidInputError(f"presentation invalid:\n{report}")
    pos = p.positive_ids()
    terms: dict[str, list[tuple[str, str, Fraction]]] = {}
    for a in pos:
        for b in pos:
            for t, c in p.product(a, b).items():
                terms.setdefault(t, []).append((a, b, c))
    ordered = {}
    for t, lst in terms.items():
        lst.sort(key=lambda abc: (p.index[abc[0]], p.index[abc[1]]))
        ordered[t] = tuple(lst)
    return ReducedCoproduct(p, ordered)
