"""Denormalization of cochain complexes into cosimplicial vector spaces.

A cochain complex C (degrees 0..N, d raising degree) denormalizes to the
cosimplicial vector space

    D(C)^n = direct sum over order-preserving surjections eta: [n] ->> [k]
             of a copy of C^k,

with summands ordered lexicographically by eta.  A monotone map
alpha: [m] -> [n] acts by the epi-mono rule: the component into the target
summand eta comes from the summand indexed by the epi part of eta o alpha,
and is the identity when the mono part is the identity, (-1)^k d when the
mono part is the top-missing inclusion [k-1] -> [k], and zero otherwise.
The sign is forced by requiring normalize(denormalize(c)) = c on the nose.

normalize recovers the complex as the joint kernel of the codegeneracies
with the alternating sum of cofaces as differential.

For a commutative differential graded algebra the levelwise product is the
transpose of the Eilenberg-Zilber coproduct on the dual simplicial side:
faces and degeneracies of K = D^T are the transposed cofaces/codegeneracies,
the dual multiplication gives a chain coproduct, and the shuffle map turns
it into a simplicial coproduct on K; transposing back yields a product on
D(A) for which every structure map is an algebra morphism and each level is
unital, associative and commutative.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .errors import (
    DSquaredNonzeroError,
    InvalidInputError,
    NotACdgaError,
    SimplicialIdentityError,
)
from .exactlin import RationalMatrix, SubspaceBasis, coordinates_in_span, kernel_basis


@dataclass(frozen=True)
class CochainComplex:
    """dims[i] is the dimension in degree i; differentials[i] maps i to i+1."""

    dims: tuple[int, ...]
    differentials: tuple[RationalMatrix, ...] = ()

    def __post_init__(self):
        if any(d < 0 for d in self.dims):
            raise InvalidInputError("negative dimension")
        if len(self.differentials) > max(len(self.dims) - 1, 0):
            raise InvalidInputError("more differentials than adjacent degree pairs")
        for i, m in enumerate(self.differentials):
            if (m.rows, m.cols) != (self.dim(i + 1), self.dim(i)):
                raise InvalidInputError(f"differential {i} has the wrong shape")
        for i in range(len(self.differentials) - 1):
            if not self.differentials[i + 1].matmul(self.differentials[i]).is_zero():
                raise DSquaredNonzeroError(
                    f"d squared is nonzero out of degree {i}", witness=i
                )

    @property
    def top_degree(self) -> int:
        return len(self.dims) - 1

    def dim(self, i: int) -> int:
        if 0 <= i < len(self.dims):
            return self.dims[i]
        return 0

    def d(self, i: int) -> RationalMatrix:
        if 0 <= i < len(self.differentials):
            return self.differentials[i]
        return RationalMatrix.zero(self.dim(i + 1), self.dim(i))


@lru_cache(maxsize=None)
def surjections(n: int, k: int) -> tuple[tuple[int, ...], ...]:
    """Order-preserving surjections [n] ->> [k] as value tuples, lex order."""
    if k > n or k < 0 or n < 0:
        return ()
    out = []
    # nondecreasing onto sequences: choose the k positions (of n steps) that rise
    for rises in combinations(range(n), k):
        seq = [0] * (n + 1)
        level = 0
        rise_set = set(rises)
        for t in range(n):
            if t in rise_set:
                level += 1
            seq[t + 1] = level
        out.append(tuple(seq))
    out.sort()
    return tuple(out)


@lru_cache(maxsize=None)
def _layout(dims: tuple[int, ...], n: int):
    """Summand layout of level n: ordered (eta, k, offset) plus lookup."""
    entries = []
    for k in range(0, min(n, len(dims) - 1) + 1):
        if dims[k] == 0:
            continue
        for eta in surjections(n, k):
            entries.append((eta, k))
    entries.sort(key=lambda e: e[0])
    placed = []
    lookup = {}
    at = 0
    for eta, k in entries:
        placed.append((eta, k, at))
        lookup[eta] = (k, at)
        at += dims[k]
    return at, tuple(placed), lookup


def _epi_mono(phi: tuple[int, ...]):
    image = sorted(set(phi))
    rank = {v: i for i, v in enumerate(image)}
    return tuple(rank[v] for v in phi), tuple(image)


def structure_matrix(
    c: CochainComplex, alpha: tuple[int, ...], src_level: int, tgt_level: int
) -> RationalMatrix:
    """Matrix of D(alpha): D(c)^src -> D(c)^tgt for monotone alpha: [src] -> [tgt]."""
    if len(alpha) != src_level + 1:
        raise ValueError("alpha has the wrong arity")
    if any(alpha[i] > alpha[i + 1] for i in range(src_level)):
        raise ValueError("alpha is not order-preserving")
    if alpha and not (0 <= alpha[0] and alpha[-1] <= tgt_level):
        raise ValueError("alpha is out of range")
    src_dim, _, src_lookup = _layout(c.dims, src_level)
    tgt_dim, tgt_entries, _ = _layout(c.dims, tgt_level)
    entries = {}
    for eta, k, row_off in tgt_entries:
        phi = tuple(eta[a] for a in alpha)
        epi, image = _epi_mono(phi)
        if image == tuple(range(k + 1)):
            hit = src_lookup.get(epi)
            if hit is None:
                continue
            _, col_off = hit
            for t in range(c.dim(k)):
                entries[(row_off + t, col_off + t)] = Fraction(1)
        elif image == tuple(range(k)):
            hit = src_lookup.get(epi)
            if hit is None:
                continue
            _, col_off = hit
            sign = -1 if k % 2 else 1
            for (i, j), val in c.d(k - 1).entries.items():
                entries[(row_off + i, col_off + j)] = sign * val
    return RationalMatrix(tgt_dim, src_dim, entries)


def _delta(i: int, n: int) -> tuple[int, ...]:
    """The injection [n] -> [n+1] missing i."""
    return tuple(t if t < i else t + 1 for t in range(n + 1))


def _sigma(i: int, n: int) -> tuple[int, ...]:
    """The surjection [n] -> [n-1] repeating i."""
    return tuple(t if t <= i else t - 1 for t in range(n + 1))


@dataclass
class CosimplicialVS:
    """Levels 0..level_count with coface and codegeneracy matrices.

    cofaces[(n, i)]: level n -> n+1 for 0 <= i <= n+1;
    codegeneracies[(n, i)]: level n -> n-1 for 0 <= i <= n-1.
    """

    dims: tuple[int, ...]
    cofaces: dict[tuple[int, int], RationalMatrix]
    codegeneracies: dict[tuple[int, int], RationalMatrix]

    @property
    def level_count(self) -> int:
        return len(self.dims) - 1

    def dim(self, n: int) -> int:
        return self.dims[n] if 0 <= n < len(self.dims) else 0

    def coface(self, n: int, i: int) -> RationalMatrix:
        return self.cofaces[(n, i)]

    def codegeneracy(self, n: int, i: int) -> RationalMatrix:
        return self.codegeneracies[(n, i)]

    def __post_init__(self):
        for (n, i), m in self.cofaces.items():
            if (m.rows, m.cols) != (self.dim(n + 1), self.dim(n)):
                raise InvalidInputError(f"coface d^{i} at level {n}: wrong shape")
        for (n, i), m in self.codegeneracies.items():
            if (m.rows, m.cols) != (self.dim(n - 1), self.dim(n)):
                raise InvalidInputError(f"codegeneracy s^{i} at level {n}: wrong shape")


def denormalize(c: CochainComplex, m: int) -> CosimplicialVS:
    """Cosimplicial vector space with levels 0..m realizing the complex."""
    if m < 0:
        raise InvalidInputError("truncation level must be >= 0")
    dims = tuple(_layout(c.dims, n)[0] for n in range(m + 1))
    cofaces = {}
    codegens = {}
    for n in range(m):
        for i in range(n + 2):
            cofaces[(n, i)] = structure_matrix(c, _delta(i, n), n, n + 1)
    for n in range(1, m + 1):
        for i in range(n):
            codegens[(n, i)] = structure_matrix(c, _sigma(i, n), n, n - 1)
    return CosimplicialVS(dims, cofaces, codegens)


def check_cosimplicial_identities(v: CosimplicialVS) -> list[str]:
    """All violated identities on the stored levels, empty when consistent."""
    bad = []
    m = v.level_count

    def eq(a, b, label):
        if a.entries != b.entries or (a.rows, a.cols) != (b.rows, b.cols):
            bad.append(label)

    for n in range(m - 1):
        for i in range(n + 2):
            for j in range(i + 1, n + 3):
                # d^j d^i = d^i d^(j-1)
                lhs = v.coface(n + 1, j).matmul(v.coface(n, i))
                rhs = v.coface(n + 1, i).matmul(v.coface(n, j - 1))
                eq(lhs, rhs, f"d^{j} d^{i} != d^{i} d^{j-1} at level {n}")
    for n in range(2, m + 1):
        for i in range(n - 1):
            for j in range(i, n - 1):
                # s^j s^i = s^i s^(j+1)
                lhs = v.codegeneracy(n - 1, j).matmul(v.codegeneracy(n, i))
                rhs = v.codegeneracy(n - 1, i).matmul(v.codegeneracy(n, j + 1))
                eq(lhs, rhs, f"s^{j} s^{i} != s^{i} s^{j+1} at level {n}")
    for n in range(m):
        for j in range(n + 1):
            for i in range(n + 2):
                lhs = v.codegeneracy(n + 1, j).matmul(v.coface(n, i))
                if i < j:
                    rhs = v.coface(n - 1, i).matmul(v.codegeneracy(n, j - 1))
                    eq(lhs, rhs, f"s^{j} d^{i} != d^{i} s^{j-1} at level {n}")
                elif i in (j, j + 1):
                    rhs = RationalMatrix.identity(v.dim(n))
                    eq(lhs, rhs, f"s^{j} d^{i} != id at level {n}")
                else:
                    rhs = v.coface(n - 1, i - 1).matmul(v.codegeneracy(n, j))
                    eq(lhs, rhs, f"s^{j} d^{i} != d^{i-1} s^{j} at level {n}")
    return bad


def normalize(v: CosimplicialVS) -> CochainComplex:
    """Joint kernel of codegeneracies with the alternating coface sum.

    Raises SimplicialIdentityError naming the first violated identity when
    the input is not cosimplicial.
    """
    bad = check_cosimplicial_identities(v)
    if bad:
        raise SimplicialIdentityError(bad[0])
    m = v.level_count
    bases: list[SubspaceBasis] = []
    for n in range(m + 1):
        if n == 0:
            bases.append(SubspaceBasis.full(v.dim(0)))
            continue
        stacked = {}
        row_at = 0
        for i in range(n):
            s = v.codegeneracy(n, i)
            for (r, cidx), val in s.entries.items():
                stacked[(row_at + r, cidx)] = val
            row_at += s.rows
        bases.append(kernel_basis(RationalMatrix(row_at, v.dim(n), stacked)))
    dims = tuple(b.dim for b in bases)
    diffs = []
    for n in range(m):
        cols = {}
        total = RationalMatrix.zero(v.dim(n + 1), v.dim(n))
        for i in range(n + 2):
            sign = -1 if i % 2 else 1
            entries = dict(total.entries)
            for key, val in v.coface(n, i).entries.items():
                acc = entries.get(key, Fraction(0)) + sign * val
                if acc:
                    entries[key] = acc
                else:
                    entries.pop(key, None)
            total = RationalMatrix(v.dim(n + 1), v.dim(n), entries)
        span = [list(vec) for vec in bases[n + 1].vectors]
        for j, vec in enumerate(bases[n].vectors):
            image = total.apply(vec)
            coords = coordinates_in_span(span, image, v.dim(n + 1))
            for i, val in enumerate(coords):
                if val:
                    cols[(i, j)] = val
        diffs.append(RationalMatrix(dims[n + 1], dims[n], cols))
    return CochainComplex(dims, tuple(diffs))


def complexes_agree(a: CochainComplex, b: CochainComplex, up_to: int) -> bool:
    for i in range(up_to + 1):
        if a.dim(i) != b.dim(i):
            return False
    for i in range(up_to):
        if a.d(i).entries != b.d(i).entries:
            return False
    return True


# ---------------------------------------------------------------------------
# algebras


@dataclass(frozen=True)
class CochainAlgebra:
    """CDGA data: a complex, products per degree pair, and a unit in degree 0.

    products[(p, q)] maps basis pairs to degree p+q, columns indexed by
    i * dim(q) + j; missing pairs mean the zero product.
    """

    complex: CochainComplex
    products: dict[tuple[int, int], RationalMatrix]
    unit: tuple[Fraction, ...]

    def product(self, p: int, q: int) -> RationalMatrix:
        m = self.products.get((p, q))
        if m is not None:
            return m
        c = self.complex
        return RationalMatrix.zero(c.dim(p + q), c.dim(p) * c.dim(q))

    def multiply(self, p: int, x, q: int, y):
        cols = self.complex.dim(q)
        vec = [Fraction(0)] * (self.complex.dim(p) * cols)
        for i, a in enumerate(x):
            if a:
                for j, b in enumerate(y):
                    if b:
                        vec[i * cols + j] = Fraction(a) * Fraction(b)
        return self.product(p, q).apply(vec)


def kron(a: RationalMatrix, b: RationalMatrix) -> RationalMatrix:
    entries = {}
    for (i, j), x in a.entries.items():
        for (k, l), y in b.entries.items():
            entries[(i * b.rows + k, j * b.cols + l)] = x * y
    return RationalMatrix(a.rows * b.rows, a.cols * b.cols, entries)


def validate_cdga(a: CochainAlgebra) -> None:
    c = a.complex
    if c.dim(0) == 0:
        raise NotACdgaError("no degree-0 part to host a unit")
    if len(a.unit) != c.dim(0):
        raise NotACdgaError("unit vector has the wrong length")
    if any(x for x in c.d(0).apply(a.unit)):
        raise NotACdgaError("unit is not a cocycle")
    top = c.top_degree
    for p in range(top + 1):
        for q in range(top + 1):
            m = a.product(p, q)
            if (m.rows, m.cols) != (c.dim(p + q), c.dim(p) * c.dim(q)):
                raise NotACdgaError(f"product ({p},{q}) has the wrong shape")
    # unit acts as identity
    for p in range(top + 1):
        for j in range(c.dim(p)):
            basis = [Fraction(1 if t == j else 0) for t in range(c.dim(p))]
            if a.multiply(0, a.unit, p, basis) != tuple(basis):
                raise NotACdgaError(f"unit fails on the left in degree {p}")
            if a.multiply(p, basis, 0, a.unit) != tuple(basis):
                raise NotACdgaError(f"unit fails on the right in degree {p}")
    for p in range(top + 1):
        for q in range(top + 1 - p):
            lhs = c.d(p + q).matmul(a.product(p, q))
            rhs = a.product(p + 1, q).matmul(kron(c.d(p), RationalMatrix.identity(c.dim(q))))
            sgn = -1 if p % 2 else 1
            second = a.product(p, q + 1).matmul(kron(RationalMatrix.identity(c.dim(p)), c.d(q)))
            for key in set(lhs.entries) | set(rhs.entries) | set(second.entries):
                val = (
                    lhs.entries.get(key, Fraction(0))
                    - rhs.entries.get(key, Fraction(0))
                    - sgn * second.entries.get(key, Fraction(0))
                )
                if val:
                    raise NotACdgaError(f"Leibniz fails on degrees ({p},{q})")
    for p in range(top + 1):
        for q in range(top + 1 - p):
            mpq, mqp = a.product(p, q), a.product(q, p)
            sgn = -1 if (p % 2 and q % 2) else 1
            for i in range(c.dim(p)):
                for j in range(c.dim(q)):
                    col_pq = {r: v for (r, cc), v in mpq.entries.items() if cc == i * c.dim(q) + j}
                    col_qp = {r: v for (r, cc), v in mqp.entries.items() if cc == j * c.dim(p) + i}
                    if col_qp != {r: sgn * v for r, v in col_pq.items()}:
                        raise NotACdgaError(f"commutativity fails on degrees ({p},{q})")
    for p in range(top + 1):
        for q in range(top + 1 - p):
            for s in range(top + 1 - p - q):
                for i in range(c.dim(p)):
                    ei = [Fraction(1 if t == i else 0) for t in range(c.dim(p))]
                    for j in range(c.dim(q)):
                        ej = [Fraction(1 if t == j else 0) for t in range(c.dim(q))]
                        ij = a.multiply(p, ei, q, ej)
                        for t in range(c.dim(s)):
                            et = [Fraction(1 if u == t else 0) for u in range(c.dim(s))]
                            left = a.multiply(p + q, ij, s, et)
                            right = a.multiply(p, ei, q + s, a.multiply(q, ej, s, et))
                            if left != right:
                                raise NotACdgaError(
                                    f"associativity fails on degrees ({p},{q},{s})"
                                )


@dataclass
class CosimplicialAlgebra:
    """A cosimplicial vector space with a product and unit at every level."""

    vs: CosimplicialVS
    level_products: tuple[RationalMatrix, ...]  # level n: D^n (x) D^n -> D^n
    level_units: tuple[tuple[Fraction, ...], ...]

    def multiply(self, n: int, x, y):
        d = self.vs.dim(n)
        vec = [Fraction(0)] * (d * d)
        for i, a in enumerate(x):
            if a:
                for j, b in enumerate(y):
                    if b:
                        vec[i * d + j] = Fraction(a) * Fraction(b)
        return self.level_products[n].apply(vec)


def _shuffles(p: int, q: int):
    """(p,q)-shuffles as (mu, nu, sign) with mu, nu ascending index tuples."""
    out = []
    for mu in combinations(range(p + q), p):
        nu = tuple(t for t in range(p + q) if t not in mu)
        inv = sum(1 for a in mu for b in nu if a > b)
        out.append((mu, nu, -1 if inv % 2 else 1))
    return out


def _identity_inclusion(c: CochainComplex, k: int) -> RationalMatrix:
    """C^k into level k of D as the identity-surjection summand."""
    total, _, lookup = _layout(c.dims, k)
    _, off = lookup[tuple(range(k + 1))]
    return RationalMatrix(
        total, c.dim(k), {(off + t, t): Fraction(1) for t in range(c.dim(k))}
    )


def denormalize_algebra(a: CochainAlgebra, m: int) -> CosimplicialAlgebra:
    """Cosimplicial algebra on D(A) through level m via shuffle transposition."""
    validate_cdga(a)
    c = a.complex
    vs = denormalize(c, m)

    def degeneracy(t: int, j: int) -> RationalMatrix:
        # simplicial degeneracy on the dual side: K_t -> K_(t+1)
        return vs.codegeneracy(t + 1, j).transpose()

    # f_k : dual of C^k -> K_k (x) K_k, the shuffle coproduct payload
    payload: list[RationalMatrix] = []
    for k in range(m + 1):
        dk = _layout(c.dims, k)[0]
        total = {}
        for p in range(k + 1):
            q = k - p
            if c.dim(p) == 0 or c.dim(q) == 0:
                continue
            delta_pq = a.product(p, q).transpose()  # dual C_k -> C_p (x) C_q
            if delta_pq.is_zero():
                continue
            for mu, nu, sign in _shuffles(p, q):
                lhs = _identity_inclusion(c, p)
                lvl = p
                for j in nu:
                    lhs = degeneracy(lvl, j).matmul(lhs)
                    lvl += 1
                rhs = _identity_inclusion(c, q)
                lvl = q
                for j in mu:
                    rhs = degeneracy(lvl, j).matmul(rhs)
                    lvl += 1
                term = kron(lhs, rhs).matmul(delta_pq)
                for key, val in term.entries.items():
                    acc = total.get(key, Fraction(0)) + sign * val
                    if acc:
                        total[key] = acc
                    else:
                        total.pop(key, None)
        payload.append(RationalMatrix(dk * dk, c.dim(k), total))

    products = []
    units = []
    for n in range(m + 1):
        dn, entries_n, _ = _layout(c.dims, n)
        psi = {}
        for eta, k, off in entries_n:
            # K(eta) = transpose of D(eta): level k of K into level n
            k_eta = structure_matrix(c, eta, n, k).transpose()
            block = kron(k_eta, k_eta).matmul(payload[k])
            for (i, j), val in block.entries.items():
                psi[(i, off + j)] = val
        psi_matrix = RationalMatrix(dn * dn, dn, psi)
        products.append(psi_matrix.transpose())
        unit_vec = [Fraction(0)] * dn
        _, _, lookup = _layout(c.dims, n)
        _, u_off = lookup[tuple([0] * (n + 1))]
        for t, val in enumerate(a.unit):
            unit_vec[u_off + t] = Fraction(val)
        units.append(tuple(unit_vec))
    return CosimplicialAlgebra(vs, tuple(products), tuple(units))


def levelwise_algebra_violations(ca: CosimplicialAlgebra) -> list[str]:
    """Exhaustive unit, commutativity and associativity checks per level."""
    bad = []
    for n in range(ca.vs.level_count + 1):
        d = ca.vs.dim(n)
        basis = [tuple(Fraction(1 if t == i else 0) for t in range(d)) for i in range(d)]
        u = ca.level_units[n]
        for i, e in enumerate(basis):
            if ca.multiply(n, u, e) != e or ca.multiply(n, e, u) != e:
                bad.append(f"unit fails at level {n} on basis {i}")
        for i, x in enumerate(basis):
            for j in range(i, d):
                y = basis[j]
                if ca.multiply(n, x, y) != ca.multiply(n, y, x):
                    bad.append(f"commutativity fails at level {n} on ({i},{j})")
        for i, x in enumerate(basis):
            for j, y in enumerate(basis):
                xy = ca.multiply(n, x, y)
                for t, z in enumerate(basis):
                    if ca.multiply(n, xy, z) != ca.multiply(n, x, ca.multiply(n, y, z)):
                        bad.append(f"associativity fails at level {n} on ({i},{j},{t})")
    return bad


def structure_map_violations(ca: CosimplicialAlgebra) -> list[str]:
    """Cofaces and codegeneracies must be unital algebra morphisms."""
    bad = []
    vs = ca.vs

    def check(label, n_src, n_tgt, matrix):
        d = vs.dim(n_src)
        basis = [tuple(Fraction(1 if t == i else 0) for t in range(d)) for i in range(d)]
        if tuple(matrix.apply(ca.level_units[n_src])) != ca.level_units[n_tgt]:
            bad.append(f"{label} does not preserve the unit")
        for i, x in enumerate(basis):
            for j in range(i, d):
                y = basis[j]
                lhs = matrix.apply(ca.multiply(n_src, x, y))
                rhs = ca.multiply(n_tgt, matrix.apply(x), matrix.apply(y))
                if tuple(lhs) != tuple(rhs):
                    bad.append(f"{label} is not multiplicative on ({i},{j})")
    for (n, i), mat in sorted(vs.cofaces.items()):
        check(f"coface d^{i} at level {n}", n, n + 1, mat)
    for (n, i), mat in sorted(vs.codegeneracies.items()):
        check(f"codegeneracy s^{i} at level {n}", n, n - 1, mat)
    return bad


def algebra_from_presentation(p) -> CochainAlgebra:
    """Zero-differential CDGA on the basis of a validated presentation."""
    from .graded_core import validate_algebra

    report = validate_algebra(p)
    if not report.ok:
        raise InvalidInputError(f"presentation invalid:\n{report}")
    top = max(e.degree for e in p.basis)
    by_degree: dict[int, list[str]] = {d: [] for d in range(top + 1)}
    for e in p.basis:
        by_degree[e.degree].append(e.ident)
    dims = tuple(len(by_degree[d]) for d in range(top + 1))
    slot = {ident: t for d in range(top + 1) for t, ident in enumerate(by_degree[d])}
    products = {}
    for dp in range(top + 1):
        for dq in range(top + 1 - dp):
            entries = {}
            for i, a in enumerate(by_degree[dp]):
                for j, b in enumerate(by_degree[dq]):
                    for t, coeff in p.product(a, b).items():
                        entries[(slot[t], i * dims[dq] + j)] = coeff
            if entries:
                products[(dp, dq)] = RationalMatrix(dims[dp + dq], dims[dp] * dims[dq], entries)
    return CochainAlgebra(CochainComplex(dims), products, (Fraction(1),))


# ---------------------------------------------------------------------------
# random complexes for fuzzing


def random_cochain_complex(rng, max_degree: int = 4, max_dim: int = 4) -> CochainComplex:
    """A random valid complex: a matching differential conjugated generically."""
    n_deg = rng.randint(1, max_degree + 1)
    dims = [rng.randint(0, max_dim) for _ in range(n_deg)]
    rows = {
        i: [[Fraction(0)] * dims[i] for _ in range(dims[i + 1])]
        for i in range(n_deg - 1)
    }
    used_src: dict[int, set] = {i: set() for i in range(n_deg)}
    used_tgt: dict[int, set] = {i: set() for i in range(n_deg)}
    for i in range(n_deg - 1):
        for s in range(dims[i]):
            if s in used_tgt[i] or rng.random() < 0.4:
                continue
            free = [t for t in range(dims[i + 1]) if t not in used_src[i + 1]]
            if not free:
                continue
            t = rng.choice(free)
            used_src[i].add(s)
            used_tgt[i + 1].add(t)
            rows[i][t][s] = Fraction(rng.choice([1, -1, 2, -2, 3]), rng.choice([1, 2]))

    def unipotent(k):
        m = [[Fraction(1 if a == b else 0) for b in range(k)] for a in range(k)]
        for a in range(k):
            for b in range(a + 1, k):
                if rng.random() < 0.4:
                    m[a][b] = Fraction(rng.choice([1, -1, 2]), rng.choice([1, 2]))
        return m

    def inverse(m):
        k = len(m)
        aug = [list(row) + [Fraction(1 if i == j else 0) for j in range(k)] for i, row in enumerate(m)]
        for col in range(k):
            piv = next(i for i in range(col, k) if aug[i][col] != 0)
            aug[col], aug[piv] = aug[piv], aug[col]
            pv = aug[col][col]
            aug[col] = [x / pv for x in aug[col]]
            for i in range(k):
                if i != col and aug[i][col]:
                    f = aug[i][col]
                    aug[i] = [x - f * y for x, y in zip(aug[i], aug[col])]
        return [row[k:] for row in aug]

    basis_change = {i: unipotent(dims[i]) for i in range(n_deg)}
    diffs = []
    for i in range(n_deg - 1):
        if dims[i] == 0 or dims[i + 1] == 0:
            diffs.append(RationalMatrix.zero(dims[i + 1], dims[i]))
            continue
        p_next, p_inv = basis_change[i + 1], inverse(basis_change[i])
        prod = [
            [
                sum(
                    p_next[r][t] * rows[i][t][s2] * p_inv[s2][cidx]
                    for t in range(dims[i + 1])
                    for s2 in range(dims[i])
                )
                for cidx in range(dims[i])
            ]
            for r in range(dims[i + 1])
        ]
        diffs.append(RationalMatrix.from_rows(prod))
    return CochainComplex(tuple(dims), tuple(diffs))
