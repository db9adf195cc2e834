"""Independent reference computations used to freeze expected test values.

Everything in here is deliberately naive and self-contained: dense Gaussian
elimination, direct Moebius sums, and exhaustive enumeration of bracketings
with a hand-rolled associative expansion.  Nothing imports the package's own
linear algebra or Lie machinery, so agreement is meaningful.
"""

from fractions import Fraction
from itertools import product
from math import factorial


def gauss_rank(rows):
    """Rank by textbook elimination with first-nonzero pivoting."""
    rows = [[Fraction(x) for x in row] for row in rows]
    rank = 0
    cols = len(rows[0]) if rows else 0
    col = 0
    while rank < len(rows) and col < cols:
        piv = None
        for i in range(rank, len(rows)):
            if rows[i][col] != 0:
                piv = i
                break
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pv = rows[rank][col]
        for i in range(rank + 1, len(rows)):
            if rows[i][col] != 0:
                f = rows[i][col] / pv
                for j in range(col, cols):
                    rows[i][j] -= f * rows[rank][j]
        rank += 1
        col += 1
    return rank


def mobius(n):
    if n == 1:
        return 1
    result = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            result = -result
        d += 1
    if n > 1:
        result = -result
    return result


def divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def multinomial(counts):
    total = sum(counts)
    out = factorial(total)
    for c in counts:
        out //= factorial(c)
    return out


def lyndon_count_multidegree(alpha):
    """Number of Lyndon words containing alpha[i] copies of letter i."""
    alpha = tuple(alpha)
    n = sum(alpha)
    if n == 0:
        return 0
    g = 0
    for a in alpha:
        g = gcd(g, a)
    total = 0
    for d in divisors(g):
        total += mobius(d) * multinomial(tuple(a // d for a in alpha))
    return total // n


def gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def super_witt_slot_dims(reduced_degrees, max_r, max_w, characters=None, lattice_add=None):
    """Slot dimensions (r, w, char) -> dim from the Lyndon count formula.

    Counts Lyndon words per letter multidegree, then adds one square for every
    odd-parity Lyndon word at doubled degree and weight.
    """
    k = len(reduced_degrees)
    if characters is None:
        characters = [()] * k

        def lattice_add(a, b):
            return ()

    dims = {}
    lyndon_by_profile = {}
    for w in range(1, max_w + 1):
        for alpha in _compositions(w, k):
            cnt = lyndon_count_multidegree(alpha)
            if cnt == 0:
                continue
            r = sum(a * d for a, d in zip(alpha, reduced_degrees))
            char = ()
            if characters is not None:
                char = _char_multiple(characters, alpha, lattice_add)
            if r <= max_r:
                key = (r, w, char)
                dims[key] = dims.get(key, 0) + cnt
            lyndon_by_profile[(r, w, char)] = lyndon_by_profile.get((r, w, char), 0) + cnt
    for (r, w, char), cnt in lyndon_by_profile.items():
        if r % 2 == 1 and 2 * r <= max_r and 2 * w <= max_w:
            char2 = lattice_add(char, char)
            key = (2 * r, 2 * w, char2)
            dims[key] = dims.get(key, 0) + cnt
    return dims


def _char_multiple(characters, alpha, lattice_add):
    out = None
    for char, count in zip(characters, alpha):
        for _ in range(count):
            out = char if out is None else lattice_add(out, char)
    if out is None:
        ln = len(characters[0]) if characters else 0
        out = lattice_add(tuple([0] * ln), tuple([0] * ln)) if characters else ()
    return out


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


# ---------------------------------------------------------------------------
# brute-force free Lie superalgebra spans


def embed_bracketing(tree, parities):
    """Expand a bracketing tree into the free associative algebra.

    tree: either an int (letter) or a pair (left, right).  Returns
    ({word: coeff}, parity).
    """
    if isinstance(tree, int):
        return {(tree,): Fraction(1)}, parities[tree] % 2
    lhs, pl = embed_bracketing(tree[0], parities)
    rhs, pr = embed_bracketing(tree[1], parities)
    sign = -1 if (pl and pr) else 1
    out = {}
    for wa, ca in lhs.items():
        for wb, cb in rhs.items():
            out[wa + wb] = out.get(wa + wb, Fraction(0)) + ca * cb
            out[wb + wa] = out.get(wb + wa, Fraction(0)) - sign * ca * cb
    return {k: v for k, v in out.items() if v}, (pl + pr) % 2


def all_bracketings(seq):
    if len(seq) == 1:
        yield seq[0]
        return
    for cut in range(1, len(seq)):
        for lt in all_bracketings(seq[:cut]):
            for rt in all_bracketings(seq[cut:]):
                yield (lt, rt)


def brute_lie_slot_rank(reduced_degrees, r, w, char=None, characters=None, lattice_add=None):
    """Rank of the span of every bracketing of every length-w letter sequence
    whose degrees sum to r (and character matches, when given).

    Rows are absorbed into a sparse echelon incrementally so large bracketing
    counts stay cheap: each new vector is reduced against the pivots found so
    far and either dies or contributes one more pivot.
    """
    k = len(reduced_degrees)
    echelon = {}  # leading word -> {word: coeff} with leading coeff 1
    for seq in product(range(k), repeat=w):
        if sum(reduced_degrees[i] for i in seq) != r:
            continue
        if char is not None:
            c = None
            for i in seq:
                c = characters[i] if c is None else lattice_add(c, characters[i])
            if c != char:
                continue
        for tree in all_bracketings(seq):
            vec, _ = embed_bracketing(tree, reduced_degrees)
            while vec:
                lead = min(vec)
                pivot = echelon.get(lead)
                if pivot is None:
                    lc = vec[lead]
                    echelon[lead] = {word: coeff / lc for word, coeff in vec.items()}
                    break
                f = vec[lead]
                for word, coeff in pivot.items():
                    val = vec.get(word, Fraction(0)) - f * coeff
                    if val:
                        vec[word] = val
                    else:
                        vec.pop(word, None)
    return len(echelon)
