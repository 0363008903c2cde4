"""Independent brute-force validators.

Nothing here shares code paths with the Groebner engine or the geometric
tests: homomorphism existence is decided by exhaustive enumeration over a
small field, ideal membership by a Macaulay linear system, and filtration
dimensions by the dimension-subgroup (Jennings) formula on the group side.
Each oracle either answers exactly or refuses with BudgetExceeded.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceeded, CharMismatch
from .field import FieldSpec, field_ops
from .filtration import FilteredAlgebra
from .groups import FinitePresentation, FiniteGroup, int_log
from .groebner import IdealBasis
from .poly import Polynomial, mono_degree

DEFAULT_SEARCH_BUDGET = 2**24


@dataclass(frozen=True)
class HomSearchSpec:
    """Exhaustive search space for unital algebra homomorphisms into a
    truncated augmentation algebra extended to F_q."""

    target: FilteredAlgebra
    q: FieldSpec
    source_presentation: FinitePresentation | None = None
    source_algebra: FilteredAlgebra | None = None
    surjective: bool = True
    budget: int = DEFAULT_SEARCH_BUDGET

    def __post_init__(self):
        if (self.source_presentation is None) == (self.source_algebra is None):
            raise ValueError("exactly one of presentation/algebra source required")
        if self.q.p != self.target.p:
            raise CharMismatch("extension field has wrong characteristic")


@dataclass(frozen=True)
class HomSearchResult:
    count: int
    witness: tuple[tuple[int, ...], ...] | None


class _BatchAlgebra:
    """Vectorized arithmetic for Gamma tensored up to F_q: vectors are int
    arrays of shape (batch, dim) holding field-element codes."""

    def __init__(self, algebra: FilteredAlgebra, q: FieldSpec):
        self.algebra = algebra
        self.dim = algebra.dim
        ops = field_ops(q)
        n = q.q
        self.qsize = n
        add = np.zeros((n, n), dtype=np.int64)
        mul = np.zeros((n, n), dtype=np.int64)
        for x in range(n):
            for y in range(n):
                add[x, y] = ops.add(x, y)
                mul[x, y] = ops.mul(x, y)
        self.add = add
        self.mul = mul
        neg = np.zeros(n, dtype=np.int64)
        for x in range(n):
            neg[x] = ops.neg(x)
        self.neg_table = neg
        self.embed = np.array([ops.embed_prime(c) for c in range(algebra.p)])

    def zeros(self, batch: int) -> np.ndarray:
        return np.zeros((batch, self.dim), dtype=np.int64)

    def vadd(self, u, v):
        return self.add[u, v]

    def vneg(self, u):
        return self.neg_table[u]

    def vmul(self, u, v):
        out = self.zeros(u.shape[0])
        for (i, j), entry in self.algebra.structure_constants.items():
            prod = self.mul[u[:, i], v[:, j]]
            for k, c in entry:
                term = self.mul[prod, int(self.embed[c % self.algebra.p])]
                out[:, k] = self.add[out[:, k], term]
        return out

    def unit_mul(self, u, v):
        return self.vadd(self.vadd(u, v), self.vmul(u, v))

    def unit_inv(self, u):
        # geometric series for (1+u)^-1 - 1 in a nilpotent algebra
        neg_u = self.vneg(u)
        acc = neg_u.copy()
        power = neg_u.copy()
        for _ in range(self.dim):
            power = self.vmul(power, neg_u)
            if not power.any():
                break
            acc = self.vadd(acc, power)
        return acc

    def unit_pow(self, u, e: int):
        if e < 0:
            return self.unit_pow(self.unit_inv(u), -e)
        out = self.zeros(u.shape[0])
        for _ in range(e):
            out = self.unit_mul(out, u)
        return out


def _assignment_batch(indices: np.ndarray, q: int, cells: int) -> np.ndarray:
    """Decode assignment indices into (batch, cells) digit arrays; the digit
    for cell 0 is the most significant, so index order is lexicographic."""
    out = np.empty((indices.size, cells), dtype=np.int64)
    rest = indices.copy()
    for cell in range(cells - 1, -1, -1):
        out[:, cell] = rest % q
        rest //= q
    return out


def _rank_over_field(rows: list[list[int]], q: FieldSpec) -> int:
    from .linalg import echelonize

    if not rows:
        return 0
    return echelonize(np.array(rows, dtype=np.int64), q)[1]


def enumerate_surjections(spec: HomSearchSpec, batch_size: int = 4096) -> HomSearchResult:
    """Exhaustively count algebra homomorphisms (surjective if required)
    from the source into target tensored to F_q; returns the exact count
    and the lexicographically first witness coefficient matrix."""
    gam = spec.target
    q = spec.q.q
    if spec.source_presentation is not None:
        r = len(spec.source_presentation.generator_names)
    else:
        r = spec.source_algebra.layer_sizes[0] if spec.source_algebra.layer_sizes else 0
    cells = r * gam.dim
    total = q**cells
    if total > spec.budget:
        raise BudgetExceeded(f"{q}^{cells} assignments exceed budget {spec.budget}")
    if gam.dim == 0:
        return HomSearchResult(count=1, witness=tuple(tuple() for _ in range(r)))

    batch_alg = _BatchAlgebra(gam, spec.q)
    b1 = gam.layer_sizes[0] if gam.layer_sizes else 0
    checker = (
        _presentation_checker(spec, batch_alg)
        if spec.source_presentation is not None
        else _algebra_checker(spec, batch_alg)
    )

    count = 0
    witness = None
    for start in range(0, total, batch_size):
        idx = np.arange(start, min(start + batch_size, total), dtype=np.int64)
        assign = _assignment_batch(idx, q, cells)
        images = [assign[:, i * gam.dim : (i + 1) * gam.dim] for i in range(r)]
        ok = checker(images)
        if spec.surjective and b1 > 0:
            for row in np.nonzero(ok)[0]:
                block = [[int(images[i][row, b]) for b in range(b1)] for i in range(r)]
                if _rank_over_field(block, spec.q) < b1:
                    ok[row] = False
        hits = np.nonzero(ok)[0]
        count += int(hits.size)
        if witness is None and hits.size:
            row = int(hits[0])
            witness = tuple(
                tuple(int(images[i][row, b]) for b in range(gam.dim)) for i in range(r)
            )
    return HomSearchResult(count=count, witness=witness)


def _presentation_checker(spec: HomSearchSpec, batch_alg: _BatchAlgebra):
    pres = spec.source_presentation

    def check(images):
        batch = images[0].shape[0]
        ok = np.ones(batch, dtype=bool)
        for word in pres.relators:
            acc = batch_alg.zeros(batch)
            for g, e in word.syllables:
                acc = batch_alg.unit_mul(acc, batch_alg.unit_pow(images[g], e))
            ok &= ~acc.any(axis=1)
        return ok

    return check


def _algebra_checker(spec: HomSearchSpec, batch_alg: _BatchAlgebra):
    lam = spec.source_algebra
    exprs = _basis_words(lam)

    def check(images):
        batch = images[0].shape[0]
        phi = []
        word_images: dict[tuple[int, ...], np.ndarray] = {}

        def image_of_word(word: tuple[int, ...]) -> np.ndarray:
            if word in word_images:
                return word_images[word]
            if len(word) == 1:
                vec = images[word[0]]
            else:
                vec = batch_alg.vmul(image_of_word(word[:-1]), images[word[-1]])
            word_images[word] = vec
            return vec

        for expr in exprs:
            acc = batch_alg.zeros(batch)
            for word, coeff in expr:
                term = image_of_word(word)
                c = int(batch_alg.embed[coeff % lam.p])
                acc = batch_alg.vadd(acc, batch_alg.mul[term, c])
            phi.append(acc)
        ok = np.ones(batch, dtype=bool)
        for (i, j), entry in _all_products(lam):
            left = batch_alg.vmul(phi[i], phi[j])
            rhs = batch_alg.zeros(batch)
            for k, c in entry:
                rhs = batch_alg.vadd(rhs, batch_alg.mul[phi[k], int(batch_alg.embed[c % lam.p])])
            ok &= ~(batch_alg.add[left, batch_alg.vneg(rhs)]).any(axis=1)
        return ok

    return check


def _all_products(lam: FilteredAlgebra):
    for i in range(lam.dim):
        for j in range(lam.dim):
            yield (i, j), lam.structure_constants.get((i, j), ())


def _basis_words(lam: FilteredAlgebra):
    """Express every basis element as an F_p-combination of products of
    weight-1 basis elements (words over layer-1 indices)."""
    from .linalg import echelonize
    import numpy as np

    r = lam.layer_sizes[0] if lam.layer_sizes else 0
    level = len(lam.layer_sizes)
    words: list[tuple[int, ...]] = []
    vectors: list[list[int]] = []
    frontier = [((i,), lam.basis_vector(i)) for i in range(r)]
    words.extend(w for w, _ in frontier)
    vectors.extend(v for _, v in frontier)
    for _ in range(level - 1):
        new = []
        for word, vec in frontier:
            for i in range(r):
                prod = lam.multiply(vec, lam.basis_vector(i))
                if any(prod):
                    new.append((word + (i,), prod))
        frontier = new
        words.extend(w for w, _ in frontier)
        vectors.extend(v for _, v in frontier)
    if not words:
        return []
    mat = np.array(vectors, dtype=np.int64)
    field = FieldSpec(lam.p)
    aug = np.concatenate([mat.T, np.eye(lam.dim, dtype=np.int64)], axis=1)
    R, _, pivots = echelonize(aug, field)
    m = mat.shape[0]
    pivot_row = {c: row for row, c in enumerate(pivots) if c < m}
    transform = R[:, m:]
    exprs = []
    for b in range(lam.dim):
        target = np.zeros(lam.dim, dtype=np.int64)
        target[b] = 1
        y = (transform @ target) % lam.p
        expr = []
        for c in range(m):
            if c in pivot_row and y[pivot_row[c]] % lam.p:
                expr.append((words[c], int(y[pivot_row[c]])))
        exprs.append(expr)
    return exprs


# ---------------------------------------------------------------------------
# Macaulay-matrix membership


def _monomials_up_to(nvars: int, bound: int) -> list[tuple[int, ...]]:
    monos = []

    def rec(prefix, remaining, slots):
        if slots == 0:
            monos.append(tuple(prefix))
            return
        for e in range(remaining + 1):
            rec(prefix + [e], remaining - e, slots - 1)

    rec([], bound, nvars)
    return monos


def macaulay_membership(
    f: Polynomial,
    I: IdealBasis,
    degree_bound: int,
    max_cells: int = 600_000_000,
) -> bool:
    """Linear-algebra ideal membership up to degree_bound.

    True means f is an F_p-combination of monomial multiples of the
    generators within the bound (hence certainly in I); False is
    conclusive only for this bound.
    """
    ring = I.ring
    if f.degree() > degree_bound or any(g.degree() > degree_bound for g in I.generators):
        raise BudgetExceeded("degree bound below the inputs' degrees")
    monos = _monomials_up_to(ring.nvars, degree_bound)
    index = {m: i for i, m in enumerate(monos)}
    rows = []
    for g in I.generators:
        gdeg = g.degree()
        for mult in _monomials_up_to(ring.nvars, degree_bound - gdeg):
            rows.append((mult, g))
    if len(rows) * len(monos) > max_cells:
        raise BudgetExceeded(
            f"Macaulay system {len(rows)}x{len(monos)} exceeds budget"
        )
    if ring.p == 2:
        return _macaulay_gf2(f, rows, index)
    return _macaulay_modp(f, rows, index, ring.p, len(monos))


def _row_int(poly: Polynomial, mult, index) -> int:
    acc = 0
    for m, c in poly.terms.items():
        col = index[tuple(x + y for x, y in zip(m, mult))] if mult is not None else index[m]
        acc |= 1 << col
    return acc


def _macaulay_gf2(f: Polynomial, rows, index) -> bool:
    pivots: dict[int, int] = {}

    def reduce(vec: int) -> int:
        while vec:
            top = vec.bit_length() - 1
            if top not in pivots:
                return vec
            vec ^= pivots[top]
        return 0

    for mult, g in rows:
        vec = reduce(_row_int(g, mult, index))
        if vec:
            pivots[vec.bit_length() - 1] = vec
    return reduce(_row_int(f, None, index)) == 0


def _macaulay_modp(f: Polynomial, rows, index, p: int, ncols: int) -> bool:
    from .linalg import echelonize

    mat = np.zeros((len(rows), ncols), dtype=np.int64)
    for r, (mult, g) in enumerate(rows):
        for m, c in g.terms.items():
            mat[r, index[tuple(x + y for x, y in zip(m, mult))]] = c
    target = np.zeros(ncols, dtype=np.int64)
    for m, c in f.terms.items():
        target[index[m]] = c
    field = FieldSpec(p)
    stacked = np.concatenate([mat, target.reshape(1, -1)])
    return echelonize(mat, field)[1] == echelonize(stacked, field)[1]


# ---------------------------------------------------------------------------
# Jennings dimension formula


def jennings_layer_dims(G: FiniteGroup, p: int) -> tuple[int, ...]:
    """Layer dimensions of the augmentation filtration predicted by the
    dimension subgroups: coefficients (degrees >= 1) of
    prod_n (1 + t^n + ... + t^((p-1)n))^(d_n), d_n = log_p |D_n : D_n+1|."""
    G.require_p_group(p)
    series = [frozenset(range(G.order))]
    while len(series[-1]) > 1:
        prev = series[-1]
        n = len(series) + 1
        half = series[(n + 1) // 2 - 1]
        seeds = set()
        for d in prev:
            id_ = G.inv(d)
            for g in range(G.order):
                seeds.add(G.mul(G.mul(id_, G.inv(g)), G.mul(d, g)))
        for h in half:
            seeds.add(G.power(h, p))
        series.append(G.subgroup_closure(seeds))
    dims = []
    for i in range(len(series) - 1):
        dims.append(int_log(len(series[i]) // len(series[i + 1]), p))
    poly = [1]
    for n, d in enumerate(dims, start=1):
        factor = [0] * ((p - 1) * n + 1)
        for j in range(p):
            factor[j * n] = 1
        for _ in range(d):
            poly = _poly_mul_int(poly, factor)
    return tuple(poly[1:])


def _poly_mul_int(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


# ---------------------------------------------------------------------------
# Finite-point vanishing


def vanishing_check(
    f: Polynomial,
    I: IdealBasis,
    q: int,
    budget: int = DEFAULT_SEARCH_BUDGET,
) -> bool:
    """Whether f vanishes at every common F_q-zero of I (necessary for
    radical membership; a one-way check)."""
    ring = I.ring
    p = ring.p
    k = 0
    qq = q
    while qq % p == 0 and qq > 1:
        qq //= p
        k += 1
    if qq != 1 or k < 1:
        raise CharMismatch(f"q = {q} is not a power of p = {p}")
    spec = FieldSpec(p, k)
    n = ring.nvars
    if q**n > budget:
        raise BudgetExceeded(f"{q}^{n} points exceed budget {budget}")
    ops = field_ops(spec)
    for point_values in itertools.product(range(q), repeat=n):
        point = dict(enumerate(point_values))
        from .poly import evaluate

        if all(evaluate(g, point, spec) == 0 for g in I.generators):
            if evaluate(f, point, spec) != 0:
                return False
    return True
