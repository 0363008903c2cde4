"""Finite-group arithmetic on multiplication tables.

Groups are given by an order-n multiplication table over element indices
0..n-1 with the identity at index 0.  Everything here is exhaustive and
deterministic; the intended scale is order <= 64.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from .errors import (
    GroupAxiomError,
    MixedOrders,
    NotNormal,
    NotPGroup,
    OrderBoundExceeded,
    PresentationMismatch,
    SchemaError,
)

DESK_ORDER_BOUND = 64


# ---------------------------------------------------------------------------
# Words and presentations


@dataclass(frozen=True)
class Word:
    """A word in abstract generators: sequence of (generator index, exponent).

    Stored normalized: no zero exponents, adjacent syllables use distinct
    generators.
    """

    syllables: tuple[tuple[int, int], ...]

    @staticmethod
    def from_syllables(raw) -> "Word":
        merged: list[list[int]] = []
        for g, e in raw:
            if e == 0:
                continue
            if merged and merged[-1][0] == g:
                merged[-1][1] += e
                if merged[-1][1] == 0:
                    merged.pop()
            else:
                merged.append([g, e])
        return Word(tuple((g, e) for g, e in merged))

    def inverse(self) -> "Word":
        return Word.from_syllables((g, -e) for g, e in reversed(self.syllables))

    def __mul__(self, other: "Word") -> "Word":
        return Word.from_syllables(self.syllables + other.syllables)


@dataclass(frozen=True)
class FinitePresentation:
    generator_names: tuple[str, ...]
    relators: tuple[Word, ...]
    relator_texts: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.relators:
            raise SchemaError("relator list must be non-empty")
        ngen = len(self.generator_names)
        for w in self.relators:
            for g, _ in w.syllables:
                if not 0 <= g < ngen:
                    raise SchemaError(f"relator references undeclared generator {g}")


_TOKEN = re.compile(r"\s*([A-Za-z_][A-Za-z_0-9]*|\^|-?\d+|[\[\],*])")


def _tokenize(text: str) -> list[str]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise SchemaError(f"cannot tokenize relator at: {text[pos:]!r}")
        tokens.append(m.group(1))
        pos = m.end()
    return tokens


def parse_word(text: str, names: tuple[str, ...]) -> Word:
    """Parse  word := term ("*" term)*;  term := name ("^" int)? | "[" word "," word "]".

    The commutator [a, b] expands to a^-1 b^-1 a b.
    """
    tokens = _tokenize(text)
    index = {n: i for i, n in enumerate(names)}
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def expect(tok):
        nonlocal pos
        if peek() != tok:
            raise SchemaError(f"expected {tok!r} in relator {text!r}")
        pos += 1

    def parse_w() -> Word:
        nonlocal pos
        w = parse_t()
        while peek() == "*":
            pos += 1
            w = w * parse_t()
        return w

    def parse_t() -> Word:
        nonlocal pos
        tok = peek()
        if tok == "[":
            pos += 1
            left = parse_w()
            expect(",")
            right = parse_w()
            expect("]")
            comm = left.inverse() * right.inverse() * left * right
            if peek() == "^":
                pos += 1
                nxt = peek()
                if nxt is None or not re.fullmatch(r"-?\d+", nxt):
                    raise SchemaError(f"expected integer exponent in relator {text!r}")
                exp = int(nxt)
                pos += 1
                out = Word(())
                base = comm if exp > 0 else comm.inverse()
                for _ in range(abs(exp)):
                    out = out * base
                return out
            return comm
        if tok is None or tok in "^],*":
            raise SchemaError(f"malformed relator {text!r}")
        if tok not in index:
            raise SchemaError(f"unknown generator {tok!r} in relator {text!r}")
        pos += 1
        exp = 1
        if peek() == "^":
            pos += 1
            nxt = peek()
            if nxt is None or not re.fullmatch(r"-?\d+", nxt):
                raise SchemaError(f"expected integer exponent in relator {text!r}")
            exp = int(nxt)
            pos += 1
        return Word.from_syllables([(index[tok], exp)])

    word = parse_w()
    if pos != len(tokens):
        raise SchemaError(f"trailing tokens in relator {text!r}")
    return word


# ---------------------------------------------------------------------------
# The group type


class FiniteGroup:
    """Multiplication-table group with identity at index 0."""

    def __init__(self, name, order, table, generators, presentation=None, validate=True):
        self.name = str(name)
        self.order = int(order)
        self.table = np.asarray(table, dtype=np.int64)
        self.generators = tuple(int(g) for g in generators)
        self.presentation = presentation
        if validate:
            self.validate()
        inv = np.empty(self.order, dtype=np.int64)
        for g in range(self.order):
            inv[g] = int(np.nonzero(self.table[g] == 0)[0][0])
        self._inv = inv

    # -- validation --------------------------------------------------------

    def validate(self):
        n = self.order
        T = self.table
        if n < 1:
            raise SchemaError("order must be positive")
        if T.shape != (n, n):
            raise SchemaError(f"table shape {T.shape} does not match order {n}")
        if T.min(initial=0) < 0 or T.max(initial=0) >= n:
            raise GroupAxiomError("table entries out of range")
        if not (np.array_equal(T[0], np.arange(n)) and np.array_equal(T[:, 0], np.arange(n))):
            raise GroupAxiomError("index 0 is not a two-sided identity")
        for g in range(n):
            if 0 not in T[g] or 0 not in T[:, g]:
                raise GroupAxiomError(f"element {g} has no two-sided inverse")
        left = T[T.reshape(-1), :].reshape(n, n, n)
        right = T[:, T.reshape(-1)].reshape(n, n, n)
        if not np.array_equal(left, right):
            raise GroupAxiomError("multiplication table is not associative")
        if closure(T, self.generators) != frozenset(range(n)):
            raise GroupAxiomError("listed generators do not generate the group")
        if self.presentation is not None:
            self._check_presentation()

    def _check_presentation(self):
        pres = self.presentation
        if len(pres.generator_names) > len(self.generators):
            raise PresentationMismatch(
                "presentation has more generators than the group lists"
            )
        images = self.generators[: len(pres.generator_names)]
        for text, word in zip(
            pres.relator_texts or [str(w.syllables) for w in pres.relators],
            pres.relators,
        ):
            if self.evaluate_word(word, images) != 0:
                raise PresentationMismatch(f"relator {text!r} does not evaluate to 1")

    # -- primitive operations ----------------------------------------------

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self._inv[a])

    def power(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        result = 0
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.mul(x, a)
            k += 1
        return k

    def exponent(self) -> int:
        return max(self.element_order(g) for g in range(self.order))

    def evaluate_word(self, word: Word, images) -> int:
        result = 0
        for g, e in word.syllables:
            result = self.mul(result, self.power(images[g], e))
        return result

    def conjugate(self, g: int, by: int) -> int:
        return self.mul(self.mul(self.inv(by), g), by)

    # -- subgroup machinery --------------------------------------------------

    def subgroup_closure(self, seed) -> frozenset[int]:
        return closure(self.table, seed)

    def centralizer(self, g: int) -> frozenset[int]:
        T = self.table
        return frozenset(int(h) for h in np.nonzero(T[:, g] == T[g, :])[0])

    @cached_property
    def center(self) -> frozenset[int]:
        T = self.table
        return frozenset(int(g) for g in range(self.order) if np.array_equal(T[g], T[:, g]))

    @cached_property
    def derived_subgroup(self) -> frozenset[int]:
        comms = set()
        for a in range(self.order):
            ia = self.inv(a)
            for b in range(self.order):
                comms.add(self.mul(self.mul(ia, self.inv(b)), self.mul(a, b)))
        return self.subgroup_closure(comms)

    def frattini_of(self, subgroup, p: int) -> frozenset[int]:
        """Frattini subgroup H^p [H, H] of a p-subgroup given as an index set."""
        elems = sorted(subgroup)
        gens = {self.power(h, p) for h in elems}
        for a in elems:
            ia = self.inv(a)
            for b in elems:
                gens.add(self.mul(self.mul(ia, self.inv(b)), self.mul(a, b)))
        return self.subgroup_closure(gens)

    def subgroup_rank(self, subgroup, p: int) -> int:
        phi = self.frattini_of(subgroup, p)
        return int_log(len(subgroup) // len(phi), p)

    def minimal_generators(self, p: int) -> tuple[int, ...]:
        """A minimal generating sequence, chosen greedily by element index."""
        phi = self.frattini_of(frozenset(range(self.order)), p)
        chosen: list[int] = []
        span = phi
        for g in range(self.order):
            if len(span) == self.order:
                break
            if g not in span:
                trial = self.subgroup_closure(set(span) | {g})
                chosen.append(g)
                span = trial
        return tuple(chosen)

    def is_p_group(self, p: int) -> bool:
        n = self.order
        while n % p == 0:
            n //= p
        return n == 1

    def require_p_group(self, p: int):
        if not self.is_p_group(p):
            raise NotPGroup(f"{self.name}: order {self.order} is not a power of {p}")


def closure(table: np.ndarray, seed) -> frozenset[int]:
    """Subgroup generated by seed (identity always included)."""
    elems = {0} | {int(s) for s in seed}
    current = np.array(sorted(elems), dtype=np.int64)
    while True:
        products = np.unique(table[np.ix_(current, current)])
        if products.size == current.size:
            return frozenset(int(x) for x in current)
        current = products


def int_log(n: int, p: int) -> int:
    """log_p(n) for exact powers; raises if n is not a power of p."""
    k = 0
    while n > 1:
        if n % p:
            raise ValueError(f"{n} is not a power of {p}")
        n //= p
        k += 1
    return k


# ---------------------------------------------------------------------------
# Loading


def load_group(doc: dict) -> FiniteGroup:
    """Validate a group document (see README for the schema) into a FiniteGroup."""
    if not isinstance(doc, dict):
        raise SchemaError("group document must be a JSON object")
    for key in ("name", "order", "table", "generators"):
        if key not in doc:
            raise SchemaError(f"group document missing key {key!r}")
    order = doc["order"]
    if not isinstance(order, int) or order < 1:
        raise SchemaError("order must be a positive integer")
    table = doc["table"]
    if (
        not isinstance(table, list)
        or len(table) != order
        or any(not isinstance(row, list) or len(row) != order for row in table)
    ):
        raise SchemaError("table must be an order x order array of indices")
    generators = doc["generators"]
    if not isinstance(generators, list) or any(not isinstance(g, int) for g in generators):
        raise SchemaError("generators must be a list of element indices")
    if any(not 0 <= g < order for g in generators):
        raise SchemaError("generator index out of range")
    presentation = None
    if doc.get("presentation") is not None:
        pdoc = doc["presentation"]
        if not isinstance(pdoc, dict) or "generators" not in pdoc or "relators" not in pdoc:
            raise SchemaError("presentation must have 'generators' and 'relators'")
        names = tuple(str(n) for n in pdoc["generators"])
        texts = tuple(str(r) for r in pdoc["relators"])
        words = tuple(parse_word(t, names) for t in texts)
        presentation = FinitePresentation(names, words, texts)
    return FiniteGroup(doc["name"], order, table, generators, presentation)


def load_group_path(path) -> FiniteGroup:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: invalid JSON ({exc})") from exc
    return load_group(doc)


def group_document(G: FiniteGroup) -> dict:
    doc = {
        "name": G.name,
        "order": G.order,
        "table": [[int(x) for x in row] for row in G.table],
        "generators": list(G.generators),
    }
    if G.presentation is not None:
        doc["presentation"] = {
            "generators": list(G.presentation.generator_names),
            "relators": list(G.presentation.relator_texts),
        }
    return doc


# ---------------------------------------------------------------------------
# Conjugacy classes and invariants


def conjugacy_classes(G: FiniteGroup) -> list[tuple[int, ...]]:
    """Conjugation orbits, listed in order of least element index."""
    seen = np.zeros(G.order, dtype=bool)
    classes = []
    for g in range(G.order):
        if seen[g]:
            continue
        orbit = sorted({G.conjugate(g, h) for h in range(G.order)})
        for x in orbit:
            seen[x] = True
        classes.append(tuple(orbit))
    return classes


@dataclass(frozen=True)
class InvariantProfile:
    rank: int
    dim_hh1: int
    k_sequence: tuple[int, ...]
    gl_order: int

    def as_tuple(self):
        return (self.rank, self.dim_hh1, self.k_sequence, self.gl_order)


def invariant_profile(G: FiniteGroup, p: int) -> InvariantProfile:
    """Group-theoretic invariants of the modular group algebra.

    rank: minimal generator count, log_p |G : Phi(G)|.
    dim_hh1: sum over conjugacy classes of the rank of the centralizer
        (the Roggenkamp parameter, = dim of first Hochschild cohomology).
    k_sequence: numbers of conjugacy classes among the p^i-th powers,
        for i = 0 .. log_p(exponent).
    gl_order: order of T/Phi(T) for T generated by {g : g^p in [G, G]}.
    """
    G.require_p_group(p)
    classes = conjugacy_classes(G)
    rank = G.subgroup_rank(frozenset(range(G.order)), p)

    dim_hh1 = 0
    for cls in classes:
        cent = G.centralizer(cls[0])
        dim_hh1 += G.subgroup_rank(cent, p)

    exponent = G.exponent()
    steps = int_log(exponent, p)
    class_of = {}
    for idx, cls in enumerate(classes):
        for g in cls:
            class_of[g] = idx
    k_seq = []
    for i in range(steps + 1):
        q = p**i
        powers = {G.power(g, q) for g in range(G.order)}
        k_seq.append(len({class_of[g] for g in powers}))

    derived = G.derived_subgroup
    omega_seed = {g for g in range(G.order) if G.power(g, p) in derived}
    omega = G.subgroup_closure(omega_seed)
    gl_order = len(omega) // len(G.frattini_of(omega, p))

    return InvariantProfile(rank, dim_hh1, tuple(k_seq), gl_order)


def split_by_invariant_profile(groups, p: int) -> list[list[FiniteGroup]]:
    """Partition groups by equality of their invariant profiles."""
    groups = list(groups)
    if groups and len({G.order for G in groups}) > 1:
        raise MixedOrders("groups must all have the same order")
    for G in groups:
        G.require_p_group(p)
    cells: dict[tuple, list[FiniteGroup]] = {}
    for G in groups:
        cells.setdefault(invariant_profile(G, p).as_tuple(), []).append(G)
    return [cells[key] for key in sorted(cells.keys())]


# ---------------------------------------------------------------------------
# Normal subgroups, quotients, epimorphisms


def normal_subgroups(G: FiniteGroup) -> list[frozenset[int]]:
    """All normal subgroups, via joins of normal closures of conjugacy classes."""
    if G.order > DESK_ORDER_BOUND:
        raise OrderBoundExceeded(f"order {G.order} exceeds bound {DESK_ORDER_BOUND}")
    atoms = {G.subgroup_closure(cls) for cls in conjugacy_classes(G)}
    found = set(atoms)
    found.add(frozenset({0}))
    frontier = set(found)
    while frontier:
        new = set()
        for a in frontier:
            for b in found:
                join = G.subgroup_closure(a | b)
                if join not in found and join not in new:
                    new.add(join)
        found |= new
        frontier = new
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def is_normal(G: FiniteGroup, subset) -> bool:
    sub = frozenset(subset)
    if sub != G.subgroup_closure(sub):
        return False
    return all(G.conjugate(n, g) in sub for n in sub for g in G.generators)


def quotient(G: FiniteGroup, N) -> FiniteGroup:
    """Quotient group G/N with the identity coset at index 0."""
    N = frozenset(int(x) for x in N)
    if not is_normal(G, N):
        raise NotNormal("subset is not a normal subgroup")
    coset_of = {}
    reps = []
    for g in range(G.order):
        if g in coset_of:
            continue
        coset = sorted(G.mul(g, n) for n in N)
        rep = coset[0]
        idx = len(reps)
        reps.append(rep)
        for x in coset:
            coset_of[x] = idx
    # reps are discovered in increasing element order, so rep 0 is the
    # identity coset and comes first.
    m = len(reps)
    table = [[coset_of[G.mul(reps[i], reps[j])] for j in range(m)] for i in range(m)]
    gens = []
    for g in G.generators:
        img = coset_of[g]
        if img != 0 and img not in gens:
            gens.append(img)
    name = f"{G.name}/N{len(N)}e{min(set(N) - {0}, default=0)}"
    return FiniteGroup(name, m, table, gens)


def element_words(G: FiniteGroup, gens) -> list[list[int]]:
    """For each element, a word (sequence of generator positions) reaching it
    from the identity along a Cayley-graph spanning tree."""
    words: list[list[int] | None] = [None] * G.order
    words[0] = []
    frontier = [0]
    while frontier:
        nxt = []
        for g in frontier:
            for pos, s in enumerate(gens):
                h = G.mul(g, s)
                if words[h] is None:
                    words[h] = words[g] + [pos]
                    nxt.append(h)
        frontier = nxt
    if any(w is None for w in words):
        raise GroupAxiomError("generators do not generate the group")
    return words


def _small_prime_base(n: int) -> int | None:
    for p in (2, 3, 5, 7, 11, 13):
        if n % p == 0:
            k = n
            while k % p == 0:
                k //= p
            return p if k == 1 else None
    return None


def epimorphism_exists(G: FiniteGroup, Q: FiniteGroup) -> bool:
    """Whether a surjective group homomorphism G -> Q exists.

    Enumerates images of a minimal generating set of G (pruned to elements
    of compatible order and to tuples generating the whole of Q), then
    verifies multiplicative consistency on the full table via words from a
    Cayley-graph spanning tree.
    """
    if Q.order == 1:
        return True
    if G.order % Q.order != 0:
        return False
    p = _small_prime_base(G.order)
    gens = G.minimal_generators(p) if p is not None else G.generators
    words = element_words(G, gens)
    QT = Q.table
    n, m = G.order, Q.order

    if p is not None and Q.is_p_group(p):
        if Q.subgroup_rank(frozenset(range(m)), p) > len(gens):
            return False

    gen_orders = [G.element_order(s) for s in gens]
    q_orders = [Q.element_order(x) for x in range(m)]
    candidates = [
        [x for x in range(m) if gen_orders[pos] % q_orders[x] == 0]
        for pos in range(len(gens))
    ]
    for images in itertools.product(*candidates):
        if closure(QT, images) != frozenset(range(m)):
            continue
        phi = np.empty(n, dtype=np.int64)
        for g in range(n):
            acc = 0
            for pos in words[g]:
                acc = QT[acc, images[pos]]
            phi[g] = acc
        if np.array_equal(phi[G.table], QT[np.ix_(phi, phi)]):
            return True
    return False
