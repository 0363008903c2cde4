"""Sparse multivariate polynomials over prime fields with pluggable orders.

Monomials are dense exponent tuples; polynomials map monomials to nonzero
coefficients in range(p).  Values are immutable by convention: no method
mutates an existing polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import MissingVariable, OrderMismatch
from .field import FieldSpec, field_ops

Monomial = tuple  # exponent vector, one entry per variable


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    """Whether a divides b."""
    return all(x <= y for x, y in zip(a, b))


def mono_quotient(b: Monomial, a: Monomial) -> Monomial:
    return tuple(y - x for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_degree(a: Monomial) -> int:
    return sum(a)


@dataclass(frozen=True)
class MonomialOrder:
    """degrevlex or lex on a fixed number of variables."""

    kind: str
    nvars: int

    def __post_init__(self):
        if self.kind not in ("degrevlex", "lex"):
            raise ValueError(f"unknown order kind {self.kind!r}")

    def key(self, m: Monomial):
        if self.kind == "lex":
            return m
        return (sum(m), tuple(-e for e in reversed(m)))

    def compare(self, m1: Monomial, m2: Monomial) -> int:
        k1, k2 = self.key(m1), self.key(m2)
        return (k1 > k2) - (k1 < k2)

    def extended(self) -> "MonomialOrder":
        """Same order with one fresh variable appended as the least."""
        return MonomialOrder(self.kind, self.nvars + 1)


def monomial_compare(m1: Monomial, m2: Monomial, order: MonomialOrder) -> int:
    """-1, 0 or 1 as m1 <, =, > m2 in the given order."""
    if len(m1) != order.nvars or len(m2) != order.nvars:
        raise OrderMismatch("monomial length does not match the order's universe")
    return order.compare(m1, m2)


@dataclass(frozen=True)
class PolyRing:
    p: int
    nvars: int
    order: MonomialOrder

    @staticmethod
    def make(p: int, nvars: int, kind: str = "degrevlex") -> "PolyRing":
        return PolyRing(p, nvars, MonomialOrder(kind, nvars))

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c: int) -> "Polynomial":
        c %= self.p
        mono = (0,) * self.nvars
        return Polynomial(self, {mono: c} if c else {})

    def variable(self, i: int) -> "Polynomial":
        if not 0 <= i < self.nvars:
            raise ValueError(f"variable index {i} out of range")
        mono = tuple(1 if j == i else 0 for j in range(self.nvars))
        return Polynomial(self, {mono: 1})

    def from_terms(self, terms) -> "Polynomial":
        out: dict = {}
        for mono, c in dict(terms).items():
            c %= self.p
            if c:
                out[tuple(mono)] = c
        return Polynomial(self, out)


class Polynomial:
    """Immutable sparse polynomial; terms maps monomials to nonzero coeffs."""

    __slots__ = ("ring", "terms", "_lead")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms
        self._lead = None

    # -- basics -------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.ring.p == other.ring.p
            and self.ring.nvars == other.ring.nvars
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.ring.p, self.ring.nvars, frozenset(self.terms.items())))

    def degree(self) -> int:
        return max((mono_degree(m) for m in self.terms), default=0)

    def leading_monomial(self) -> Monomial:
        if self._lead is None:
            if not self.terms:
                raise ValueError("zero polynomial has no leading monomial")
            self._lead = max(self.terms, key=self.ring.order.key)
        return self._lead

    def leading_coefficient(self) -> int:
        return self.terms[self.leading_monomial()]

    def sorted_terms(self) -> list[tuple[Monomial, int]]:
        return sorted(self.terms.items(), key=lambda t: self.ring.order.key(t[0]), reverse=True)

    def _check(self, other: "Polynomial"):
        if (
            self.ring.p != other.ring.p
            or self.ring.nvars != other.ring.nvars
            or self.ring.order != other.ring.order
        ):
            raise OrderMismatch("polynomials live in different rings")

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        p = self.ring.p
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = (out.get(m, 0) + c) % p
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial(self.ring, out)

    def __neg__(self) -> "Polynomial":
        p = self.ring.p
        return Polynomial(self.ring, {m: (-c) % p for m, c in self.terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        p = self.ring.p
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                s = (out.get(m, 0) + c1 * c2) % p
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Polynomial(self.ring, out)

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c: int) -> "Polynomial":
        c %= self.ring.p
        if c == 0:
            return self.ring.zero()
        p = self.ring.p
        return Polynomial(self.ring, {m: (x * c) % p for m, x in self.terms.items()})

    def mul_term(self, mono: Monomial, c: int) -> "Polynomial":
        c %= self.ring.p
        if c == 0:
            return self.ring.zero()
        p = self.ring.p
        return Polynomial(self.ring, {mono_mul(m, mono): (x * c) % p for m, x in self.terms.items()})

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        lc = self.leading_coefficient()
        if lc == 1:
            return self
        return self.scale(pow(lc, self.ring.p - 2, self.ring.p))

    def extend(self, ring: PolyRing) -> "Polynomial":
        """Reinterpret in a ring with extra trailing variables."""
        pad = (0,) * (ring.nvars - self.ring.nvars)
        return Polynomial(ring, {m + pad: c for m, c in self.terms.items()})

    def __repr__(self):
        return f"Polynomial({render_poly(self)})"


def evaluate(f: Polynomial, point: dict, target: FieldSpec):
    """Evaluate f at a point over target (characteristic must equal f's p).

    Coefficients embed through the prime subfield; point maps variable
    indices to target elements.
    """
    if target.p != f.ring.p:
        raise OrderMismatch("target characteristic differs from coefficient field")
    ops = field_ops(target)
    total = 0
    for mono, coeff in f.terms.items():
        acc = ops.embed_prime(coeff)
        for v, e in enumerate(mono):
            if e == 0:
                continue
            if v not in point:
                raise MissingVariable(f"no value for variable {v}")
            acc = ops.mul(acc, ops.pow(point[v], e))
        total = ops.add(total, acc)
    return total


# -- text form ---------------------------------------------------------------


def default_names(nvars: int) -> list[str]:
    return [f"x{i}" for i in range(nvars)]


def render_poly(f: Polynomial, names=None) -> str:
    """Deterministic text form, terms in descending order."""
    if not f.terms:
        return "0"
    names = names or default_names(f.ring.nvars)
    parts = []
    for mono, coeff in f.sorted_terms():
        factors = []
        if coeff != 1 or not any(mono):
            factors.append(str(coeff))
        for v, e in enumerate(mono):
            if e == 1:
                factors.append(names[v])
            elif e > 1:
                factors.append(f"{names[v]}^{e}")
        parts.append("*".join(factors))
    return " + ".join(parts)


def parse_poly(text: str, names, ring: PolyRing) -> Polynomial:
    """Parse sums of products of powers, e.g. 'a^2*b + 2*b + 1'."""
    index = {n: i for i, n in enumerate(names)}
    total = ring.zero()
    text = text.replace("-", "+-")
    for chunk in text.split("+"):
        chunk = chunk.strip()
        if not chunk:
            continue
        negate = chunk.startswith("-")
        if negate:
            chunk = chunk[1:].strip()
        coeff = 1
        mono = [0] * ring.nvars
        for factor in chunk.split("*"):
            factor = factor.strip()
            if not factor:
                raise ValueError(f"empty factor in {text!r}")
            if factor.isdigit():
                coeff = coeff * int(factor)
                continue
            if "^" in factor:
                base, _, exp = factor.partition("^")
                base, exp = base.strip(), exp.strip()
                if base not in index or not exp.isdigit():
                    raise ValueError(f"bad factor {factor!r}")
                mono[index[base]] += int(exp)
            else:
                if factor not in index:
                    raise ValueError(f"unknown variable {factor!r}")
                mono[index[factor]] += 1
        if negate:
            coeff = -coeff
        term = ring.from_terms({tuple(mono): coeff})
        total = total + term
    return total
