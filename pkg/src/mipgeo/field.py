"""Exact arithmetic over prime fields F_p and small extensions F_{p^k}.

Elements of F_{p^k} are encoded as integers in range(p**k): the integer
sum(c_i * p**i) stands for the residue of the polynomial sum(c_i * t**i)
modulo the defining modulus.  For k == 1 this is plain arithmetic mod p.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import ReducibleModulus, ZeroInverse

# Fixed moduli for the extension degrees the oracles use (coefficients of
# t^0, t^1, ..., t^k over F_p).
DEFAULT_MODULI = {
    (2, 2): (1, 1, 1),          # t^2 + t + 1
    (2, 3): (1, 1, 0, 1),       # t^3 + t + 1
    (2, 4): (1, 1, 0, 0, 1),    # t^4 + t + 1
    (3, 2): (1, 0, 1),          # t^2 + 1
}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """A finite field F_{p^k}, with an explicit modulus when k > 1."""

    p: int
    k: int = 1
    modulus: tuple[int, ...] | None = None

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if self.k < 1:
            raise ValueError("extension degree must be positive")
        if self.k > 1 and self.modulus is None:
            default = DEFAULT_MODULI.get((self.p, self.k))
            if default is None:
                raise ValueError(f"no default modulus for F_{self.p}^{self.k}")
            object.__setattr__(self, "modulus", default)

    @property
    def q(self) -> int:
        return self.p**self.k


def _poly_of(x: int, p: int, k: int) -> list[int]:
    coeffs = []
    for _ in range(k):
        coeffs.append(x % p)
        x //= p
    return coeffs


def _int_of(coeffs: list[int], p: int) -> int:
    value = 0
    for c in reversed(coeffs):
        value = value * p + c
    return value


def _check_irreducible(p: int, modulus: tuple[int, ...]) -> None:
    # Exhaustive search for factors of degree <= deg/2; fine for k <= 4.
    k = len(modulus) - 1
    if modulus[k] != 1:
        raise ReducibleModulus("modulus must be monic")
    for d in range(1, k // 2 + 1):
        for tail in range(p**d):
            factor = _poly_of(tail, p, d) + [1]
            if _poly_divides(factor, list(modulus), p):
                raise ReducibleModulus(
                    f"modulus {modulus} has factor of degree {d} over F_{p}"
                )


def _poly_divides(f: list[int], g: list[int], p: int) -> bool:
    g = list(g)
    df, dg = len(f) - 1, len(g) - 1
    while dg >= df:
        lead = g[dg]
        if lead:
            for i in range(df + 1):
                g[dg - df + i] = (g[dg - df + i] - lead * f[i]) % p
        dg -= 1
    return all(c == 0 for c in g)


class FieldOps:
    """Total arithmetic on the p**k elements of a finite field.

    For k > 1 the add/mul tables are built once from the modulus; inverses
    come from scanning the multiplication table.  q is at most 16 in all
    intended uses, so the tables are tiny.
    """

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        self.p = spec.p
        self.k = spec.k
        self.q = spec.q
        if spec.k > 1:
            _check_irreducible(spec.p, spec.modulus)
            self._build_tables()

    def _build_tables(self):
        p, k, q = self.p, self.k, self.q
        mod = list(self.spec.modulus)
        self._add = [[0] * q for _ in range(q)]
        self._mul = [[0] * q for _ in range(q)]
        for x in range(q):
            cx = _poly_of(x, p, k)
            for y in range(q):
                cy = _poly_of(y, p, k)
                self._add[x][y] = _int_of([(a + b) % p for a, b in zip(cx, cy)], p)
                prod = [0] * (2 * k - 1)
                for i, a in enumerate(cx):
                    if a:
                        for j, b in enumerate(cy):
                            prod[i + j] = (prod[i + j] + a * b) % p
                for d in range(len(prod) - 1, k - 1, -1):
                    lead = prod[d]
                    if lead:
                        prod[d] = 0
                        for i in range(k):
                            prod[d - k + i] = (prod[d - k + i] - lead * mod[i]) % p
                self._mul[x][y] = _int_of(prod[:k], p)
        self._inv = [0] * q
        for x in range(1, q):
            for y in range(1, q):
                if self._mul[x][y] == 1:
                    self._inv[x] = y
                    break

    def add(self, x: int, y: int) -> int:
        if self.k == 1:
            return (x + y) % self.p
        return self._add[x][y]

    def neg(self, x: int) -> int:
        if self.k == 1:
            return (-x) % self.p
        return _int_of([(-c) % self.p for c in _poly_of(x, self.p, self.k)], self.p)

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    def mul(self, x: int, y: int) -> int:
        if self.k == 1:
            return (x * y) % self.p
        return self._mul[x][y]

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroInverse("0 has no multiplicative inverse")
        if self.k == 1:
            return pow(x, self.p - 2, self.p)
        return self._inv[x]

    def frobenius(self, x: int) -> int:
        return self.pow(x, self.p)

    def pow(self, x: int, n: int) -> int:
        result = 1
        base = x
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def embed_prime(self, c: int) -> int:
        """Image of c in F_p under the prime-subfield embedding."""
        return c % self.p

    def elements(self) -> range:
        return range(self.q)


@lru_cache(maxsize=None)
def field_ops(spec: FieldSpec) -> FieldOps:
    """Arithmetic table bundle (add, mul, inverse, Frobenius) for spec."""
    return FieldOps(spec)
