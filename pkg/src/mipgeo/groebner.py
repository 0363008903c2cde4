"""Buchberger-based Groebner engine over prime fields.

Provides reduced Groebner bases, ideal membership with optional cofactor
certificates, Rabinowitsch-trick radical membership, and least-power
search.  Budgets make every entry point fail with an explicit
ResourceBudgetExceeded instead of running away; a budget failure is always
"inconclusive", never a verdict.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field

from .errors import OrderMismatch, ResourceBudgetExceeded
from .poly import (
    Monomial,
    Polynomial,
    PolyRing,
    mono_degree,
    mono_divides,
    mono_lcm,
    mono_mul,
    mono_quotient,
    parse_poly,
    render_poly,
)


@dataclass(frozen=True)
class IdealBasis:
    ring: PolyRing
    generators: tuple[Polynomial, ...]

    def __post_init__(self):
        gens = tuple(g for g in self.generators)
        for g in gens:
            if g.is_zero():
                raise ValueError("ideal generators must be nonzero")
            if g.ring != self.ring:
                raise OrderMismatch("generator lives in a different ring")

    @staticmethod
    def make(ring: PolyRing, generators) -> "IdealBasis":
        return IdealBasis(ring, tuple(g for g in generators if not g.is_zero()))


@dataclass
class GroebnerBudget:
    max_pairs: int = 500_000
    max_basis: int = 5_000
    max_terms: int = 5_000_000

    def charge_pairs(self, pairs: int, basis: int, terms: int):
        if pairs > self.max_pairs or basis > self.max_basis or terms > self.max_terms:
            raise ResourceBudgetExceeded(
                f"groebner budget exceeded (pairs={pairs}, basis={basis}, terms={terms})",
                pairs=pairs,
                basis=basis,
                terms=terms,
            )


@dataclass(frozen=True)
class GroebnerBasis:
    elements: tuple[Polynomial, ...]
    ring: PolyRing
    representations: tuple[tuple[Polynomial, ...], ...] | None = None

    def contains_unit(self) -> bool:
        return any(g.terms and g.degree() == 0 for g in self.elements)


@dataclass(frozen=True)
class Certificate:
    """f^exponent = sum(cofactors[i] * generators[i]), exactly."""

    exponent: int
    cofactors: tuple[Polynomial, ...] | None = None


def s_polynomial(f: Polynomial, g: Polynomial) -> Polynomial:
    p = f.ring.p
    lmf, lmg = f.leading_monomial(), g.leading_monomial()
    lcm = mono_lcm(lmf, lmg)
    cf = pow(f.leading_coefficient(), p - 2, p)
    cg = pow(g.leading_coefficient(), p - 2, p)
    return f.mul_term(mono_quotient(lcm, lmf), cf) - g.mul_term(mono_quotient(lcm, lmg), cg)


def normal_form(f: Polynomial, basis, order=None, track=False):
    """Remainder of f on division by basis (first divisor in listed order,
    leading term first).  With track=True also returns the quotient list."""
    basis = list(basis)
    ring = f.ring
    p = ring.p
    key = ring.order.key
    lead = [(g.leading_monomial(), g.leading_coefficient()) for g in basis]
    quots = [dict() for _ in basis] if track else None
    work = dict(f.terms)
    remainder: dict = {}
    while work:
        lm = max(work, key=key)
        lc = work.pop(lm)
        hit = None
        for i, (glm, glc) in enumerate(lead):
            if mono_divides(glm, lm):
                hit = i
                break
        if hit is None:
            remainder[lm] = lc
            continue
        g = basis[hit]
        q_mono = mono_quotient(lm, lead[hit][0])
        q_coef = (lc * pow(lead[hit][1], p - 2, p)) % p
        if track:
            quots[hit][q_mono] = (quots[hit].get(q_mono, 0) + q_coef) % p
        for m, c in g.terms.items():
            if m == lead[hit][0]:
                continue
            mm = mono_mul(m, q_mono)
            s = (work.get(mm, 0) - q_coef * c) % p
            if s:
                work[mm] = s
            else:
                work.pop(mm, None)
    rem = Polynomial(ring, remainder)
    if track:
        return rem, [ring.from_terms(q) for q in quots]
    return rem


class _Tracked:
    """A basis element together with its representation over the original
    generators (only materialized when tracking is on)."""

    __slots__ = ("poly", "rep")

    def __init__(self, poly: Polynomial, rep):
        self.poly = poly
        self.rep = rep


def _reduce_tracked(f: Polynomial, f_rep, basis: list[_Tracked], track: bool):
    rem, quots = normal_form(f, [b.poly for b in basis], track=True)
    if not track:
        return rem, None
    rep = list(f_rep)
    for q, b in zip(quots, basis):
        if q.is_zero():
            continue
        rep = [r - q * s for r, s in zip(rep, b.rep)]
    return rem, rep


def buchberger(
    I: IdealBasis,
    budget: GroebnerBudget | None = None,
    track: bool = False,
) -> GroebnerBasis:
    """Reduced Groebner basis of I.

    Pair selection is by least lcm in the ambient order; Buchberger's
    coprime-leading-term and chain criteria prune the queue.  The result is
    interreduced and monic, with elements sorted by ascending leading
    monomial, so it is unique for the ideal and order.
    """
    ring = I.ring
    budget = budget or GroebnerBudget()
    key = ring.order.key
    ngen = len(I.generators)

    basis: list[_Tracked] = []
    for i, g in enumerate(I.generators):
        rep = None
        if track:
            rep = [ring.zero()] * ngen
            scale = pow(g.leading_coefficient(), ring.p - 2, ring.p)
            rep[i] = ring.constant(scale)
        basis.append(_Tracked(g.monic(), rep))

    heap: list = []
    counter = itertools.count()
    treated: set[tuple[int, int]] = set()

    def push_pair(i: int, j: int):
        lcm = mono_lcm(basis[i].poly.leading_monomial(), basis[j].poly.leading_monomial())
        heapq.heappush(heap, (key(lcm), next(counter), i, j, lcm))

    for i in range(len(basis)):
        for j in range(i):
            push_pair(j, i)

    pairs_done = 0
    while heap:
        _, _, i, j, lcm = heapq.heappop(heap)
        treated.add((i, j))
        lmi = basis[i].poly.leading_monomial()
        lmj = basis[j].poly.leading_monomial()
        if mono_lcm(lmi, lmj) != lcm:
            continue
        # coprime criterion
        if lcm == mono_mul(lmi, lmj):
            continue
        # chain criterion
        skip = False
        for k in range(len(basis)):
            if k in (i, j):
                continue
            if mono_divides(basis[k].poly.leading_monomial(), lcm):
                pik = (min(i, k), max(i, k))
                pjk = (min(j, k), max(j, k))
                if pik in treated and pjk in treated:
                    skip = True
                    break
        if skip:
            continue
        pairs_done += 1
        terms_total = sum(len(b.poly.terms) for b in basis)
        budget.charge_pairs(pairs_done, len(basis), terms_total)

        spoly = s_polynomial(basis[i].poly, basis[j].poly)
        s_rep = None
        if track:
            p = ring.p
            fi, fj = basis[i].poly, basis[j].poly
            ti = mono_quotient(lcm, fi.leading_monomial())
            tj = mono_quotient(lcm, fj.leading_monomial())
            ci = pow(fi.leading_coefficient(), p - 2, p)
            cj = pow(fj.leading_coefficient(), p - 2, p)
            mi = Polynomial(ring, {ti: ci})
            mj = Polynomial(ring, {tj: cj})
            s_rep = [mi * a - mj * b for a, b in zip(basis[i].rep, basis[j].rep)]

        rem, rem_rep = _reduce_tracked(spoly, s_rep, basis, track)
        if rem.is_zero():
            continue
        lc = rem.leading_coefficient()
        if lc != 1:
            inv = pow(lc, ring.p - 2, ring.p)
            rem = rem.scale(inv)
            if track:
                rem_rep = [r.scale(inv) for r in rem_rep]
        basis.append(_Tracked(rem, rem_rep))
        new = len(basis) - 1
        for k in range(new):
            push_pair(k, new)

    return _interreduce(basis, ring, track, ngen)


def _interreduce(basis: list[_Tracked], ring: PolyRing, track: bool, ngen: int) -> GroebnerBasis:
    key = ring.order.key
    # minimalize: drop elements whose leading monomial is divisible by another's
    basis = sorted(basis, key=lambda b: key(b.poly.leading_monomial()))
    kept: list[_Tracked] = []
    for b in basis:
        lm = b.poly.leading_monomial()
        if any(mono_divides(k.poly.leading_monomial(), lm) for k in kept):
            continue
        kept.append(b)
    # fully reduce each element modulo the others
    reduced: list[_Tracked] = []
    for idx, b in enumerate(kept):
        others = kept[:idx] + kept[idx + 1 :]
        rem, quots = normal_form(b.poly, [o.poly for o in others], track=True)
        if rem.is_zero():
            continue
        rep = None
        if track:
            rep = list(b.rep)
            for q, o in zip(quots, others):
                if not q.is_zero():
                    rep = [r - q * s for r, s in zip(rep, o.rep)]
        lc = rem.leading_coefficient()
        if lc != 1:
            inv = pow(lc, ring.p - 2, ring.p)
            rem = rem.scale(inv)
            if track:
                rep = [r.scale(inv) for r in rep]
        reduced.append(_Tracked(rem, rep))
    reduced.sort(key=lambda b: key(b.poly.leading_monomial()))
    return GroebnerBasis(
        elements=tuple(b.poly for b in reduced),
        ring=ring,
        representations=tuple(tuple(b.rep) for b in reduced) if track else None,
    )


def ideal_membership(
    f: Polynomial,
    I: IdealBasis,
    budget: GroebnerBudget | None = None,
    with_cofactors: bool = False,
    groebner: GroebnerBasis | None = None,
):
    """Whether f lies in I; optionally with cofactors over I's generators.

    Returns bool, or (bool, cofactors-or-None) when with_cofactors is set.
    """
    gb = groebner if groebner is not None else buchberger(I, budget, track=with_cofactors)
    if not with_cofactors:
        return normal_form(f, gb.elements).is_zero()
    rem, quots = normal_form(f, gb.elements, track=True)
    if not rem.is_zero():
        return False, None
    ring = I.ring
    cofactors = [ring.zero()] * len(I.generators)
    for q, rep in zip(quots, gb.representations):
        if q.is_zero():
            continue
        cofactors = [c + q * r for c, r in zip(cofactors, rep)]
    return True, tuple(cofactors)


def radical_membership(
    f: Polynomial, I: IdealBasis, budget: GroebnerBudget | None = None
) -> bool:
    """Rabinowitsch trick: f in rad(I) iff 1 in I + <t*f - 1> with t fresh.

    The fresh variable is appended last, where it is least in the extended
    degree-compatible order.
    """
    ring = I.ring
    ext = PolyRing(ring.p, ring.nvars + 1, ring.order.extended())
    t = ext.variable(ring.nvars)
    gens = [g.extend(ext) for g in I.generators]
    gens.append(t * f.extend(ext) - ext.one())
    gb = buchberger(IdealBasis.make(ext, gens), budget)
    return gb.contains_unit()


def least_power_in_ideal(
    f: Polynomial,
    I: IdealBasis,
    bound: int,
    budget: GroebnerBudget | None = None,
    with_cofactors: bool = False,
) -> Certificate | None:
    """Smallest m <= bound with f^m in I, by incremental membership tests."""
    gb = buchberger(I, budget, track=with_cofactors)
    power = f.ring.one()
    for m in range(1, bound + 1):
        power = power * f
        result = ideal_membership(
            power, I, budget, with_cofactors=with_cofactors, groebner=gb
        )
        if with_cofactors:
            member, cofactors = result
            if member:
                return Certificate(m, cofactors)
        elif result:
            return Certificate(m, None)
    return None


def verify_certificate(f: Polynomial, certificate: Certificate, I: IdealBasis) -> bool:
    """Exact re-expansion check: sum(c_i g_i) == f^exponent."""
    if certificate.cofactors is None:
        return False
    total = I.ring.zero()
    for c, g in zip(certificate.cofactors, I.generators):
        total = total + c * g
    return total == f ** certificate.exponent


# -- dump / restore ------------------------------------------------------------


def ideal_document(I: IdealBasis, names=None) -> dict:
    from .poly import default_names

    names = names or default_names(I.ring.nvars)
    return {
        "p": I.ring.p,
        "order": I.ring.order.kind,
        "variables": list(names),
        "generators": [render_poly(g, names) for g in I.generators],
    }


def load_ideal(doc: dict) -> tuple[IdealBasis, list[str]]:
    from .errors import SchemaError

    for key in ("p", "variables", "generators"):
        if key not in doc:
            raise SchemaError(f"ideal document missing key {key!r}")
    names = [str(n) for n in doc["variables"]]
    ring = PolyRing.make(int(doc["p"]), len(names), doc.get("order", "degrevlex"))
    gens = [parse_poly(t, names, ring) for t in doc["generators"]]
    return IdealBasis.make(ring, gens), names
