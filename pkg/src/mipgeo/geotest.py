"""Relation ideals and the geometric (non-)isomorphism tests.

Two ways to build the relation ideal for "does a surjection
Lambda -> Gamma exist over some field extension":

* structure mode: one variable per basis pair (a, b), one generator per
  structure-constant equation; faithful but large.
* presentation mode: send each generator of the source group to a generic
  unit 1 + sum(alpha_ib * b_i) of the target algebra and push the group's
  defining relators through; far fewer variables.

The naive test checks all maximal minors of the weight-1 variable block
for radical membership; the refined test drives it over quotients Q of H
and truncation levels l.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import (
    CharMismatch,
    MixedOrders,
    NotMinimalGeneratingSet,
    RelatorIndexOutOfRange,
    ResourceBudgetExceeded,
    WideBlock,
)
from .filtration import FilteredAlgebra, build_filtration, nilpotency_index
from .groebner import (
    Certificate,
    GroebnerBudget,
    IdealBasis,
    least_power_in_ideal,
    radical_membership,
)
from .groups import (
    FinitePresentation,
    FiniteGroup,
    epimorphism_exists,
    invariant_profile,
    normal_subgroups,
    quotient,
)
from .poly import Polynomial, PolyRing

NO_SURJECTION = "NoSurjectionAnyExtension"
SURJECTION_SOME_EXT = "SurjectionSomeFiniteExtension"
NOT_ISOMORPHIC = "NotIsomorphicAllFieldsCharP"
ISOMORPHIC_SOME_FIELD = "IsomorphicOverSomeFiniteField"


@dataclass(frozen=True)
class RelationIdeal:
    ideal: IdealBasis
    source_mode: str
    var_rows: int
    var_cols: int
    minor_rows: int
    minor_cols: int
    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]

    def variable_index(self, row: int, col: int) -> int:
        return row * self.var_cols + col

    def variable_names(self) -> list[str]:
        return [
            f"a[{r}][{c}]"
            for r in self.row_labels
            for c in self.col_labels
        ]


@dataclass(frozen=True)
class TestReport:
    verdict: str
    p: int
    mode: str
    dim_lambda: int
    dim_gamma: int
    quotient_used: str | None = None
    quotient_order: int | None = None
    level: int | None = None
    minors_total: int = 0
    minors_tested: int = 0
    minors_in_radical: int = 0
    rank_short_circuit: bool = False
    certificate: Certificate | None = None
    budget_notes: tuple[tuple[str, int], ...] = ()


def build_structure_ideal(lam: FilteredAlgebra, gam: FilteredAlgebra) -> RelationIdeal:
    """Prop-style relation ideal from structure constants of both algebras.

    One variable per pair (a in A, b in B); one generator per triple
    (x, y in A, c in B) equating the coefficient of c in the image of xy
    with the corresponding product of generic images.
    """
    if lam.p != gam.p:
        raise CharMismatch(f"p = {lam.p} vs {gam.p}")
    n, m = lam.dim, gam.dim
    ring = PolyRing.make(lam.p, n * m)
    gens: list[Polynomial] = []
    tau_by_c: list[dict[tuple[int, int], int]] = [dict() for _ in range(m)]
    for (a, b), entry in gam.structure_constants.items():
        for c, coeff in entry:
            tau_by_c[c][(a, b)] = coeff
    for x in range(n):
        for y in range(n):
            sigma = dict(lam.structure_constants.get((x, y), ()))
            for c in range(m):
                terms: dict = {}
                for z, s in sigma.items():
                    mono = [0] * (n * m)
                    mono[z * m + c] = 1
                    mono = tuple(mono)
                    terms[mono] = (terms.get(mono, 0) + s) % lam.p
                for (a, b), t in tau_by_c[c].items():
                    mono = [0] * (n * m)
                    mono[x * m + a] += 1
                    mono[y * m + b] += 1
                    mono = tuple(mono)
                    terms[mono] = (terms.get(mono, 0) - t) % lam.p
                poly = ring.from_terms(terms)
                if not poly.is_zero():
                    gens.append(poly)
    a1 = lam.layer_sizes[0] if lam.layer_sizes else 0
    b1 = gam.layer_sizes[0] if gam.layer_sizes else 0
    return RelationIdeal(
        ideal=IdealBasis.make(ring, _dedup(gens)),
        source_mode="structure",
        var_rows=n,
        var_cols=m,
        minor_rows=a1,
        minor_cols=b1,
        row_labels=lam.basis_labels,
        col_labels=gam.basis_labels,
    )


class _GenericUnit:
    """1 + u with u a vector of polynomial coefficients over Gamma's basis."""

    __slots__ = ("vec",)

    def __init__(self, vec):
        self.vec = vec


def _vec_add(u, v):
    return [a + b for a, b in zip(u, v)]


def _vec_mul(gam: FilteredAlgebra, ring: PolyRing, u, v):
    out = [ring.zero() for _ in range(gam.dim)]
    for i, ci in enumerate(u):
        if ci.is_zero():
            continue
        for j, cj in enumerate(v):
            if cj.is_zero():
                continue
            entry = gam.structure_constants.get((i, j))
            if not entry:
                continue
            prod = ci * cj
            for k, c in entry:
                out[k] = out[k] + prod.scale(c)
    return out


def _unit_mul(gam, ring, a: _GenericUnit, b: _GenericUnit) -> _GenericUnit:
    return _GenericUnit(_vec_add(_vec_add(a.vec, b.vec), _vec_mul(gam, ring, a.vec, b.vec)))


def _unit_inv(gam, ring, a: _GenericUnit) -> _GenericUnit:
    # (1 + u)^-1 = 1 - u + u^2 - ... ; the series stops once powers vanish
    acc = [p.scale(-1) for p in a.vec]
    power = [p.scale(-1) for p in a.vec]
    while True:
        power = _vec_mul(gam, ring, power, [p.scale(-1) for p in a.vec])
        if all(p.is_zero() for p in power):
            break
        acc = _vec_add(acc, power)
    return _GenericUnit(acc)


def _unit_pow(gam, ring, a: _GenericUnit, e: int) -> _GenericUnit:
    if e < 0:
        return _unit_pow(gam, ring, _unit_inv(gam, ring, a), -e)
    result = _GenericUnit([ring.zero() for _ in range(gam.dim)])
    for _ in range(e):
        result = _unit_mul(gam, ring, result, a)
    return result


def build_presentation_ideal(
    P: FinitePresentation,
    gam: FilteredAlgebra,
    relator_subset=None,
) -> RelationIdeal:
    """Relation ideal from a presentation of the source group.

    Generator i maps to the generic unit 1 + sum_b alpha_ib * b; every
    relator word must map to 1, so each coefficient of (image - 1) on
    Gamma's basis becomes an ideal generator.  The presentation must be on
    a minimal generating set of the source group (the caller's contract;
    the refined test verifies it against the group's rank).
    """
    r = len(P.generator_names)
    m = gam.dim
    ring = PolyRing.make(gam.p, r * m)
    if relator_subset is None:
        relator_subset = range(len(P.relators))
    relator_subset = list(relator_subset)
    for idx in relator_subset:
        if not 0 <= idx < len(P.relators):
            raise RelatorIndexOutOfRange(f"relator index {idx} out of range")

    units = [
        _GenericUnit([ring.variable(i * m + b) for b in range(m)]) for i in range(r)
    ]
    gens: list[Polynomial] = []
    for idx in relator_subset:
        word = P.relators[idx]
        image = _GenericUnit([ring.zero() for _ in range(m)])
        for g, e in word.syllables:
            image = _unit_mul(gam, ring, image, _unit_pow(gam, ring, units[g], e))
        for coord in image.vec:
            if not coord.is_zero():
                gens.append(coord)
    b1 = gam.layer_sizes[0] if gam.layer_sizes else 0
    return RelationIdeal(
        ideal=IdealBasis.make(ring, _dedup(gens)),
        source_mode="presentation",
        var_rows=r,
        var_cols=m,
        minor_rows=r,
        minor_cols=b1,
        row_labels=tuple(P.generator_names),
        col_labels=gam.basis_labels,
    )


def _dedup(polys):
    seen = set()
    out = []
    for f in polys:
        key = frozenset(f.terms.items())
        if key not in seen:
            seen.add(key)
            out.append(f)
    return out


def maximal_minors(R: RelationIdeal) -> list[Polynomial]:
    """All (minor_rows choose minor_cols) determinants of the weight-1
    variable block, cofactor-expanded, in lexicographic row-subset order."""
    rows, cols = R.minor_rows, R.minor_cols
    if rows < cols:
        raise WideBlock(f"minor block is {rows}x{cols}; rank short-circuit applies")
    ring = R.ideal.ring
    minors = []
    for subset in itertools.combinations(range(rows), cols):
        terms: dict = {}
        for perm in itertools.permutations(range(cols)):
            sign = _perm_sign(perm)
            mono = [0] * ring.nvars
            for r_local, c in enumerate(perm):
                mono[R.variable_index(subset[r_local], c)] += 1
            mono = tuple(mono)
            terms[mono] = (terms.get(mono, 0) + sign) % ring.p
        minors.append(ring.from_terms(terms))
    return minors


def _perm_sign(perm) -> int:
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def naive_geometric_test(
    lam: FilteredAlgebra,
    gam: FilteredAlgebra,
    mode: str = "structure",
    budget: GroebnerBudget | None = None,
    presentation: FinitePresentation | None = None,
    relator_subset=None,
    certificate: bool = False,
) -> TestReport:
    """Decide whether Gamma extends to a homomorphic image of Lambda.

    NoSurjectionAnyExtension: no field extension admits a surjection
    Lambda_E -> Gamma_E.  SurjectionSomeFiniteExtension: some finite
    extension does.  Early exit on the first minor outside the radical.
    """
    if lam.p != gam.p:
        raise CharMismatch(f"p = {lam.p} vs {gam.p}")
    budget = budget or GroebnerBudget()
    a1 = lam.layer_sizes[0] if lam.layer_sizes else 0
    b1 = gam.layer_sizes[0] if gam.layer_sizes else 0
    common = dict(p=lam.p, mode=mode, dim_lambda=lam.dim, dim_gamma=gam.dim)
    if a1 < b1:
        return TestReport(verdict=NO_SURJECTION, rank_short_circuit=True, **common)
    if b1 == 0:
        # the zero algebra is an image of anything
        return TestReport(verdict=SURJECTION_SOME_EXT, **common)

    if mode == "presentation":
        if presentation is None:
            raise NotMinimalGeneratingSet("presentation mode requires a presentation")
        if len(presentation.generator_names) != a1:
            raise NotMinimalGeneratingSet(
                f"presentation has {len(presentation.generator_names)} generators, "
                f"but the source algebra has rank {a1}"
            )
        rel = build_presentation_ideal(presentation, gam, relator_subset)
    elif mode == "structure":
        rel = build_structure_ideal(lam, gam)
    else:
        raise ValueError(f"unknown mode {mode!r}")

    minors = maximal_minors(rel)
    tested = 0
    in_radical = 0
    for minor in minors:
        tested += 1
        if radical_membership(minor, rel.ideal, budget):
            in_radical += 1
        else:
            return TestReport(
                verdict=SURJECTION_SOME_EXT,
                minors_total=len(minors),
                minors_tested=tested,
                minors_in_radical=in_radical,
                **common,
            )
    cert = None
    if certificate and minors:
        cert = least_power_in_ideal(minors[0], rel.ideal, 16, budget, with_cofactors=True)
    return TestReport(
        verdict=NO_SURJECTION,
        minors_total=len(minors),
        minors_tested=tested,
        minors_in_radical=in_radical,
        certificate=cert,
        **common,
    )


def quotient_candidates(G: FiniteGroup, H: FiniteGroup, p: int) -> list[FiniteGroup]:
    """Quotients Q of H that are not epimorphic images of G, deduplicated by
    invariant profile, ordered by (order, nilpotency index)."""
    return [Q for Q, _ in _candidate_iter(G, H, p)]


def _candidate_iter(G: FiniteGroup, H: FiniteGroup, p: int):
    if G.order != H.order:
        raise MixedOrders(f"|G| = {G.order} != |H| = {H.order}")
    G.require_p_group(p)
    H.require_p_group(p)
    annotated = []
    for idx, N in enumerate(normal_subgroups(H)):
        Q = quotient(H, N)
        annotated.append((Q.order, nilpotency_index(Q, p), idx, Q))
    annotated.sort(key=lambda rec: rec[:3])
    seen = set()
    for order, t, _, Q in annotated:
        key = (order, invariant_profile(Q, p).as_tuple())
        if key in seen:
            continue
        seen.add(key)
        if epimorphism_exists(G, Q):
            continue
        yield Q, t


def refined_geometric_test(
    G: FiniteGroup,
    H: FiniteGroup,
    p: int,
    mode: str = "presentation",
    budget: GroebnerBudget | None = None,
    max_level: int | None = None,
    forced_quotient: FiniteGroup | None = None,
    certificate: bool = False,
) -> TestReport:
    """Decide FG ≅ FH across all fields of characteristic p.

    Iterates candidate quotients Q of H (ascending order, then nilpotency
    index) and truncation levels l = 1 .. t-1; the first NoSurjection
    outcome yields NotIsomorphicAllFieldsCharP with witness (Q, l).  Clean
    exhaustion yields IsomorphicOverSomeFiniteField; exhaustion with
    skipped or budget-failed subtasks raises ResourceBudgetExceeded.
    """
    budget = budget or GroebnerBudget()
    if G.order != H.order:
        raise MixedOrders(f"|G| = {G.order} != |H| = {H.order}")
    G.require_p_group(p)
    H.require_p_group(p)

    presentation = G.presentation if mode == "presentation" else None
    if mode == "presentation":
        if presentation is None:
            raise NotMinimalGeneratingSet(f"{G.name} has no presentation")
        rank_g = G.subgroup_rank(frozenset(range(G.order)), p)
        if len(presentation.generator_names) != rank_g:
            raise NotMinimalGeneratingSet(
                f"{G.name}: presentation on {len(presentation.generator_names)} "
                f"generators, rank is {rank_g}"
            )

    if forced_quotient is not None:
        if not epimorphism_exists(H, forced_quotient):
            raise MixedOrders(f"{forced_quotient.name} is not an image of {H.name}")
        if epimorphism_exists(G, forced_quotient):
            raise MixedOrders(f"{forced_quotient.name} is an image of {G.name}")
        candidates = [(forced_quotient, nilpotency_index(forced_quotient, p))]
    else:
        candidates = _candidate_iter(G, H, p)

    incomplete = False
    for Q, t in candidates:
        top = t - 1
        capped = max_level is not None and max_level < top
        if capped:
            top = max_level
            incomplete = True
        for level in range(1, top + 1):
            lam = build_filtration(G, p, level)
            gam = build_filtration(Q, p, level)
            try:
                report = naive_geometric_test(
                    lam, gam, mode, budget, presentation, certificate=certificate
                )
            except ResourceBudgetExceeded:
                incomplete = True
                continue
            if report.verdict == NO_SURJECTION:
                return TestReport(
                    verdict=NOT_ISOMORPHIC,
                    p=p,
                    mode=mode,
                    dim_lambda=lam.dim,
                    dim_gamma=gam.dim,
                    quotient_used=Q.name,
                    quotient_order=Q.order,
                    level=level,
                    minors_total=report.minors_total,
                    minors_tested=report.minors_tested,
                    minors_in_radical=report.minors_in_radical,
                    rank_short_circuit=report.rank_short_circuit,
                    certificate=report.certificate,
                )
    if incomplete:
        raise ResourceBudgetExceeded(
            "refined test exhausted its candidates with skipped subtasks; inconclusive"
        )
    return TestReport(
        verdict=ISOMORPHIC_SOME_FIELD,
        p=p,
        mode=mode,
        dim_lambda=G.order - 1,
        dim_gamma=H.order - 1,
    )


def report_document(report: TestReport) -> dict:
    """JSON-serializable, deterministic report form."""
    doc = {
        "verdict": report.verdict,
        "p": report.p,
        "mode": report.mode,
        "dim_lambda": report.dim_lambda,
        "dim_gamma": report.dim_gamma,
        "quotient": report.quotient_used,
        "quotient_order": report.quotient_order,
        "level": report.level,
        "minors": {
            "total": report.minors_total,
            "tested": report.minors_tested,
            "in_radical": report.minors_in_radical,
        },
        "rank_short_circuit": report.rank_short_circuit,
    }
    if report.certificate is not None:
        from .poly import render_poly

        cert = {"exponent": report.certificate.exponent}
        if report.certificate.cofactors is not None:
            cert["cofactors"] = [render_poly(c) for c in report.certificate.cofactors]
        doc["certificate"] = cert
    else:
        doc["certificate"] = None
    return doc
