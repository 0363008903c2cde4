"""Constructors for small groups given by explicit element operations.

These exist so that the committed group fixtures can be regenerated from
first principles (see scripts/make_fixtures.py) and so the tests can build
small groups without touching fixture files.
"""

from __future__ import annotations

import itertools

from .groups import FiniteGroup


def group_from_op(elements, op, name, generators) -> FiniteGroup:
    """Build a table group from a finite set of hashable elements.

    The identity is located automatically and moved to index 0; the other
    elements keep their relative order.
    """
    elems = list(elements)
    identity = None
    for e in elems:
        if all(op(e, x) == x and op(x, e) == x for x in elems):
            identity = e
            break
    if identity is None:
        raise ValueError("no identity element")
    ordering = [identity] + [e for e in elems if e != identity]
    index = {e: i for i, e in enumerate(ordering)}
    n = len(ordering)
    table = [[index[op(ordering[i], ordering[j])] for j in range(n)] for i in range(n)]
    return FiniteGroup(name, n, table, [index[g] for g in generators])


def cyclic(n: int, name: str | None = None) -> FiniteGroup:
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    gens = [1] if n > 1 else []
    return FiniteGroup(name or f"C{n}", n, table, gens)


def abelian(invariants, name: str | None = None) -> FiniteGroup:
    """Direct product of cyclic groups C_{d1} x C_{d2} x ..."""
    dims = tuple(invariants)
    elems = list(itertools.product(*[range(d) for d in dims]))

    def op(x, y):
        return tuple((a + b) % d for a, b, d in zip(x, y, dims))

    gens = []
    for i, d in enumerate(dims):
        if d > 1:
            gens.append(tuple(1 if j == i else 0 for j in range(len(dims))))
    label = name or "x".join(f"C{d}" for d in dims)
    return group_from_op(elems, op, label, gens)


def direct_product(G: FiniteGroup, H: FiniteGroup, name: str | None = None) -> FiniteGroup:
    n, m = G.order, H.order
    table = [
        [
            (G.mul(a, c)) * m + H.mul(b, d)
            for c in range(n)
            for d in range(m)
        ]
        for a in range(n)
        for b in range(m)
    ]
    gens = [g * m for g in G.generators] + [h for h in H.generators]
    return FiniteGroup(name or f"{G.name}x{H.name}", n * m, table, gens)


def metacyclic2(m: int, r: int, s: int, name: str, generators=None) -> FiniteGroup:
    """The group < a, b | a^m = 1, b^2 = a^s, b^-1 a b = a^r > of order 2m.

    Covers the dihedral (r = -1, s = 0), generalized quaternion
    (r = -1, s = m/2), semidihedral (r = m/2 - 1, s = 0) and modular
    (r = m/2 + 1, s = 0) families of 2-groups.
    """
    if pow(r, 2, m) != 1 or (s * (r - 1)) % m != 0:
        raise ValueError("inconsistent metacyclic parameters")
    elems = [(i, j) for i in range(m) for j in range(2)]

    def op(x, y):
        i1, j1 = x
        i2, j2 = y
        i = (i1 + i2 * pow(r, j1, m)) % m
        if j1 + j2 == 2:
            i = (i + s) % m
        return (i, (j1 + j2) % 2)

    gens = generators or [(1, 0), (0, 1)]
    return group_from_op(elems, op, name, gens)


def dihedral(m: int, name: str | None = None) -> FiniteGroup:
    """Dihedral group of order 2m."""
    return metacyclic2(m, m - 1, 0, name or f"D{2*m}")


def quaternion(order: int, name: str | None = None) -> FiniteGroup:
    """Generalized quaternion group of order 2^k >= 8."""
    m = order // 2
    return metacyclic2(m, m - 1, m // 2, name or f"Q{order}")


def semidihedral(order: int, name: str | None = None) -> FiniteGroup:
    m = order // 2
    return metacyclic2(m, m // 2 - 1, 0, name or f"SD{order}")


def modular2(order: int, name: str | None = None) -> FiniteGroup:
    """Modular maximal-cyclic group of order 2^k >= 16."""
    m = order // 2
    return metacyclic2(m, m // 2 + 1, 0, name or f"M{order}")


def semidirect(N: FiniteGroup, H: FiniteGroup, action, name: str) -> FiniteGroup:
    """N : H where action(h) is a permutation list of N's indices."""
    acts = [action(h) for h in range(H.order)]
    elems = [(a, h) for a in range(N.order) for h in range(H.order)]

    def op(x, y):
        a, h = x
        b, k = y
        return (N.mul(a, acts[h][b]), H.mul(h, k))

    gens = [(g, 0) for g in N.generators] + [(0, g) for g in H.generators]
    return group_from_op(elems, op, name, gens)


def relabel(G: FiniteGroup, perm, name: str | None = None) -> FiniteGroup:
    """Conjugate the table by a permutation fixing index 0."""
    n = G.order
    if perm[0] != 0 or sorted(perm) != list(range(n)):
        raise ValueError("perm must be a permutation fixing 0")
    inv = [0] * n
    for i, x in enumerate(perm):
        inv[x] = i
    table = [[perm[G.mul(inv[i], inv[j])] for j in range(n)] for i in range(n)]
    return FiniteGroup(
        name or G.name, n, table, [perm[g] for g in G.generators], G.presentation
    )
