"""Truncated augmentation-ideal algebras of modular group algebras.

For a p-group G this builds Delta(F_pG)/Delta^(l+1)(F_pG) with a filtered
basis chosen from products of generator differences (g - 1), organized in
weight layers, together with its structure constants.  Everything is exact
over F_p and deterministic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import BadLevel, DimensionMismatch
from .groups import FiniteGroup
from .linalg import echelonize
from .field import FieldSpec

_LETTERS = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"


@dataclass(frozen=True)
class FilteredAlgebra:
    """A filtered basis plus structure constants for a nilpotent algebra."""

    p: int
    dim: int
    layer_sizes: tuple[int, ...]
    basis_labels: tuple[str, ...]
    structure_constants: dict
    source: str
    group: FiniteGroup | None = field(default=None, compare=False, repr=False)
    level: int = 0

    @property
    def weights(self) -> tuple[int, ...]:
        out = []
        for w, size in enumerate(self.layer_sizes, start=1):
            out.extend([w] * size)
        return tuple(out)

    def weight_of(self, index: int) -> int:
        return self.weights[index]

    def multiply(self, u, v):
        return multiply(self, u, v)

    def basis_vector(self, index: int) -> list[int]:
        vec = [0] * self.dim
        vec[index] = 1
        return vec


def multiply(algebra: FilteredAlgebra, u, v) -> list[int]:
    """Bilinear product of coefficient vectors via structure constants."""
    if len(u) != algebra.dim or len(v) != algebra.dim:
        raise DimensionMismatch(
            f"vectors must have length {algebra.dim}, got {len(u)}, {len(v)}"
        )
    p = algebra.p
    result = [0] * algebra.dim
    sc = algebra.structure_constants
    for i, ci in enumerate(u):
        if ci % p == 0:
            continue
        for j, cj in enumerate(v):
            if cj % p == 0:
                continue
            entry = sc.get((i, j))
            if not entry:
                continue
            f = ci * cj
            for k, c in entry:
                result[k] = (result[k] + f * c) % p
    return result


def _group_algebra_product(table: np.ndarray, u: np.ndarray, v: np.ndarray, p: int) -> np.ndarray:
    n = table.shape[0]
    out = np.zeros(n, dtype=np.int64)
    np.add.at(out, table.reshape(-1), np.outer(u, v).reshape(-1))
    return out % p


def _augmentation_power_chain(G: FiniteGroup, p: int) -> list[np.ndarray]:
    """Echelonized bases of Delta^1, Delta^2, ... down to the zero ideal."""
    n = G.order
    delta = np.zeros((n - 1, n), dtype=np.int64)
    for g in range(1, n):
        delta[g - 1, g] = 1
        delta[g - 1, 0] = p - 1
    e1, _, _ = echelonize(delta, FieldSpec(p))
    e1 = e1[~np.all(e1 == 0, axis=1)]
    chain = [e1]
    while chain[-1].shape[0] > 0:
        prev = chain[-1]
        products = [
            _group_algebra_product(G.table, u, v, p) for u in prev for v in e1
        ]
        if products:
            mat = np.array(products, dtype=np.int64)
            ech, rank, _ = echelonize(mat, FieldSpec(p))
            chain.append(ech[:rank])
        else:
            chain.append(np.zeros((0, n), dtype=np.int64))
    return chain


def nilpotency_index(G: FiniteGroup, p: int) -> int:
    """Minimal t with Delta^t(F_pG) = 0."""
    G.require_p_group(p)
    chain = _augmentation_power_chain(G, p)
    return len(chain)


def _generator_weights(G: FiniteGroup, chain: list[np.ndarray], p: int) -> list[tuple[int, int]]:
    """(generator index, weight) for each non-identity listed generator, where
    weight is the largest k with g - 1 in Delta^k."""
    n = G.order
    field = FieldSpec(p)
    out = []
    for g in G.generators:
        if g == 0:
            continue
        vec = np.zeros(n, dtype=np.int64)
        vec[g] = 1
        vec[0] = p - 1
        weight = 0
        for k, basis in enumerate(chain, start=1):
            if basis.shape[0] == 0:
                break
            stacked = np.concatenate([basis, vec.reshape(1, -1)])
            if echelonize(stacked, field)[1] == basis.shape[0]:
                weight = k
            else:
                break
        out.append((g, weight))
    return out


def build_filtration(G: FiniteGroup, p: int, level: int) -> FilteredAlgebra:
    """Filtered basis and structure constants of Delta(F_pG)/Delta^(level+1).

    Basis candidates for weight k are the products of generator differences
    (g1-1)^e1 (g2-1)^e2 ... in listed-generator order with 0 <= e_i < p and
    total weight k, tried in descending lexicographic order of the exponent
    vectors; if these do not fill a layer, products of already-chosen basis
    elements are appended.  The choice is deterministic but not canonical;
    downstream verdicts must not depend on it.
    """
    G.require_p_group(p)
    if level < 1:
        raise BadLevel(f"truncation level must be >= 1, got {level}")
    field = FieldSpec(p)
    n = G.order
    chain = _augmentation_power_chain(G, p)
    t = len(chain)  # Delta^t = 0
    depth = min(level, t - 1)

    gen_weights = _generator_weights(G, chain, p)
    letters = {g: _LETTERS[i] for i, (g, _) in enumerate(gen_weights)}

    # generator difference vectors
    diffs = {}
    for g, _ in gen_weights:
        vec = np.zeros(n, dtype=np.int64)
        vec[g] = 1
        vec[0] = p - 1
        diffs[g] = vec

    # Jennings-style monomial candidates bucketed by weight
    candidates_by_weight: dict[int, list[tuple[str, np.ndarray]]] = {k: [] for k in range(1, depth + 1)}
    exps = sorted(
        itertools.product(range(p), repeat=len(gen_weights)), reverse=True
    )
    for e in exps:
        weight = sum(ei * w for ei, (_, w) in zip(e, gen_weights))
        if not 1 <= weight <= depth:
            continue
        vec = None
        label_parts = []
        for ei, (g, _) in zip(e, gen_weights):
            for _ in range(ei):
                vec = diffs[g] if vec is None else _group_algebra_product(G.table, vec, diffs[g], p)
            if ei:
                label_parts.append(letters[g] if ei == 1 else f"{letters[g]}^{ei}")
        candidates_by_weight[weight].append(("".join(label_parts), vec))

    zero_basis = np.zeros((0, n), dtype=np.int64)
    labels: list[str] = []
    vectors: list[np.ndarray] = []
    layer_sizes: list[int] = []
    for k in range(1, depth + 1):
        below = chain[k] if k < len(chain) else zero_basis
        target = chain[k - 1].shape[0] - below.shape[0]
        chosen_vecs: list[np.ndarray] = []
        chosen_labels: list[str] = []

        def try_candidate(label: str, vec: np.ndarray):
            if len(chosen_vecs) >= target:
                return
            stacked = np.concatenate(
                [below] + [v.reshape(1, -1) for v in chosen_vecs] + [vec.reshape(1, -1)]
            )
            if echelonize(stacked, field)[1] == below.shape[0] + len(chosen_vecs) + 1:
                chosen_vecs.append(vec)
                chosen_labels.append(label)

        for label, vec in candidates_by_weight.get(k, []):
            try_candidate(label, vec)
        if len(chosen_vecs) < target:
            # fall back to products of already-chosen elements with weight-1
            # generator differences; these always span the next layer
            for i, u in enumerate(vectors):
                wu = next(w for w, s in enumerate(itertools.accumulate(layer_sizes), 1) if i < s)
                for glabel, gvec in candidates_by_weight.get(k - wu, []):
                    if len(chosen_vecs) >= target:
                        break
                    try_candidate(labels[i] + glabel, _group_algebra_product(G.table, u, gvec, p))
        if len(chosen_vecs) < target:
            raise AssertionError(f"could not complete filtered basis at weight {k}")
        labels.extend(chosen_labels)
        vectors.extend(chosen_vecs)
        layer_sizes.append(target)

    while layer_sizes and layer_sizes[-1] == 0:
        layer_sizes.pop()
    dim = len(vectors)

    # one echelonized solver for coordinates in [filtered basis | Delta^(depth+1)]
    truncation = chain[depth] if depth < len(chain) else zero_basis
    sc: dict[tuple[int, int], tuple[tuple[int, int], ...]] = {}
    if dim:
        basis_matrix = np.concatenate([np.array(vectors), truncation]) if truncation.shape[0] else np.array(vectors)
        aug = np.concatenate([basis_matrix.T, np.eye(n, dtype=np.int64)], axis=1)
        R, _, pivots = echelonize(aug, field)
        m = basis_matrix.shape[0]
        transform = R[:, m:]
        pivot_row = {c: r for r, c in enumerate(pivots) if c < m}
        for i, u in enumerate(vectors):
            for j, v in enumerate(vectors):
                prod = _group_algebra_product(G.table, u, v, p)
                y = (transform @ prod) % p
                entry = tuple(
                    (k, int(y[pivot_row[k]]))
                    for k in range(dim)
                    if k in pivot_row and y[pivot_row[k]] % p != 0
                )
                if entry:
                    sc[(i, j)] = entry

    return FilteredAlgebra(
        p=p,
        dim=dim,
        layer_sizes=tuple(layer_sizes),
        basis_labels=tuple(labels),
        structure_constants=sc,
        source=f"{G.name} mod Delta^{level + 1}",
        group=G,
        level=level,
    )


def algebra_document(algebra: FilteredAlgebra) -> dict:
    """JSON-serializable dump: layers, labels, sparse structure constants."""
    triples = [
        [i, j, [[k, c] for k, c in entry]]
        for (i, j), entry in sorted(algebra.structure_constants.items())
    ]
    return {
        "p": algebra.p,
        "dim": algebra.dim,
        "level": algebra.level,
        "source": algebra.source,
        "layer_sizes": list(algebra.layer_sizes),
        "basis_labels": list(algebra.basis_labels),
        "structure_constants": triples,
    }
