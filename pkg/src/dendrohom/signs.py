"""Vertex labelling of planar trees and the two sign conventions.

A planar order on a tree is a tuple indexed by vertex id holding that
vertex's input edges in the chosen order.  The order a ``PlanarTree`` is
stored with is its *standard* order.
"""

from __future__ import annotations

import itertools
from typing import Iterator, NamedTuple, Sequence

from . import kernels
from .trees import Face, PlanarTree, TreeMorphism, _from_annotated, apply_face, elementary_faces

PlanarOrder = tuple

__all__ = [
    "PlanarOrder",
    "standard_order",
    "planar_orders",
    "is_planar_order",
    "planar_labelling",
    "edge_positions",
    "face_sign",
    "planar_structure_sign",
    "permutation_sign",
    "transfer_planar",
    "realize",
    "CoherenceReport",
    "sign_coherence",
    "sign_coherence_literal",
    "coherence_holds",
]


def standard_order(t: PlanarTree) -> PlanarOrder:
    return t.vertex_inputs


def planar_orders(t: PlanarTree) -> Iterator[PlanarOrder]:
    """Every planar order on the underlying tree of ``t``."""
    return itertools.product(*(itertools.permutations(ins) for ins in t.vertex_inputs))


def is_planar_order(t: PlanarTree, p: Sequence) -> bool:
    return len(p) == t.n_vertices and all(
        sorted(p[v]) == sorted(t.vertex_inputs[v]) for v in range(t.n_vertices)
    )


def _walk(t: PlanarTree, p: PlanarOrder):
    """Edges in pre-order for the planar order ``p``."""
    out = []
    stack = [0]
    while stack:
        e = stack.pop()
        out.append(e)
        v = t.edge_top[e]
        if v >= 0:
            stack.extend(reversed(p[v]))
    return out


def edge_positions(t: PlanarTree, p: PlanarOrder | None = None) -> list[int]:
    """Position of every edge in the pre-order walk induced by ``p``."""
    if p is None:
        return list(range(t.n_edges))
    pos = [0] * t.n_edges
    for i, e in enumerate(_walk(t, p)):
        pos[e] = i
    return pos


def planar_labelling(t: PlanarTree, p: PlanarOrder | None = None) -> tuple[int, ...]:
    """Label of each vertex: root vertex 0, then leftmost branches first.

    For the standard order this is the identity, since vertex ids are
    already assigned in planar pre-order.
    """
    if p is None:
        return tuple(range(t.n_vertices))
    labels = [0] * t.n_vertices
    k = 0
    for e in _walk(t, p):
        v = t.edge_top[e]
        if v >= 0:
            labels[v] = k
            k += 1
    return tuple(labels)


def face_sign(t: PlanarTree, f: Face, p: PlanarOrder | None = None) -> int:
    """Sign attached to the elementary face ``f`` of the planar tree ``(t, p)``.

    Bottom faces get +1; an inner edge whose upper vertex has label k gets
    (-1)^k; a top vertex with label k gets (-1)^(k+1).  On a corolla this
    gives -1 for the root-edge inclusion and +1 for every leaf.
    """
    if f not in elementary_faces(t):
        raise ValueError(f"{f} is not an elementary face of {t}")
    if f.kind == "bottom":
        return 1
    labels = planar_labelling(t, p)
    if f.kind == "inner":
        k = labels[t.edge_top[f.index]]
        return -1 if k % 2 else 1
    k = labels[f.index]
    return 1 if k % 2 else -1


def permutation_sign(perm: Sequence[int]) -> int:
    """Sign of a permutation given as a sequence of distinct sortable values."""
    sign = 1
    seen = [False] * len(perm)
    index = {v: i for i, v in enumerate(sorted(perm))}
    target = [index[v] for v in perm]
    for i in range(len(target)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = target[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def planar_structure_sign(t: PlanarTree, p_prime: PlanarOrder, p: PlanarOrder) -> int:
    """Sign of the relabelling carrying the ``p_prime`` labels to the ``p`` labels."""
    if not (is_planar_order(t, p_prime) and is_planar_order(t, p)):
        raise ValueError("planar orders do not belong to the same tree")
    lp = planar_labelling(t, p_prime)
    lq = planar_labelling(t, p)
    perm = [0] * t.n_vertices
    for v in range(t.n_vertices):
        perm[lp[v]] = lq[v]
    return permutation_sign(perm)


def transfer_planar(m: TreeMorphism, p: PlanarOrder | None = None) -> PlanarOrder:
    """Pull a planar order on ``m.target`` back along ``m``.

    The inputs of a source vertex land on pairwise incomparable edges of the
    target (or on one edge, for an identity), so ordering them by their
    pre-order position under ``p`` is the induced planar order.
    """
    pos = edge_positions(m.target, p)
    src = m.source
    return tuple(
        tuple(sorted(ins, key=lambda e: pos[m.edges[e]])) for ins in src.vertex_inputs
    )


def realize(t: PlanarTree, p: PlanarOrder) -> tuple[PlanarTree, TreeMorphism]:
    """The planar tree ``(t, p)`` as a stored tree, with an isomorphism to ``t``."""

    def build(e):
        v = t.edge_top[e]
        if v < 0:
            return (e, None)
        return (e, tuple(build(c) for c in p[v]))

    tree, tags = _from_annotated(build(0))
    return tree, TreeMorphism(tree, t, tags)


# ------------------------------------------------------- sign coherence
class CoherenceReport(NamedTuple):
    """Exhaustive check of the face-sign/planar-sign coherence identity.

    ``pairs`` counts the ordered ``(p', p, face)`` triples covered and
    ``violations`` those where the identity fails.
    """

    tree: str
    orders: int
    faces: int
    pairs: int
    violations: int
    backend: str

    @property
    def holds(self) -> bool:
        return self.violations == 0


def _kernel_input(t: PlanarTree):
    children = [[t.edge_top[e] for e in ins] for ins in t.vertex_inputs]
    faces = []
    for f in elementary_faces(t):
        if f.kind == "inner":
            faces.append((t.edge_top[f.index], 0))
        elif f.kind == "top":
            faces.append((f.index, 1))
        else:
            faces.append((0, 2))
    return children, faces


def sign_coherence(t: PlanarTree, counts=None) -> CoherenceReport:
    """``sgn(p',p)·sgn_p(f) = sgn(p'_f,p_f)·sgn_p'(f)`` over all pairs and faces.

    Both sides factor through ``g(p) = sgn(p0,p)·sgn_p(f)·sgn(p0_f,p_f)``,
    since ``sgn(p',p) = sgn(p0,p')·sgn(p0,p)``; the identity holds for a
    pair exactly when ``g(p') = g(p)``.  With ``n+`` and ``n-`` orders on
    each side of a face, ``2·n+·n-`` ordered pairs violate it.
    """
    counts = counts or kernels.coherence_counts
    backend = "python" if counts is kernels.coherence_counts_py else kernels.BACKEND
    children, faces = _kernel_input(t)
    orders, tallies = counts(children, faces)
    violations = sum(2 * a * b for a, b in tallies)
    return CoherenceReport(t.key, orders, len(faces), orders * orders * len(faces), violations, backend)


def coherence_holds(t: PlanarTree, p_prime: PlanarOrder, p: PlanarOrder, f: Face) -> bool:
    """The identity for one pair and one face, straight from the definitions."""
    _, delta = apply_face(t, f)
    lhs = planar_structure_sign(t, p_prime, p) * face_sign(t, f, p)
    rhs = planar_structure_sign(delta.source, transfer_planar(delta, p_prime), transfer_planar(delta, p))
    return lhs == rhs * face_sign(t, f, p_prime)


def sign_coherence_literal(t: PlanarTree) -> CoherenceReport:
    """Pair-by-pair version of :func:`sign_coherence`; small trees only."""
    orders = list(planar_orders(t))
    faces = elementary_faces(t)
    bad = sum(
        1
        for f in faces
        for q in orders
        for p in orders
        if not coherence_holds(t, q, p, f)
    )
    return CoherenceReport(t.key, len(orders), len(faces), len(orders) ** 2 * len(faces), bad, "literal")
