"""Finite presentations of the dendroidal sets used in the computations.

Every space answers three questions about a tree shape ``S``: which
dendrices live over it (:meth:`DendroidalSpace.elements`), how a tree
morphism ``S' → S`` pulls them back (:meth:`DendroidalSpace.pull`), and
which shapes can carry dendrices in a given degree
(:meth:`DendroidalSpace.shapes`).  Payloads are plain hashable values:
edge maps for representables and their subobjects, planar orders for
``A∞``, simplices for simplicial images.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Hashable, NamedTuple, Sequence

from .signs import PlanarOrder, planar_labelling, permutation_sign, planar_orders, realize, transfer_planar
from .sset import FiniteSimplicialSet, Simplex
from .trees import (
    Face,
    PlanarTree,
    TreeMorphism,
    apply_face,
    automorphisms,
    canonical_form,
    collapse_unary,
    elementary_faces,
    enumerate_trees,
    factors_through,
    is_canonical,
    isomorphisms,
    linear_tree,
    subfaces,
)

__all__ = [
    "Bounds",
    "BoundsError",
    "TorsionGeneratorError",
    "Dendrex",
    "GeneratorId",
    "DendroidalSpace",
    "Representable",
    "FaceUnion",
    "Boundary",
    "Horn",
    "SimplicialImage",
    "AInfinity",
    "hom_set",
    "dendrices",
    "act",
    "nondegenerate_factorization",
    "iso_classes",
    "canonical_generator",
]


class BoundsError(ValueError):
    """Enumeration bounds do not cover what was asked for."""


class TorsionGeneratorError(RuntimeError):
    """An automorphism fixes a dendrex with odd planar sign.

    The quotient by the isomorphism relation would then make the class
    2-torsion; for normal dendroidal sets this cannot happen.
    """

    def __init__(self, shape: PlanarTree, payload):
        super().__init__(f"odd stabilizer on dendrex {payload!r} of shape {shape}")
        self.shape = shape
        self.payload = payload


class Bounds(NamedTuple):
    max_vertices: int | None = None
    max_arity: int | None = None


@dataclass(frozen=True)
class Dendrex:
    shape: PlanarTree
    payload: Hashable


@dataclass(frozen=True)
class GeneratorId:
    """Isomorphism class ``[T, p, x]`` with canonical shape and standard order."""

    shape: PlanarTree
    payload: Hashable
    degenerate: bool = field(default=False, compare=False)
    name: str = field(default="", compare=False)

    @property
    def degree(self) -> int:
        return self.shape.n_vertices

    def __str__(self):
        return self.name or f"{self.shape}|{self.payload}"


# --------------------------------------------------------------- hom sets
@lru_cache(maxsize=None)
def _faces_by_shape(t: PlanarTree) -> dict[str, list[TreeMorphism]]:
    out: dict[str, list[TreeMorphism]] = {}
    for m in subfaces(t):
        out.setdefault(canonical_form(m.source)[0].key, []).append(m)
    return out


@lru_cache(maxsize=2048)
def _hom_edges(s: PlanarTree, t: PlanarTree) -> tuple[tuple[int, ...], ...]:
    by_shape = _faces_by_shape(t)
    unary = [v for v in range(s.n_vertices) if s.arity(v) == 1]
    found = set()
    for r in range(len(unary) + 1):
        for drop in itertools.combinations(unary, r):
            s1, sigma = collapse_unary(s, drop)
            se = sigma.edges
            for delta in by_shape.get(canonical_form(s1)[0].key, ()):
                de = delta.edges
                for tau in isomorphisms(s1, delta.source):
                    # delta ∘ tau ∘ sigma on edges
                    dt = [de[x] for x in tau.edges]
                    found.add(tuple(dt[x] for x in se))
    return tuple(sorted(found))


def hom_set(s: PlanarTree, t: PlanarTree) -> list[TreeMorphism]:
    """All morphisms ``s → t``, built as faces ∘ iso ∘ degeneracies."""
    return [TreeMorphism(s, t, e) for e in _hom_edges(s, t)]


def _insert_unary(shape, count: int):
    """All shapes obtained by inserting ``count`` unary vertices on edges."""
    t = PlanarTree(shape)
    for combo in itertools.combinations_with_replacement(range(t.n_edges), count):
        extra = [0] * t.n_edges
        for e in combo:
            extra[e] += 1

        def build(e):
            v = t.edge_top[e]
            node = None if v < 0 else tuple(build(c) for c in t.vertex_inputs[v])
            for _ in range(extra[e]):
                node = (node,)
            return node

        yield build(0)


# ------------------------------------------------------------------ spaces
class DendroidalSpace:
    """Base class; subclasses implement ``elements``, ``pull`` and ``shapes``."""

    name = "space"
    #: whether an enumeration of generators needs a caller-supplied arity bound
    needs_bounds = False

    def __init__(self):
        self._elements: dict[PlanarTree, tuple] = {}
        self._generators: dict = {}
        self._reductions: dict = {}

    # -- to implement
    def _compute_elements(self, s: PlanarTree) -> tuple:
        raise NotImplementedError

    def pull(self, m: TreeMorphism, x):
        raise NotImplementedError

    def is_degenerate(self, s: PlanarTree, x) -> bool:
        raise NotImplementedError

    def factor_degenerate(self, s: PlanarTree, x) -> tuple[TreeMorphism, object]:
        raise NotImplementedError

    def shapes(self, n: int, bounds: Bounds | None = None, nondegenerate: bool = False):
        raise NotImplementedError

    # -- shared
    def elements(self, s: PlanarTree) -> tuple:
        if s not in self._elements:
            self._elements[s] = tuple(sorted(self._compute_elements(s), key=self.payload_key))
        return self._elements[s]

    def contains(self, s: PlanarTree, x) -> bool:
        return x in set(self.elements(s))

    def payload_key(self, x):
        return x

    def representatives(self, c: PlanarTree) -> list:
        """Minimal payload of each Aut(c)-orbit on the dendrices over ``c``."""
        reps, seen = [], set()
        auts = automorphisms(c)
        for x in self.elements(c):
            if x in seen:
                continue
            images = [(self.pull(a, x), a) for a in auts]
            seen.update(y for y, _ in images)
            if any(y == x and _vertex_sign(a) < 0 for y, a in images):
                raise TorsionGeneratorError(c, x)
            reps.append(min((y for y, _ in images), key=self.payload_key))
        return reps

    def reduce(self, shape: PlanarTree, x) -> tuple[PlanarTree, object, TreeMorphism]:
        """``(C, y, ψ)`` with C canonical, ψ: C → shape an iso and ψ*(x) = y minimal."""
        canon, phi = canonical_form(shape)
        back = phi.inverse()
        best_key, best = None, []
        for alpha in automorphisms(canon):
            psi = back @ alpha
            y = self.pull(psi, x)
            k = self.payload_key(y)
            if best_key is None or k < best_key:
                best_key, best = k, [(y, psi)]
            elif k == best_key:
                best.append((y, psi))
        if len({_vertex_sign(psi) for _, psi in best}) > 1:
            raise TorsionGeneratorError(canon, best[0][0])
        return canon, best[0][0], best[0][1]

    def payload_str(self, s: PlanarTree, x) -> str:
        return ",".join(map(str, x))

    def generator_name(self, s: PlanarTree, x) -> str:
        return f"{s}|{self.payload_str(s, x)}"

    def __repr__(self):
        return self.name


@lru_cache(maxsize=4096)
def _sibling_layout(t: PlanarTree):
    """Per edge: inputs of the vertex above, subtree key, and whether the subtree is rigid."""
    n = t.n_edges
    kids = [tuple(t.vertex_inputs[t.edge_top[e]]) if t.edge_top[e] >= 0 else () for e in range(n)]
    keys = [None] * n
    rigid = [True] * n
    for e in reversed(range(n)):
        keys[e] = "(" + " ".join(keys[c] for c in kids[e]) + ")" if t.edge_top[e] >= 0 else "e"
        ks = [keys[c] for c in kids[e]]
        rigid[e] = all(rigid[c] for c in kids[e]) and len(set(ks)) == len(ks)
    return kids, keys, rigid


@lru_cache(maxsize=4096)
def _sibling_runs(t: PlanarTree) -> tuple[tuple[int, ...], ...]:
    """Maximal runs (length ≥ 2) of adjacent isomorphic siblings of a canonical tree."""
    kids, keys, _ = _sibling_layout(t)
    runs = []
    for e in range(t.n_edges):
        cur = []
        for c in kids[e]:
            if cur and keys[c] != keys[cur[-1]]:
                if len(cur) > 1:
                    runs.append(tuple(cur))
                cur = []
            cur.append(c)
        if len(cur) > 1:
            runs.append(tuple(cur))
    return tuple(runs)


def _image_key(m: TreeMorphism):
    """The subobject an injective face picks out: its edges and operations."""
    src = m.source
    ops = frozenset(
        (m.edges[src.vertex_out[v]], frozenset(m.edges[e] for e in src.vertex_inputs[v]))
        for v in range(src.n_vertices)
    )
    return frozenset(m.edges), ops


def _vertex_sign(m: TreeMorphism) -> int:
    return permutation_sign(m.vertex_map())


class Representable(DendroidalSpace):
    """Ω[T]: dendrices over ``S`` are the tree morphisms ``S → T``."""

    def __init__(self, tree: PlanarTree):
        super().__init__()
        self.tree = tree
        self._orbits: dict[int, dict] = {}
        self.name = f"omega:{tree}"

    def _compute_elements(self, s):
        return _hom_edges(s, self.tree)

    def pull(self, m, x):
        return tuple(x[e] for e in m.edges)

    def is_degenerate(self, s, x):
        return len(set(x)) < len(x)

    def factor_degenerate(self, s, x):
        drop = [
            v
            for v in range(s.n_vertices)
            if s.arity(v) == 1 and x[s.vertex_inputs[v][0]] == x[s.vertex_out[v]]
        ]
        s1, sigma = collapse_unary(s, drop)
        y = [0] * s1.n_edges
        for e, e1 in enumerate(sigma.edges):
            y[e1] = x[e]
        return sigma, tuple(y)

    def _face_trees(self):
        return [m.source for m in subfaces(self.tree)]

    def reduce(self, shape, x):
        # Edge maps into T never agree on two sibling subtrees unless both
        # are degenerate copies, so sorting runs of isomorphic siblings by
        # their minimized payloads gives the orbit minimum; ties go to the
        # generic search, which also guards against torsion.
        canon, phi = canonical_form(shape)
        back = phi.inverse()
        z = self.pull(back, x)
        kids, keys, rigid = _sibling_layout(canon)
        end = canon.edge_end

        def best(e):
            if rigid[e]:
                return z[e : end[e]], range(e, end[e])
            seq, order = [z[e]], [e]
            run, run_key = [], None
            for c in kids[e] + (None,):
                k = None if c is None else keys[c]
                if run and k != run_key:
                    run.sort(key=lambda r: r[0])
                    if any(a[0] == b[0] for a, b in zip(run, run[1:])):
                        return None
                    for s_, o in run:
                        seq.extend(s_)
                        order.extend(o)
                    run = []
                if c is None:
                    break
                sub = best(c)
                if sub is None:
                    return None
                run.append(sub)
                run_key = k
            return tuple(seq), order

        found = best(0)
        if found is None:
            return super().reduce(shape, x)
        y, order = found
        return canon, tuple(y), back @ TreeMorphism(canon, canon, tuple(order))

    def _subface_images(self) -> list[TreeMorphism]:
        """Injective faces into T, one per image."""
        out, seen = [], set()
        for m in subfaces(self.tree):
            k = _image_key(m)
            if k not in seen:
                seen.add(k)
                out.append(m)
        return out

    def _orbit_table(self, n: int) -> dict:
        # A dendrex factors uniquely as delta ∘ tau ∘ sigma with delta an
        # injective face; its orbit is fixed by the image of delta and the
        # multiset of edges of delta.source that sigma duplicates, since an
        # injectively labelled tree has no automorphisms.
        table = self._orbits.get(n)
        if table is not None:
            return table
        table = {}
        for delta in self._subface_images():
            src = delta.source
            k = n - src.n_vertices
            if k < 0:
                continue
            for combo in itertools.combinations_with_replacement(range(src.n_edges), k):
                extra = [0] * src.n_edges
                for e in combo:
                    extra[e] += 1
                labels: list[int] = []

                def build(e):
                    labels.extend([delta.edges[e]] * (extra[e] + 1))
                    v = src.edge_top[e]
                    node = None if v < 0 else tuple(build(c) for c in src.vertex_inputs[v])
                    for _ in range(extra[e]):
                        node = (node,)
                    return node

                node = build(0)
                canon, y, _ = self.reduce(PlanarTree(node), tuple(labels))
                table.setdefault(canon, set()).add(y)
        table = {c: sorted(ys, key=self.payload_key) for c, ys in table.items()}
        self._orbits[n] = table
        return table

    def representatives(self, c):
        return list(self._orbit_table(c.n_vertices).get(c, ()))

    def shapes(self, n, bounds=None, nondegenerate=False):
        out = set()
        for f in self._face_trees():
            k = n - f.n_vertices
            if k < 0 or (nondegenerate and k > 0):
                continue
            for shape in _insert_unary(canonical_form(f)[0].shape, k):
                out.add(canonical_form(PlanarTree(shape))[0])
        return sorted(out)


class FaceUnion(Representable):
    """The union of the images of some elementary faces of ``T`` inside Ω[T]."""

    def __init__(self, tree: PlanarTree, faces: Sequence[Face], name: str | None = None):
        super().__init__(tree)
        valid = elementary_faces(tree)
        for f in faces:
            if f not in valid:
                raise ValueError(f"{f} is not an elementary face of {tree}")
        self.faces = tuple(faces)
        self._monos = [apply_face(tree, f)[1] for f in self.faces]
        self.name = name or f"union:{tree}:{'+'.join(map(str, faces))}"

    def _compute_elements(self, s):
        return tuple(
            x
            for x in _hom_edges(s, self.tree)
            if any(factors_through(TreeMorphism(s, self.tree, x), d) for d in self._monos)
        )

    def _subface_images(self):
        out, seen = [], set()
        for d in self._monos:
            for m in subfaces(d.source):
                c = d @ m
                k = _image_key(c)
                if k not in seen:
                    seen.add(k)
                    out.append(c)
        return out

    def _face_trees(self):
        out = []
        for d in self._monos:
            out.extend(m.source for m in subfaces(d.source))
        return out


def Boundary(tree: PlanarTree) -> FaceUnion:
    """∂Ω[T]: union of the images of all elementary faces."""
    return FaceUnion(tree, elementary_faces(tree), name=f"boundary:{tree}")


def Horn(tree: PlanarTree, face: Face) -> FaceUnion:
    """Λ^f[T]: union of the images of all elementary faces other than ``f``."""
    faces = elementary_faces(tree)
    if face not in faces:
        raise ValueError(f"{face} is not an elementary face of {tree}")
    return FaceUnion(tree, [g for g in faces if g != face], name=f"horn:{tree}:{face}")


class SimplicialImage(DendroidalSpace):
    """``i_!S`` for a finite simplicial set: supported on linear trees.

    Edge ``j`` of ``L_n`` (counted from the root) is vertex ``j`` of ``[n]``.
    """

    def __init__(self, sset: FiniteSimplicialSet, name: str = "simplicial"):
        super().__init__()
        self.sset = sset
        self.name = name

    def _compute_elements(self, s):
        if not s.is_linear():
            return ()
        return self.sset.simplices(s.n_vertices)

    def pull(self, m, x):
        return self.sset.pull(m.edges, x)

    def is_degenerate(self, s, x):
        return x.is_degenerate()

    def factor_degenerate(self, s, x):
        k = max(x.map)
        sigma = TreeMorphism(s, linear_tree(k), x.map)
        return sigma, Simplex(x.name, tuple(range(k + 1)))

    def payload_key(self, x):
        return (x.name, x.map)

    def payload_str(self, s, x):
        return str(x)

    def shapes(self, n, bounds=None, nondegenerate=False):
        if nondegenerate and not self.sset.nondegenerate(n):
            return []
        if not self.sset.dims:
            return []
        return [linear_tree(n)]


class AInfinity(DendroidalSpace):
    """The presheaf of planar structures (the nerve of the associative operad)."""

    name = "ainfty"
    needs_bounds = True

    def __init__(self):
        super().__init__()
        self._tables: dict[PlanarTree, dict] = {}

    def _compute_elements(self, s):
        return tuple(planar_orders(s))

    def pull(self, m, x):
        return transfer_planar(m, x)

    def is_degenerate(self, s, x):
        return any(len(ins) == 1 for ins in s.vertex_inputs)

    def factor_degenerate(self, s, x):
        drop = [v for v in range(s.n_vertices) if s.arity(v) == 1]
        s1, sigma = collapse_unary(s, drop)
        y = [()] * s1.n_vertices
        for v in range(s.n_vertices):
            if v in drop:
                continue
            v1 = s1.edge_top[sigma.edges[s.vertex_out[v]]]
            y[v1] = tuple(sigma.edges[e] for e in x[v])
        return sigma, tuple(y)

    def payload_str(self, s, x):
        return realize(s, x)[0].key

    def _table(self, c: PlanarTree) -> dict:
        # realized planar tree -> (minimal order on c, planar iso onto (c, order))
        table = self._tables.get(c)
        if table is None:
            table = {}
            for q in planar_orders(c):
                r, rho = realize(c, q)
                if r.key not in table:
                    table[r.key] = (q, rho)
            self._tables[c] = table
        return table

    def representatives(self, c):
        return sorted(q for q, _ in self._table(c).values())

    def reduce(self, shape, x):
        # the action on planar orders is free, so the planar isomorphism is unique
        canon, _ = canonical_form(shape)
        r, rho = realize(shape, x)
        y, rho_c = self._table(canon)[r.key]
        return canon, y, rho @ rho_c.inverse()

    def generator_name(self, s, x):
        return self.payload_str(s, x)

    def shapes(self, n, bounds=None, nondegenerate=False):
        if bounds is None or bounds.max_arity is None:
            raise BoundsError("A∞ generators need an explicit max_arity bound")
        trees = enumerate_trees(n, bounds.max_arity, "iso")
        if nondegenerate:
            trees = [t for t in trees if all(len(i) != 1 for i in t.vertex_inputs)]
        return trees


# ------------------------------------------------------ functional surface
def dendrices(x: DendroidalSpace, s: PlanarTree) -> list[Dendrex]:
    return [Dendrex(s, p) for p in x.elements(s)]


def act(space: DendroidalSpace, m: TreeMorphism, x: Dendrex) -> Dendrex:
    """``m*(x)`` for ``m: S' → S`` and ``x`` over ``S``."""
    if m.target != x.shape:
        raise TypeError(f"morphism into {m.target} cannot act on a dendrex over {x.shape}")
    return Dendrex(m.source, space.pull(m, x.payload))


def nondegenerate_factorization(space: DendroidalSpace, x: Dendrex) -> tuple[TreeMorphism, Dendrex]:
    """``x = σ*(x#)`` with σ a composite of degeneracies and ``x#`` non-degenerate."""
    if not space.is_degenerate(x.shape, x.payload):
        return TreeMorphism.identity(x.shape), x
    sigma, y = space.factor_degenerate(x.shape, x.payload)
    return sigma, Dendrex(sigma.target, y)


@lru_cache(maxsize=65536)
def _std_labels(t: PlanarTree):
    return planar_labelling(t)


def _relation_sign(psi: TreeMorphism, p: PlanarOrder | None) -> int:
    """sgn(p0, ψ*p) for an isomorphism ψ: C → S, p0 the standard order of C."""
    labels = planar_labelling(psi.target, p) if p is not None else _std_labels(psi.target)
    return permutation_sign([labels[w] for w in psi.vertex_map()])


def _make_generator(space: DendroidalSpace, shape: PlanarTree, payload) -> GeneratorId:
    key = (shape, payload)
    g = space._generators.get(key)
    if g is None:
        g = space._generators[key] = GeneratorId(
            shape,
            payload,
            space.is_degenerate(shape, payload),
            space.generator_name(shape, payload),
        )
    return g


def iso_classes(
    space: DendroidalSpace,
    n: int,
    bounds: Bounds | None = None,
    nondegenerate: bool = False,
) -> list[GeneratorId]:
    """One generator per isomorphism class of dendrices with ``n`` vertices."""
    out = []
    for s in space.shapes(n, bounds, nondegenerate):
        for rep in space.representatives(s):
            g = _make_generator(space, s, rep)
            if not (nondegenerate and g.degenerate):
                out.append(g)
    out.sort(key=lambda g: (g.shape.key, space.payload_key(g.payload)))
    return out


def canonical_generator(
    space: DendroidalSpace, shape: PlanarTree, p: PlanarOrder | None, x
) -> tuple[GeneratorId, int]:
    """Reduce the triple ``(shape, p, x)`` to its class generator and sign.

    ``p=None`` means the standard order of ``shape``.
    """
    if p is None:
        key = (shape, x)
        hit = space._reductions.get(key)
        if hit is None:
            canon, y, psi = space.reduce(shape, x)
            hit = space._reductions[key] = (_make_generator(space, canon, y), _relation_sign(psi, None))
        return hit
    canon, y, psi = space.reduce(shape, x)
    return _make_generator(space, canon, y), _relation_sign(psi, p)
