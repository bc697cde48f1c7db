"""Planar rooted trees and the morphism calculus of the category of trees.

A tree is stored as a nested shape: a leaf edge is ``None`` and a vertex is
the tuple of the subtrees hanging from its inputs, in planar order.  Edge and
vertex ids are assigned in planar pre-order, so edge 0 is always the root and
vertex 0 is the vertex above it (when there is one).

Morphisms are recorded by their edge maps.  A map of edges is a morphism iff
every vertex of the source is sent to an operation of the free operad on the
target, see :func:`is_morphism`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, NamedTuple, Sequence

__all__ = [
    "PlanarTree",
    "TreeSyntaxError",
    "Face",
    "TreeMorphism",
    "Factorization",
    "DendroidalIdentityError",
    "parse_tree",
    "parse_face",
    "eta",
    "linear_tree",
    "corolla",
    "elementary_faces",
    "apply_face",
    "apply_degeneracy",
    "is_morphism",
    "isomorphisms",
    "automorphisms",
    "canonical_form",
    "enumerate_trees",
    "collapse_unary",
    "subfaces",
    "factorize",
    "check_dendroidal_identity",
    "dendroidal_swaps",
    "composite_face",
    "codim2_index",
    "factors_through",
    "is_canonical",
]


class TreeSyntaxError(ValueError):
    """Raised on malformed tree or face expressions."""

    def __init__(self, message: str, position: int, text: str = ""):
        super().__init__(f"{message} at position {position}")
        self.position = position
        self.text = text


class PlanarTree:
    """A finite rooted planar tree.

    Attributes are plain tuples indexed by edge id or vertex id:

    ``edge_top[e]``
        vertex whose output is ``e``, or -1 when ``e`` is a leaf
    ``edge_parent[e]``
        vertex having ``e`` as an input, or -1 for the root edge
    ``vertex_out[v]`` / ``vertex_inputs[v]``
        output edge and ordered input edges of vertex ``v``
    """

    __slots__ = (
        "shape",
        "key",
        "edge_top",
        "edge_parent",
        "vertex_out",
        "vertex_inputs",
        "edge_end",
    )

    def __init__(self, shape):
        self.shape = shape
        self.key = _serialize(shape)
        edge_top: list[int] = []
        edge_parent: list[int] = []
        edge_end: list[int] = []
        vertex_out: list[int] = []
        vertex_inputs: list[tuple[int, ...]] = []

        def visit(node, parent):
            e = len(edge_top)
            edge_top.append(-1)
            edge_parent.append(parent)
            edge_end.append(e)
            if node is not None:
                v = len(vertex_out)
                vertex_out.append(e)
                vertex_inputs.append(())
                edge_top[e] = v
                vertex_inputs[v] = tuple(visit(child, v) for child in node)
            edge_end[e] = len(edge_top)
            return e

        visit(shape, -1)
        self.edge_top = tuple(edge_top)
        self.edge_parent = tuple(edge_parent)
        self.edge_end = tuple(edge_end)
        self.vertex_out = tuple(vertex_out)
        self.vertex_inputs = tuple(vertex_inputs)

    # ----------------------------------------------------------------- basics
    def __eq__(self, other):
        return isinstance(other, PlanarTree) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __lt__(self, other):
        return self.key < other.key

    def __repr__(self):
        return f"PlanarTree({self.key!r})"

    def __str__(self):
        return self.key

    def __reduce__(self):
        return (PlanarTree, (self.shape,))

    @property
    def n_edges(self) -> int:
        return len(self.edge_top)

    @property
    def n_vertices(self) -> int:
        return len(self.vertex_out)

    def __len__(self):
        return self.n_vertices

    @property
    def leaves(self) -> tuple[int, ...]:
        return tuple(e for e, v in enumerate(self.edge_top) if v < 0)

    @property
    def inner_edges(self) -> tuple[int, ...]:
        return tuple(
            e
            for e in range(1, self.n_edges)
            if self.edge_top[e] >= 0
        )

    def arity(self, v: int) -> int:
        return len(self.vertex_inputs[v])

    @property
    def max_arity(self) -> int:
        return max((len(i) for i in self.vertex_inputs), default=0)

    def is_leaf(self, e: int) -> bool:
        return self.edge_top[e] < 0

    def is_top_vertex(self, v: int) -> bool:
        return all(self.edge_top[e] < 0 for e in self.vertex_inputs[v])

    def is_linear(self) -> bool:
        return all(len(i) == 1 for i in self.vertex_inputs)

    def is_corolla(self) -> bool:
        return self.n_vertices == 1

    def above(self, a: int, b: int) -> bool:
        """True when edge ``a`` lies in the subtree hanging from edge ``b``."""
        return b <= a < self.edge_end[b]

    def subtree(self, e: int):
        """Nested shape of the subtree whose root edge is ``e``."""
        node = self.shape
        path = []
        while e != 0:
            v = self.edge_parent[e]
            path.append(self.vertex_inputs[v].index(e))
            e = self.vertex_out[v]
        for i in reversed(path):
            node = node[i]
        return node

    def annotated(self):
        """Nested ``(edge_id, children)`` form; children is None for a leaf."""

        def build(e):
            v = self.edge_top[e]
            if v < 0:
                return (e, None)
            return (e, tuple(build(c) for c in self.vertex_inputs[v]))

        return build(0)

    def vertex_above(self, e: int) -> int:
        return self.edge_top[e]


def _serialize(shape) -> str:
    if shape is None:
        return "e"
    return "(" + " ".join(_serialize(c) for c in shape) + ")"


def _from_annotated(node) -> tuple[PlanarTree, tuple]:
    """Turn a tagged nested tree into (tree, tags listed in edge pre-order)."""
    tags = []

    def strip(n):
        tag, kids = n
        tags.append(tag)
        if kids is None:
            return None
        return tuple(strip(k) for k in kids)

    shape = strip(node)
    return PlanarTree(shape), tuple(tags)


# ------------------------------------------------------------------ parsing
def parse_tree(text: str) -> PlanarTree:
    """Parse ``tree := "e" | "(" tree* ")"``; whitespace is ignored."""
    tokens = [(i, c) for i, c in enumerate(text) if not c.isspace()]
    pos = 0

    def fail(msg, at=None):
        where = tokens[at][0] if at is not None and at < len(tokens) else len(text)
        raise TreeSyntaxError(msg, where, text)

    def node():
        nonlocal pos
        if pos >= len(tokens):
            fail("unexpected end of input")
        i, c = tokens[pos]
        if c == "e":
            pos += 1
            return None
        if c == "(":
            open_at = pos
            pos += 1
            kids = []
            while True:
                if pos >= len(tokens):
                    fail("unbalanced parentheses: '(' never closed", open_at)
                if tokens[pos][1] == ")":
                    pos += 1
                    return tuple(kids)
                kids.append(node())
        if c == ")":
            fail("unbalanced parentheses: unexpected ')'", pos)
        fail(f"unexpected character {c!r}", pos)

    if not tokens:
        raise TreeSyntaxError("empty tree expression", 0, text)
    shape = node()
    if pos != len(tokens):
        if tokens[pos][1] == ")":
            fail("unbalanced parentheses: unexpected ')'", pos)
        fail("trailing input after tree", pos)
    return PlanarTree(shape)


def eta() -> PlanarTree:
    return PlanarTree(None)


def linear_tree(n: int) -> PlanarTree:
    shape = None
    for _ in range(n):
        shape = (shape,)
    return PlanarTree(shape)


def corolla(n: int) -> PlanarTree:
    return PlanarTree((None,) * n)


# -------------------------------------------------------------------- faces
class Face(NamedTuple):
    """Elementary face id: ``inner``/``bottom`` carry an edge, ``top`` a vertex."""

    kind: str
    index: int

    def __str__(self):
        return f"{self.kind}:{self.index}"


_KIND_ORDER = {"inner": 0, "top": 1, "bottom": 2}


def parse_face(text: str) -> Face:
    kind, sep, idx = text.strip().partition(":")
    if not sep or kind not in _KIND_ORDER:
        raise TreeSyntaxError(f"bad face id {text!r}", 0, text)
    try:
        return Face(kind, int(idx))
    except ValueError:
        raise TreeSyntaxError(f"bad face index in {text!r}", len(kind) + 1, text) from None


def elementary_faces(t: PlanarTree) -> list[Face]:
    """All elementary faces of ``t``: inner edges, top vertices, bottom pairs."""
    faces = [Face("inner", e) for e in t.inner_edges]
    faces += [Face("top", v) for v in range(t.n_vertices) if t.is_top_vertex(v)]
    if t.n_vertices == 1:
        faces += [Face("bottom", e) for e in t.vertex_inputs[0]]
    elif t.n_vertices > 1:
        inner = [e for e in t.vertex_inputs[0] if not t.is_leaf(e)]
        if len(inner) == 1:
            faces.append(Face("bottom", inner[0]))
    return faces


def is_valid_face(t: PlanarTree, f: Face) -> bool:
    return f in elementary_faces(t)


def apply_face(t: PlanarTree, f: Face) -> tuple[PlanarTree, "TreeMorphism"]:
    """The face ``∂_f t`` with inherited planar structure and its inclusion."""
    if not is_valid_face(t, f):
        raise ValueError(f"{f} is not an elementary face of {t}")
    root = t.annotated()
    if f.kind == "bottom":
        new = _find(root, f.index)
    elif f.kind == "top":
        target = t.vertex_out[f.index]
        new = _rebuild(root, lambda n: (n[0], None) if n[0] == target else None)
    else:

        def contract(n):
            tag, kids = n
            if kids is None or not any(k[0] == f.index for k in kids):
                return None
            spliced = []
            for k in kids:
                if k[0] == f.index:
                    spliced.extend(_rebuild(c, contract) for c in k[1])
                else:
                    spliced.append(_rebuild(k, contract))
            return (tag, tuple(spliced))

        new = _rebuild(root, contract)
    face_tree, tags = _from_annotated(new)
    return face_tree, TreeMorphism(face_tree, t, tags)


def apply_degeneracy(t: PlanarTree, e: int) -> tuple[PlanarTree, "TreeMorphism"]:
    """``σ_e t`` (a unary vertex inserted on ``e``) and the map ``σ_e t → t``."""
    if not 0 <= e < t.n_edges:
        raise ValueError(f"edge {e} out of range for {t}")
    new = _rebuild(t.annotated(), lambda n: (e, ((e, n[1]),)) if n[0] == e else None)
    deg_tree, tags = _from_annotated(new)
    return deg_tree, TreeMorphism(deg_tree, t, tags)


def _find(node, tag):
    if node[0] == tag:
        return node
    for k in node[1] or ():
        hit = _find(k, tag)
        if hit is not None:
            return hit
    return None


def _rebuild(node, hook):
    """Copy a tagged tree; ``hook`` may return a replacement for any node."""
    replaced = hook(node)
    if replaced is not None:
        return replaced
    tag, kids = node
    if kids is None:
        return node
    return (tag, tuple(_rebuild(k, hook) for k in kids))


# ---------------------------------------------------------------- morphisms
@dataclass(frozen=True)
class TreeMorphism:
    """A morphism of trees, determined by its map on edges."""

    source: PlanarTree
    target: PlanarTree
    edges: tuple[int, ...]

    def __matmul__(self, other: "TreeMorphism") -> "TreeMorphism":
        # self ∘ other
        if other.target != self.source:
            raise ValueError("morphisms are not composable")
        return TreeMorphism(other.source, self.target, tuple(self.edges[e] for e in other.edges))

    @classmethod
    def identity(cls, t: PlanarTree) -> "TreeMorphism":
        return cls(t, t, tuple(range(t.n_edges)))

    def is_injective(self) -> bool:
        return len(set(self.edges)) == len(self.edges)

    def is_surjective(self) -> bool:
        return len(set(self.edges)) == self.target.n_edges

    def is_valid(self) -> bool:
        return is_morphism(self.source, self.target, self.edges)

    def vertex_map(self) -> tuple[int, ...]:
        """Vertex map of an isomorphism (vertex above ``e`` goes above ``f(e)``)."""
        top = self.target.edge_top
        return tuple(top[self.edges[o]] for o in self.source.vertex_out)

    def inverse(self) -> "TreeMorphism":
        inv = [0] * len(self.edges)
        for a, b in enumerate(self.edges):
            inv[b] = a
        return TreeMorphism(self.target, self.source, tuple(inv))


def _operation_exists(t: PlanarTree, inputs: Sequence[int], output: int) -> bool:
    if len(inputs) == 1 and inputs[0] == output:
        return True
    wanted = set(inputs)
    if len(wanted) != len(inputs) or output in wanted:
        return False
    found = 0
    stack = [output]
    while stack:
        c = stack.pop()
        if c in wanted:
            found += 1
            continue
        v = t.edge_top[c]
        if v < 0:
            return False
        stack.extend(t.vertex_inputs[v])
    return found == len(wanted)


def is_morphism(s: PlanarTree, t: PlanarTree, edges: Sequence[int]) -> bool:
    """Whether an edge map ``s → t`` underlies a map of the generated operads.

    Each vertex must land on a subtree of ``t`` cut out by the images of its
    inputs, or on an identity when it is unary and both edges coincide.
    """
    if len(edges) != s.n_edges or any(not 0 <= b < t.n_edges for b in edges):
        return False
    for v, out in enumerate(s.vertex_out):
        ins = [edges[e] for e in s.vertex_inputs[v]]
        if not _operation_exists(t, ins, edges[out]):
            return False
    return True


# ------------------------------------------------------------ isomorphisms
@lru_cache(maxsize=65536)
def _canonical_key(shape) -> str:
    if shape is None:
        return "e"
    return "(" + " ".join(sorted(_canonical_key(c) for c in shape)) + ")"


def _iso_maps(s: PlanarTree, t: PlanarTree, a: int, b: int) -> Iterator[dict]:
    va, vb = s.edge_top[a], t.edge_top[b]
    if va < 0 or vb < 0:
        if va < 0 and vb < 0:
            yield {a: b}
        return
    ins_a, ins_b = s.vertex_inputs[va], t.vertex_inputs[vb]
    if len(ins_a) != len(ins_b):
        return
    keys_a = [_canonical_key(s.subtree(x)) for x in ins_a]
    keys_b = [_canonical_key(t.subtree(y)) for y in ins_b]
    if sorted(keys_a) != sorted(keys_b):
        return
    for perm in itertools.permutations(range(len(ins_b))):
        if any(keys_a[i] != keys_b[j] for i, j in enumerate(perm)):
            continue
        parts = [list(_iso_maps(s, t, ins_a[i], ins_b[j])) for i, j in enumerate(perm)]
        for combo in itertools.product(*parts):
            m = {a: b}
            for piece in combo:
                m.update(piece)
            yield m


@lru_cache(maxsize=4096)
def isomorphisms(s: PlanarTree, t: PlanarTree) -> tuple[TreeMorphism, ...]:
    """All isomorphisms ``s → t`` of underlying (non-planar) trees."""
    if s.n_edges != t.n_edges or _canonical_key(s.shape) != _canonical_key(t.shape):
        return ()
    out = []
    for m in _iso_maps(s, t, 0, 0):
        out.append(TreeMorphism(s, t, tuple(m[e] for e in range(s.n_edges))))
    out.sort(key=lambda m: m.edges)
    return tuple(out)


def automorphisms(t: PlanarTree) -> tuple[TreeMorphism, ...]:
    return isomorphisms(t, t)


@lru_cache(maxsize=65536)
def canonical_form(t: PlanarTree) -> tuple[PlanarTree, TreeMorphism]:
    """Sorted-sibling representative of ``t`` and an isomorphism onto it."""

    def sort(node):
        tag, kids = node
        if kids is None:
            return node
        kids = [sort(k) for k in kids]
        kids.sort(key=lambda k: _canonical_key(_strip(k)))
        return (tag, tuple(kids))

    canon, tags = _from_annotated(sort(t.annotated()))
    # tags[i] = edge of t sitting at canonical edge i
    forward = [0] * t.n_edges
    for i, e in enumerate(tags):
        forward[e] = i
    return canon, TreeMorphism(t, canon, tuple(forward))


def _strip(node):
    tag, kids = node
    if kids is None:
        return None
    return tuple(_strip(k) for k in kids)


def is_canonical(t: PlanarTree) -> bool:
    return t.key == _canonical_key(t.shape)


# ------------------------------------------------------------- enumeration
@lru_cache(maxsize=None)
def _planar_shapes(n: int, max_arity: int) -> tuple:
    if n == 0:
        return (None,)
    out = []
    for k in range(max_arity + 1):
        for parts in _compositions(n - 1, k):
            for kids in itertools.product(*(_planar_shapes(p, max_arity) for p in parts)):
                out.append(tuple(kids))
    return tuple(out)


def _compositions(total: int, k: int):
    if k == 0:
        if total == 0:
            yield ()
        return
    if k == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, k - 1):
            yield (first,) + rest


def enumerate_trees(n_vertices: int, max_arity: int, mode: str = "planar") -> list[PlanarTree]:
    """Trees with exactly ``n_vertices`` vertices and arities ``0..max_arity``.

    ``mode="planar"`` lists every planar tree; ``mode="iso"`` lists one
    canonical representative per isomorphism class.  Sorted by serialization.
    """
    if n_vertices < 0 or max_arity < 0:
        raise ValueError("bounds must be non-negative")
    shapes = _planar_shapes(n_vertices, max_arity)
    if mode == "planar":
        trees = {PlanarTree(s) for s in shapes}
    elif mode in ("iso", "iso-classes"):
        trees = {canonical_form(PlanarTree(s))[0] for s in shapes}
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return sorted(trees)


# ------------------------------------------------------- factorization etc.
def collapse_unary(s: PlanarTree, vertices) -> tuple[PlanarTree, TreeMorphism]:
    """Remove the given unary vertices; returns the composite degeneracy."""
    drop = set(vertices)
    for v in drop:
        if s.arity(v) != 1:
            raise ValueError(f"vertex {v} is not unary")
    owner = list(range(s.n_edges))

    def build(e):
        v = s.edge_top[e]
        group = [e]
        while v >= 0 and v in drop:
            e = s.vertex_inputs[v][0]
            group.append(e)
            v = s.edge_top[e]
        if v < 0:
            return (tuple(group), None)
        return (tuple(group), tuple(build(c) for c in s.vertex_inputs[v]))

    new, groups = _from_annotated(build(0))
    for i, group in enumerate(groups):
        for e in group:
            owner[e] = i
    return new, TreeMorphism(s, new, tuple(owner))


@lru_cache(maxsize=65536)
def subfaces(t: PlanarTree) -> tuple[TreeMorphism, ...]:
    """Every composite of elementary face maps into ``t`` (identity included)."""
    seen = {(t, tuple(range(t.n_edges)))}
    frontier = [TreeMorphism.identity(t)]
    out = list(frontier)
    while frontier:
        nxt = []
        for m in frontier:
            for f in elementary_faces(m.source):
                _, d = apply_face(m.source, f)
                c = m @ d
                k = (c.source, c.edges)
                if k not in seen:
                    seen.add(k)
                    nxt.append(c)
        out.extend(nxt)
        frontier = nxt
    out.sort(key=lambda m: (-m.source.n_vertices, m.source.key, m.edges))
    return tuple(out)


@dataclass(frozen=True)
class Factorization:
    """``m = face ∘ iso ∘ degeneracy`` with the elementary words recorded."""

    degeneracy: TreeMorphism
    iso: TreeMorphism
    face: TreeMorphism
    degeneracy_word: tuple[int, ...]
    face_word: tuple[Face, ...]

    def compose(self) -> TreeMorphism:
        return self.face @ self.iso @ self.degeneracy


def factorize(m: TreeMorphism) -> Factorization:
    """Degeneracies, then an isomorphism, then elementary faces."""
    s, t = m.source, m.target
    drop = [
        v
        for v in range(s.n_vertices)
        if s.arity(v) == 1 and m.edges[s.vertex_inputs[v][0]] == m.edges[s.vertex_out[v]]
    ]
    s1, sigma = collapse_unary(s, drop)
    mono = [0] * s1.n_edges
    for e, e1 in enumerate(sigma.edges):
        mono[e1] = m.edges[e]
    # the image, with the planar order inherited from t (pre-order of t's edges)
    def build(e1):
        v = s1.edge_top[e1]
        if v < 0:
            return (mono[e1], None)
        kids = sorted(s1.vertex_inputs[v], key=lambda c: mono[c])
        return (mono[e1], tuple(build(c) for c in kids))

    image, tags = _from_annotated(build(0))
    pos = {tag: i for i, tag in enumerate(tags)}
    iso = TreeMorphism(s1, image, tuple(pos[mono[e]] for e in range(s1.n_edges)))
    delta = TreeMorphism(image, t, tags)

    # recover an elementary face word t ⊇ ... ⊇ image
    word = []
    current = TreeMorphism.identity(t)
    while current.source != image or current.edges != delta.edges:
        for f in elementary_faces(current.source):
            _, d = apply_face(current.source, f)
            c = current @ d
            if _factors_through(delta, c):
                word.append(f)
                current = c
                break
        else:  # pragma: no cover - guarded by the factorization lemma
            raise RuntimeError(f"no face word found for {m}")
    # degeneracy word: collapse order, one unary vertex at a time (top-down)
    deg_word = tuple(sorted((s.vertex_out[v] for v in drop), reverse=True))
    return Factorization(sigma, iso, delta, deg_word, tuple(word))


def _factors_through(m: TreeMorphism, mono: TreeMorphism) -> bool:
    """Whether ``m`` lifts along the monomorphism ``mono``."""
    inv = {b: a for a, b in enumerate(mono.edges)}
    try:
        lifted = tuple(inv[b] for b in m.edges)
    except KeyError:
        return False
    return is_morphism(m.source, mono.source, lifted)


def factors_through(m: TreeMorphism, mono: TreeMorphism) -> bool:
    return _factors_through(m, mono)


class DendroidalIdentityError(AssertionError):
    """No swapped face pair reproduces a composite of two faces."""

    def __init__(self, tree: PlanarTree, f: Face, g: Face):
        super().__init__(f"no dendroidal identity for {tree} with {f}, then {g}")
        self.witness = {"tree": tree.key, "f": str(f), "g": str(g)}


def composite_face(t: PlanarTree, f: Face, g: Face) -> TreeMorphism:
    ft, df = apply_face(t, f)
    _, dg = apply_face(ft, g)
    return df @ dg


@lru_cache(maxsize=4096)
def _faces_with_maps(t: PlanarTree) -> tuple[tuple[Face, PlanarTree, TreeMorphism], ...]:
    return tuple((f, *apply_face(t, f)) for f in elementary_faces(t))


@lru_cache(maxsize=4096)
def codim2_index(t: PlanarTree) -> dict:
    """Map each composite of two faces (source, edge map) to the pairs giving it."""
    index: dict = {}
    for f, ft, df in _faces_with_maps(t):
        for g, _, dg in _faces_with_maps(ft):
            c = df @ dg
            index.setdefault((c.source, c.edges), []).append((f, g))
    return index


def dendroidal_swaps(t: PlanarTree, f: Face, g: Face) -> list[tuple[Face, Face]]:
    """Every ``(g', f')`` with ``g' != f`` and ``∂_g' ∂_f' = ∂_f ∂_g`` on edges."""
    c = composite_face(t, f, g)
    pairs = codim2_index(t).get((c.source, c.edges), [])
    return [(a, b) for a, b in pairs if a != f]


def check_dendroidal_identity(t: PlanarTree, f: Face, g: Face) -> tuple[Face, Face]:
    """Swap a composable face pair; raises :class:`DendroidalIdentityError`."""
    swaps = dendroidal_swaps(t, f, g)
    if not swaps:
        raise DendroidalIdentityError(t, f, g)
    return swaps[0]
