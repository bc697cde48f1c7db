"""Chain complexes of dendroidal sets over canonical generators.

A column of the differential is assembled by summing over the literal
elementary faces of the generator's canonical shape and reducing each term
with :func:`~dendrohom.dset.canonical_generator`; all sign and
representative bookkeeping lives there.

Complexes are truncated brutally at the requested top degree ``N``: the
top degree is kept but its kernel is not cut down by ``d_{N+1}``, so
homology there is flagged as truncated.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

from .dset import Bounds, DendroidalSpace, GeneratorId, canonical_generator, iso_classes
from .signs import face_sign
from .trees import PlanarTree, TreeMorphism, apply_face, elementary_faces

__all__ = [
    "ChainComplex",
    "ChainComplexError",
    "face_terms",
    "differential_column",
    "unnormalized_complex",
    "degenerate_subcomplex",
    "normalized_complex",
    "relative_complex",
]

Column = dict[int, int]


class ChainComplexError(RuntimeError):
    """A structural property of a complex failed; carries witnesses."""

    def __init__(self, message: str, witnesses=()):
        super().__init__(message)
        self.witnesses = list(witnesses)


@dataclass
class ChainComplex:
    """Generators per degree ``0..N`` and sparse column-major differentials.

    ``differentials[n]`` maps a column index of degree ``n`` to a
    ``{row index: entry}`` dict over degree ``n-1``; ``differentials[0]`` is
    empty.  ``scope[n]`` counts the leading generators of degree ``n`` that
    came from enumeration; anything after them was added because a face of
    an enumerated generator landed outside the enumeration bounds.
    """

    generators: list[list[GeneratorId]]
    differentials: list[dict[int, Column]]
    name: str = "complex"
    truncated: bool = True
    scope: list[int] | None = None
    weights: dict[GeneratorId, int] | None = None
    _index: list[dict[GeneratorId, int]] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if len(self.differentials) != len(self.generators):
            raise ValueError("need one differential slot per degree")
        if self.scope is None:
            self.scope = [len(g) for g in self.generators]
        self._index = [{g: i for i, g in enumerate(gs)} for gs in self.generators]

    # ------------------------------------------------------------- access
    @property
    def top(self) -> int:
        return len(self.generators) - 1

    def ranks(self) -> list[int]:
        return [len(g) for g in self.generators]

    def index(self, n: int, g: GeneratorId) -> int:
        return self._index[n][g]

    def __contains__(self, item) -> bool:
        return any(item in idx for idx in self._index)

    def boundary(self, g: GeneratorId) -> dict[GeneratorId, int]:
        """``d(g)`` as a generator → coefficient dict."""
        n = g.degree
        if n == 0 or n > self.top:
            return {}
        rows = self.generators[n - 1]
        col = self.differentials[n].get(self.index(n, g), {})
        return {rows[r]: v for r, v in col.items()}

    def dense(self, n: int) -> list[list[int]]:
        """``d_n`` as a dense row-major matrix (rows: degree ``n-1``)."""
        rows = len(self.generators[n - 1]) if n >= 1 else 0
        cols = len(self.generators[n]) if n <= self.top else 0
        out = [[0] * cols for _ in range(rows)]
        if 1 <= n <= self.top:
            for j, col in self.differentials[n].items():
                for i, v in col.items():
                    out[i][j] = v
        return out

    def entries(self, n: int) -> list[tuple[int, int, int]]:
        """Nonzero entries of ``d_n`` as sorted ``(row, column, value)`` triples."""
        if not 1 <= n <= self.top:
            return []
        return sorted((i, j, v) for j, col in self.differentials[n].items() for i, v in col.items())

    def shape(self, n: int) -> tuple[int, int]:
        rows = len(self.generators[n - 1]) if n >= 1 else 0
        return rows, len(self.generators[n]) if n <= self.top else 0

    # ------------------------------------------------------------- checks
    def d_squared_violations(self) -> list[dict]:
        """Nonzero entries of ``d_{n-1} d_n``, as witness records."""
        bad = []
        for n in range(2, self.top + 1):
            lower = self.differentials[n - 1]
            for j, col in sorted(self.differentials[n].items()):
                acc: dict[int, int] = defaultdict(int)
                for i, v in col.items():
                    for k, w in lower.get(i, {}).items():
                        acc[k] += v * w
                for k, v in sorted(acc.items()):
                    if v:
                        bad.append(
                            {
                                "degree": n,
                                "generator": str(self.generators[n][j]),
                                "target": str(self.generators[n - 2][k]),
                                "coefficient": v,
                            }
                        )
        return bad

    def check_d_squared(self) -> None:
        bad = self.d_squared_violations()
        if bad:
            raise ChainComplexError(f"d² ≠ 0 in {self.name}", bad)

    # -------------------------------------------------------- transforms
    def restrict(self, keep: Callable[[GeneratorId], bool], name: str | None = None) -> "ChainComplex":
        """Keep generators satisfying ``keep``; entries into dropped rows vanish."""
        new_gens, remap = [], []
        for gs in self.generators:
            kept = [(i, g) for i, g in enumerate(gs) if keep(g)]
            remap.append({i: k for k, (i, _) in enumerate(kept)})
            new_gens.append([g for _, g in kept])
        new_diff: list[dict[int, Column]] = [{}]
        for n in range(1, self.top + 1):
            cols = {}
            for j, col in self.differentials[n].items():
                if j not in remap[n]:
                    continue
                c = {remap[n - 1][i]: v for i, v in col.items() if i in remap[n - 1]}
                if c:
                    cols[remap[n][j]] = c
            new_diff.append(cols)
        scope = [sum(1 for i in range(s) if i in remap[n]) for n, s in enumerate(self.scope)]
        weights = None
        if self.weights is not None:
            weights = {g: w for g, w in self.weights.items() if keep(g)}
        return ChainComplex(new_gens, new_diff, name or self.name, self.truncated, scope, weights)

    def with_weights(self, weight: Callable[[GeneratorId], int]) -> "ChainComplex":
        weights = {g: weight(g) for gs in self.generators for g in gs}
        return ChainComplex(
            self.generators, self.differentials, self.name, self.truncated, self.scope, weights
        )

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "max_degree": self.top,
            "truncated": self.truncated,
            "degrees": [
                {
                    "degree": n,
                    "generators": [str(g) for g in gs],
                    "enumerated": self.scope[n],
                    "differential": [list(t) for t in self.entries(n)],
                }
                for n, gs in enumerate(self.generators)
            ],
        }


# ------------------------------------------------------------ assembly
@lru_cache(maxsize=65536)
def face_terms(t: PlanarTree) -> tuple[tuple[int, PlanarTree, TreeMorphism], ...]:
    """``(sign, face tree, face map)`` for every elementary face, standard order."""
    out = []
    for f in elementary_faces(t):
        ft, delta = apply_face(t, f)
        out.append((face_sign(t, f), ft, delta))
    return tuple(out)


def differential_column(space: DendroidalSpace, g: GeneratorId) -> dict[GeneratorId, int]:
    """``d[T, p0, x]`` as a dict over canonical generators (zeros removed)."""
    acc: dict[GeneratorId, int] = defaultdict(int)
    for sign, ft, delta in face_terms(g.shape):
        h, s = canonical_generator(space, ft, None, space.pull(delta, g.payload))
        acc[h] += sign * s
    return {h: v for h, v in acc.items() if v}


def _assemble(
    space: DendroidalSpace,
    max_degree: int,
    bounds: Bounds | None,
    nondegenerate: bool,
    name: str,
) -> ChainComplex:
    if max_degree < 0:
        raise ValueError("max_degree must be non-negative")
    gens = [iso_classes(space, n, bounds, nondegenerate) for n in range(max_degree + 1)]
    scope = [len(g) for g in gens]
    index = [{g: i for i, g in enumerate(gs)} for gs in gens]
    diffs: list[dict[int, Column]] = [{} for _ in range(max_degree + 1)]
    # top-down, so that face targets outside the enumeration join the lower degree
    for n in range(max_degree, 0, -1):
        for j, g in enumerate(gens[n]):
            col: Column = {}
            for h, v in differential_column(space, g).items():
                if nondegenerate and h.degenerate:
                    continue
                row = index[n - 1].get(h)
                if row is None:
                    if not space.needs_bounds:
                        raise ChainComplexError(f"face {h} of {g} missing from enumeration")
                    row = index[n - 1][h] = len(gens[n - 1])
                    gens[n - 1].append(h)
                col[row] = v
            if col:
                diffs[n][j] = col
    return ChainComplex(gens, diffs, name, True, scope)


def unnormalized_complex(
    space: DendroidalSpace,
    max_degree: int,
    bounds: Bounds | None = None,
    verify: bool = True,
) -> ChainComplex:
    """Ch^un(X) truncated at ``max_degree``; d² = 0 is checked unless disabled."""
    c = _assemble(space, max_degree, bounds, False, f"Ch^un({space.name})")
    if verify:
        c.check_d_squared()
    return c


def degenerate_subcomplex(c: ChainComplex) -> ChainComplex:
    """D(X): the span of degenerate generators, with closure verified."""
    bad = []
    for n in range(1, c.top + 1):
        for j, col in c.differentials[n].items():
            g = c.generators[n][j]
            if not g.degenerate:
                continue
            for i in col:
                h = c.generators[n - 1][i]
                if not h.degenerate:
                    bad.append({"generator": str(g), "target": str(h)})
    if bad:
        raise ChainComplexError("degenerate generators are not closed under d", bad)
    return c.restrict(lambda g: g.degenerate, name=c.name.replace("Ch^un", "D", 1))


def normalized_complex(
    source: ChainComplex | DendroidalSpace,
    max_degree: int | None = None,
    bounds: Bounds | None = None,
    verify: bool = True,
) -> ChainComplex:
    """Ch(X) = Ch^un(X)/D(X).

    Given an unnormalized complex, degenerate generators and rows are
    deleted.  Given a space, the complex is built directly from the
    non-degenerate generators, dropping degenerate face terms.
    """
    if isinstance(source, ChainComplex):
        c = source.restrict(lambda g: not g.degenerate, name=source.name.replace("Ch^un", "Ch", 1))
    else:
        if max_degree is None:
            raise ValueError("max_degree is required when building from a space")
        c = _assemble(source, max_degree, bounds, True, f"Ch({source.name})")
    if verify:
        c.check_d_squared()
    return c


def relative_complex(
    sub: DendroidalSpace | ChainComplex,
    ambient: DendroidalSpace | ChainComplex,
    max_degree: int | None = None,
    bounds: Bounds | None = None,
    normalized: bool = True,
) -> ChainComplex:
    """The quotient complex Ch(X)/Ch(A) for a subobject ``A ⊆ X``."""

    def build(x):
        if isinstance(x, ChainComplex):
            return x
        if max_degree is None:
            raise ValueError("max_degree is required when building from a space")
        if normalized:
            return normalized_complex(x, max_degree, bounds)
        return unnormalized_complex(x, max_degree, bounds)

    a, x = build(sub), build(ambient)
    missing = [str(g) for n in range(min(a.top, x.top) + 1) for g in a.generators[n] if g not in x._index[n]]
    if missing:
        raise ChainComplexError("subcomplex generators missing from the ambient complex", missing)
    inner = set(g for gs in a.generators for g in gs)
    c = x.restrict(lambda g: g not in inner, name=f"{x.name}/{a.name}")
    c.check_d_squared()
    return c

