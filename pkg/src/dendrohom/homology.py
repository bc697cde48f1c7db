"""Homology and cohomology with coefficients, and the acyclicity engine.

Integral groups come from the Smith normal forms of consecutive
differentials.  Rational and mod-m groups are read off the integral ones
by the universal coefficient theorem, so the three rings always agree.

The acyclicity engine checks the hypotheses of the weight/pairing
criterion on a concrete complex: weight-0 generators ``A_n``, the rest
``B_n``, a bijection ``x ↦ x̂`` from ``B_n`` onto ``A_{n+1}``, and strict
weight descent of ``x ∓ d(x̂)``.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, field
from math import gcd
from typing import Callable, NamedTuple

from .chain import ChainComplex
from .dset import (
    AInfinity,
    DendroidalSpace,
    GeneratorId,
    canonical_generator,
    nondegenerate_factorization,
    Dendrex,
)
from .signs import realize, standard_order
from .snf import smith_normal_form
from .trees import PlanarTree, TreeMorphism, apply_degeneracy, eta

__all__ = [
    "Coefficients",
    "parse_coefficients",
    "Group",
    "HomologyTable",
    "homology",
    "cohomology",
    "AcyclicityCertificate",
    "check_acyclicity",
    "ainfty_is_canonical",
    "ainfty_weight",
    "ainfty_pairing",
    "colours",
    "degenerate_is_canonical",
    "degenerate_weight",
    "degenerate_pairing",
]


# ----------------------------------------------------------- coefficients
class Coefficients(NamedTuple):
    ring: str  # "z", "q" or "z/m"
    modulus: int = 0

    def __str__(self):
        return f"z/{self.modulus}" if self.ring == "z/m" else self.ring

    def symbol(self) -> str:
        return {"z": "Z", "q": "Q"}.get(self.ring, f"Z/{self.modulus}")


def parse_coefficients(tag: str | Coefficients | None) -> Coefficients:
    """``"z"``, ``"q"`` or ``"z/<m>"`` with ``m ≥ 2``."""
    if isinstance(tag, Coefficients):
        return tag
    text = (tag or "z").strip().lower()
    if text in ("z", "q"):
        return Coefficients(text)
    m = re.fullmatch(r"z/(\d+)", text)
    if not m or int(m.group(1)) < 2:
        raise ValueError(f"bad coefficient ring {tag!r}; expected z, q or z/<m> with m >= 2")
    return Coefficients("z/m", int(m.group(1)))


@dataclass(frozen=True)
class Group:
    """``R^rank ⊕ ⊕ Z/t`` with torsion factors in divisibility order.

    Over ``Z/m`` the free part counts full ``Z/m`` summands and the
    torsion lists the smaller cyclic summands ``Z/gcd(t, m)``.
    """

    rank: int = 0
    torsion: tuple[int, ...] = ()

    @property
    def is_zero(self) -> bool:
        return self.rank == 0 and not self.torsion

    def render(self, symbol: str = "Z") -> str:
        parts = []
        if self.rank:
            parts.append(symbol if self.rank == 1 else f"{symbol}^{self.rank}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " + ".join(parts) if parts else "0"


@dataclass
class HomologyTable:
    coefficients: Coefficients
    groups: list[Group]
    truncated_degree: int | None = None
    kind: str = "homology"
    name: str = ""

    def __getitem__(self, n: int) -> Group:
        return self.groups[n]

    def __len__(self):
        return len(self.groups)

    def ranks(self) -> list[int]:
        return [g.rank for g in self.groups]

    def trusted(self) -> list[Group]:
        """Groups outside the truncated degree."""
        return [g for n, g in enumerate(self.groups) if n != self.truncated_degree]

    def to_json(self) -> dict:
        return {
            "space": self.name,
            "kind": self.kind,
            "coefficients": str(self.coefficients),
            "truncated_degree": self.truncated_degree,
            "groups": [
                {
                    "degree": n,
                    "rank": g.rank,
                    "torsion": list(g.torsion),
                    "truncated": n == self.truncated_degree,
                }
                for n, g in enumerate(self.groups)
            ],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["degree", "rank", "torsion", "truncated"])
        for n, g in enumerate(self.groups):
            w.writerow([n, g.rank, " ".join(map(str, g.torsion)), int(n == self.truncated_degree)])
        return buf.getvalue()

    def to_text(self) -> str:
        letter = "H_" if self.kind == "homology" else "H^"
        sym = self.coefficients.symbol()
        lines = [f"{self.kind} of {self.name} with {sym} coefficients"] if self.name else []
        for n, g in enumerate(self.groups):
            note = "  (truncated)" if n == self.truncated_degree else ""
            lines.append(f"{letter}{n} = {g.render(sym)}{note}")
        return "\n".join(lines) + "\n"


def _integral(ranks, factors) -> list[Group]:
    """Integral homology of ``... → C_n → C_{n-1} → ...`` from SNF data.

    ``factors[n]`` are the invariant factors of ``d_n``; ``factors[N+1]``
    is taken as empty, the brutal truncation.
    """
    top = len(ranks) - 1
    out = []
    for n in range(top + 1):
        r_in = len(factors[n]) if n >= 1 else 0
        f_out = factors[n + 1] if n + 1 <= top else []
        out.append(Group(ranks[n] - r_in - len(f_out), tuple(t for t in f_out if t > 1)))
    return out


def _tensor(groups: list[Group], coeff: Coefficients, shift: int) -> list[Group]:
    """Universal coefficients: ``G_n ⊗ R ⊕ Tor(G_{n+shift}, R)``."""
    if coeff.ring == "z":
        return list(groups)
    if coeff.ring == "q":
        return [Group(g.rank) for g in groups]
    m = coeff.modulus
    out = []
    for n, g in enumerate(groups):
        parts = [m] * g.rank + [gcd(t, m) for t in g.torsion]
        k = n + shift
        if 0 <= k < len(groups):
            parts += [gcd(t, m) for t in groups[k].torsion]
        full = sum(1 for d in parts if d == m)
        out.append(Group(full, tuple(sorted(d for d in parts if 1 < d < m))))
    return out


def _transpose(col_major: dict) -> dict:
    out: dict = {}
    for j, col in col_major.items():
        for i, v in col.items():
            out.setdefault(i, {})[j] = v
    return out


def homology(c: ChainComplex, coeff: str | Coefficients | None = "z") -> HomologyTable:
    """``H_n(C ⊗ R)`` for ``n = 0..N``; degree ``N`` is flagged when truncated."""
    coeff = parse_coefficients(coeff)
    factors = [[]] + [smith_normal_form(c.differentials[n])[0] for n in range(1, c.top + 1)]
    integral = _integral(c.ranks(), factors)
    return HomologyTable(
        coeff,
        _tensor(integral, coeff, -1),
        c.top if c.truncated else None,
        "homology",
        c.name,
    )


def cohomology(c: ChainComplex, coeff: str | Coefficients | None = "z") -> HomologyTable:
    """``H^n(Hom(C, R))`` from the transposed differentials ``δ^{n-1} = d_nᵀ``."""
    coeff = parse_coefficients(coeff)
    top = c.top
    # coboundary into degree n is d_n transposed; out of degree n is d_{n+1} transposed
    into = [[]] + [smith_normal_form(_transpose(c.differentials[n]))[0] for n in range(1, top + 1)]
    groups = []
    ranks = c.ranks()
    for n in range(top + 1):
        r_out = len(into[n + 1]) if n + 1 <= top else 0
        groups.append(Group(ranks[n] - r_out - len(into[n]), tuple(t for t in into[n] if t > 1)))
    return HomologyTable(
        coeff,
        _tensor(groups, coeff, +1),
        top if c.truncated else None,
        "cohomology",
        c.name,
    )


# ------------------------------------------------------------ acyclicity
@dataclass
class AcyclicityCertificate:
    """Outcome of checking the weight/pairing hypotheses on a complex.

    ``pairs[n]`` lists ``(x, x̂, s)`` with ``w(x - s·d(x̂)) < w(x)``.
    ``claim`` is the certified homology (``H_0`` rank, zeros above) in the
    degrees it covers, present only when the check passed over the whole
    complex; ``complete`` says whether every generator was in scope.
    """

    name: str
    A: list[list[GeneratorId]]
    B: list[list[GeneratorId]]
    pairs: list[list[tuple[GeneratorId, GeneratorId, int]]]
    failures: list[dict] = field(default_factory=list)
    complete: bool = True
    claim: list[int] | None = None
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def agrees_with(self, table: HomologyTable) -> bool:
        """Whether the certified claim matches SNF homology where both apply."""
        if self.claim is None:
            return False
        return all(
            table[n].rank == r and not table[n].torsion for n, r in enumerate(self.claim)
        )

    def to_json(self) -> dict:
        return {
            "complex": self.name,
            "verdict": "pass" if self.passed else "fail",
            "complete": self.complete,
            "claim": None if self.claim is None else {str(n): r for n, r in enumerate(self.claim)},
            "degrees": [
                {
                    "degree": n,
                    "A": [str(g) for g in self.A[n]],
                    "B": [str(g) for g in self.B[n]],
                    "pairs": [[str(x), str(y), s] for x, y, s in self.pairs[n]],
                }
                for n in range(len(self.A))
            ],
            "failures": self.failures,
            "notes": self.notes,
        }


def _chain_weight(chain: dict[GeneratorId, int], weight) -> int:
    return max((weight(g) for g, v in chain.items() if v), default=-1)


def check_acyclicity(
    c: ChainComplex,
    pairing: Callable[[GeneratorId], GeneratorId],
    weight: Callable[[GeneratorId], int] | None = None,
    in_scope: Callable[[GeneratorId], bool] | None = None,
    notes: dict | None = None,
) -> AcyclicityCertificate:
    """Check the weight/pairing hypotheses on ``c`` up to its top degree.

    ``B_n`` is paired for ``n < N`` (the partner lives in degree ``n+1``);
    ``A_n`` must be hit for ``1 ≤ n ≤ N``.  ``in_scope`` restricts the check
    to a subset of generators, e.g. those produced by enumeration, and
    ``weight`` defaults to the complex's stored weights.
    """
    if weight is None:
        if c.weights is None:
            raise ValueError("no weights given and none stored on the complex")
        weight = c.weights.__getitem__
    if in_scope is None:
        in_scope = lambda g: True  # noqa: E731
    top = c.top
    A = [[g for g in gs if in_scope(g) and weight(g) == 0] for gs in c.generators]
    B = [[g for g in gs if in_scope(g) and weight(g) > 0] for gs in c.generators]
    complete = all(in_scope(g) for gs in c.generators for g in gs)
    pairs: list[list] = [[] for _ in range(top + 1)]
    failures: list[dict] = []
    hit: list[set] = [set() for _ in range(top + 1)]
    for n in range(top):
        for x in B[n]:
            try:
                xh = pairing(x)
            except ValueError as exc:
                failures.append({"kind": "pairing-undefined", "x": str(x), "reason": str(exc)})
                continue
            if xh.degree != n + 1 or xh not in c._index[n + 1]:
                failures.append({"kind": "partner-missing", "x": str(x), "partner": str(xh)})
                continue
            if weight(xh) != 0:
                failures.append({"kind": "partner-not-weight-0", "x": str(x), "partner": str(xh)})
                continue
            if xh in hit[n + 1]:
                failures.append({"kind": "not-injective", "x": str(x), "partner": str(xh)})
                continue
            hit[n + 1].add(xh)
            dx = c.boundary(xh)
            wx = weight(x)
            chosen = None
            observed = {}
            for s in (1, -1):
                diff = dict((g, -s * v) for g, v in dx.items())
                diff[x] = diff.get(x, 0) + 1
                observed[s] = _chain_weight(diff, weight)
                if observed[s] < wx:
                    chosen = s
                    break
            if chosen is None:
                failures.append(
                    {
                        "kind": "no-descent",
                        "x": str(x),
                        "partner": str(xh),
                        "w(x)": wx,
                        "w(x-dx^)": observed[1],
                        "w(x+dx^)": observed[-1],
                    }
                )
                continue
            pairs[n].append((x, xh, chosen))
    for n in range(1, top + 1):
        for a in A[n]:
            if a not in hit[n]:
                failures.append({"kind": "not-surjective", "degree": n, "missed": str(a)})
    claim = None
    if not failures and complete:
        # trusted below the top degree
        claim = [len(A[0])] + [0] * (top - 1) if top >= 1 else None
    return AcyclicityCertificate(c.name, A, B, pairs, failures, complete, claim, dict(notes or {}))


# ---------------------------------------------------------- A∞ pairing
def _planar(g: GeneratorId) -> PlanarTree:
    return realize(g.shape, g.payload)[0]


def _leftmost_path_end(t: PlanarTree) -> int:
    """Edge where the walk up through first inputs stops (a leaf or a stump output)."""
    e = 0
    while True:
        v = t.edge_top[e]
        if v < 0 or not t.vertex_inputs[v]:
            return e
        e = t.vertex_inputs[v][0]


def ainfty_is_canonical(g: GeneratorId) -> bool:
    """Canonical: the walk up the leftmost inputs ends at a stump."""
    t = _planar(g)
    return t.edge_top[_leftmost_path_end(t)] >= 0


def ainfty_weight(g: GeneratorId) -> int:
    return 0 if ainfty_is_canonical(g) else len(g.shape.leaves)


def ainfty_pairing(g: GeneratorId, space: AInfinity | None = None) -> GeneratorId:
    """Graft a stump on the leftmost leaf of a non-canonical generator."""
    t = _planar(g)
    e = _leftmost_path_end(t)
    if t.edge_top[e] >= 0:
        raise ValueError(f"{g} is canonical")

    def build(edge):
        v = t.edge_top[edge]
        if edge == e:
            return ()
        if v < 0:
            return None
        return tuple(build(c) for c in t.vertex_inputs[v])

    hat = PlanarTree(build(0))
    space = space or AInfinity()
    return canonical_generator(space, hat, None, standard_order(hat))[0]


# --------------------------------------------------- degenerate pairing
def colours(space: DendroidalSpace, shape: PlanarTree, x) -> list:
    """Colour of each edge: the restriction of ``x`` along that edge."""
    one = eta()
    return [space.pull(TreeMorphism(one, shape, (e,)), x) for e in range(shape.n_edges)]


def _smallest_degenerate_colour(space: DendroidalSpace, g: GeneratorId):
    """``(colour, fibre edges)`` for the smallest colour hit by a degeneracy."""
    if not space.is_degenerate(g.shape, g.payload):
        raise ValueError(f"{g} is not degenerate")
    sigma, xs = nondegenerate_factorization(space, Dendrex(g.shape, g.payload))
    fibres: dict[int, list[int]] = {}
    for e, e1 in enumerate(sigma.edges):
        fibres.setdefault(e1, []).append(e)
    cols = colours(space, xs.shape, xs.payload)
    candidates = [(space.payload_key(cols[e1]), e1) for e1, f in fibres.items() if len(f) >= 2]
    _, e1 = min(candidates)
    return cols[e1], fibres[e1]


def degenerate_is_canonical(space: DendroidalSpace, g: GeneratorId) -> bool:
    """Canonical: the fibre over the smallest degenerate colour has odd size."""
    _, fibre = _smallest_degenerate_colour(space, g)
    return len(fibre) % 2 == 1


def degenerate_weight(space: DendroidalSpace, g: GeneratorId) -> int:
    return 0 if degenerate_is_canonical(space, g) else 1


def degenerate_pairing(space: DendroidalSpace, g: GeneratorId) -> GeneratorId:
    """Degenerate once more along the smallest degenerate colour."""
    _, fibre = _smallest_degenerate_colour(space, g)
    if len(fibre) % 2 == 1:
        raise ValueError(f"{g} is canonical")
    new, sigma = apply_degeneracy(g.shape, fibre[0])
    return canonical_generator(space, new, None, space.pull(sigma, g.payload))[0]
