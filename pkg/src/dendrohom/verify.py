"""Property suites shared by the command line and the test-suite.

Each suite runs exhaustively over a bounded family and returns a
:class:`SuiteReport`; a report passes when it recorded no witness.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Callable

from .chain import (
    ChainComplex,
    ChainComplexError,
    degenerate_subcomplex,
    normalized_complex,
    relative_complex,
    unnormalized_complex,
)
from .dset import AInfinity, Boundary, Bounds, Horn, Representable, SimplicialImage
from .homology import (
    ainfty_pairing,
    ainfty_weight,
    check_acyclicity,
    degenerate_pairing,
    degenerate_weight,
    homology,
)
from .signs import face_sign, planar_orders, planar_structure_sign, sign_coherence
from .sset import FiniteSimplicialSet, standard_simplex
from .trees import (
    DendroidalIdentityError,
    PlanarTree,
    apply_face,
    check_dendroidal_identity,
    codim2_index,
    elementary_faces,
    enumerate_trees,
    parse_tree,
)

__all__ = [
    "SuiteReport",
    "SUITES",
    "run_suite",
    "tree_family",
    "builtin_sset",
    "two_planar_structures_sign",
    "suite_signs",
    "suite_dsq",
    "suite_identities",
    "suite_normalization",
    "suite_omega",
    "suite_relative",
    "suite_horns",
    "tree_results",
    "TreeResults",
    "suite_acyclicity_ainfty",
    "suite_acyclicity_degenerate",
]


@dataclass
class SuiteReport:
    suite: str
    checks: int = 0
    failures: list[dict] = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        # timing is left out so reports stay byte-identical between runs
        return {
            "suite": self.suite,
            "verdict": "pass" if self.passed else "fail",
            "checks": self.checks,
            "summary": self.summary,
            "witnesses": self.failures,
        }


def tree_family(max_vertices: int, max_arity: int) -> list[PlanarTree]:
    """One canonical tree per iso class, ``0..max_vertices`` vertices."""
    return [t for n in range(max_vertices + 1) for t in enumerate_trees(n, max_arity, "iso")]


def builtin_sset(name: str) -> FiniteSimplicialSet:
    """A simplicial set shipped in the package data directory."""
    path = resources.files("dendrohom") / "data" / f"{name}.json"
    if not path.is_file():
        raise FileNotFoundError(name)
    return FiniteSimplicialSet.from_json(str(path))


def two_planar_structures_sign() -> int:
    """``sgn(p', p)`` for the two planar structures on two unary vertices over a binary one."""
    t = parse_tree("((e) (e))")
    p, p_prime = list(planar_orders(t))
    return planar_structure_sign(t, p_prime, p)


# ------------------------------------------------------------------ signs
def suite_signs(max_vertices: int = 4, max_arity: int = 3) -> SuiteReport:
    rep = SuiteReport("signs")
    pairs = orders = 0
    backend = None
    for t in tree_family(max_vertices, max_arity):
        r = sign_coherence(t)
        backend = r.backend
        rep.checks += 1
        pairs += r.pairs
        orders += r.orders
        if not r.holds:
            rep.failures.append({"kind": "coherence", "tree": r.tree, "violations": r.violations})
    s = two_planar_structures_sign()
    rep.checks += 1
    if s != -1:
        rep.failures.append({"kind": "example-3.3", "sign": s})
    rep.summary = {"trees": rep.checks - 1, "orders": orders, "triples": pairs, "backend": backend}
    return rep


# ------------------------------------------------------- per-tree results
@dataclass
class TreeResults:
    """Everything the tree suites need about one tree, computed once.

    ``complexes`` maps a complex name to its d² witnesses (or a
    construction error); ``groups`` maps a label to rendered homology.
    The normalized complexes are truncated at ``|T| + 2`` and the
    unnormalized one at ``|T| + 1``.
    """

    tree: str
    leaves: int
    complexes: dict[str, list] = field(default_factory=dict)
    groups: dict[str, list[str]] = field(default_factory=dict)


def _record(res: TreeResults, label: str, build: Callable[[], ChainComplex]) -> ChainComplex | None:
    try:
        c = build()
    except ChainComplexError as exc:
        res.complexes[label] = [{"kind": "construction", "error": str(exc), "witnesses": exc.witnesses}]
        return None
    res.complexes[label] = c.d_squared_violations()[:5]
    return c


def _groups(c: ChainComplex | None, upto: int) -> list[str]:
    if c is None:
        return []
    return [g.render() for g in homology(c).groups[:upto]]


@lru_cache(maxsize=None)
def tree_results(t: PlanarTree) -> TreeResults:
    """Build Ω[T], ∂Ω[T], the relative complex and every horn of ``t`` once."""
    n = t.n_vertices
    res = TreeResults(t.key, len(t.leaves))
    X = Representable(t)
    un = _record(res, "omega-unnormalized", lambda: unnormalized_complex(X, n + 1, verify=False))
    if un is not None:
        # degrees 0..n carry every non-degenerate dendrex of Ω[T]
        res.groups["unnormalized"] = _groups(un, n + 1)
        res.groups["normalized-quotient"] = _groups(normalized_complex(un, verify=False), n + 1)
    del un
    omega = _record(res, "omega", lambda: normalized_complex(X, n + 2, verify=False))
    res.groups["omega"] = _groups(omega, n + 2)
    if n:
        bd = _record(res, "boundary", lambda: normalized_complex(Boundary(t), n + 2, verify=False))
        res.groups["boundary"] = _groups(bd, n + 2)
        if bd is not None and omega is not None:
            rel = _record(res, "relative", lambda: relative_complex(bd, omega))
            res.groups["relative"] = _groups(rel, n + 2)
        for f in elementary_faces(t):
            h = _record(res, f"horn:{f}", lambda: normalized_complex(Horn(t, f), n + 2, verify=False))
            res.groups[f"horn:{f}"] = _groups(h, n + 2)
    return res


def _expected(zero: str, top: int, extra: dict[int, str] | None = None) -> list[str]:
    out = [zero] + ["0"] * (top - 1)
    for k, v in (extra or {}).items():
        out[k] = v
    return out


def _free(rank: int) -> str:
    return "0" if rank == 0 else "Z" if rank == 1 else f"Z^{rank}"


# ------------------------------------------------------------------- d^2
def _dsq(rep: SuiteReport, build: Callable[[], ChainComplex]):
    try:
        c = build()
    except ChainComplexError as exc:
        rep.failures.append({"kind": "construction", "error": str(exc), "witnesses": exc.witnesses})
        return
    rep.checks += 1
    bad = c.d_squared_violations()
    if bad:
        rep.failures.append({"kind": "d-squared", "complex": c.name, "entries": bad[:5]})


def suite_dsq(max_vertices: int = 4, max_arity: int = 3) -> SuiteReport:
    """d² = 0 for every built-in construction within the bounds."""
    rep = SuiteReport("dsq")
    for t in tree_family(max_vertices, max_arity):
        for label, bad in tree_results(t).complexes.items():
            rep.checks += 1
            if bad:
                rep.failures.append({"kind": "d-squared", "tree": t.key, "complex": label, "entries": bad})
    for k in range(4):
        S = SimplicialImage(standard_simplex(k), f"simplex:{k}")
        _dsq(rep, lambda: unnormalized_complex(S, k + 2, verify=False))
    sphere = SimplicialImage(builtin_sset("sphere2"), "sphere2")
    _dsq(rep, lambda: unnormalized_complex(sphere, 4, verify=False))
    A = AInfinity()
    v = min(max_vertices, 3)
    _dsq(rep, lambda: unnormalized_complex(A, v, Bounds(None, max_arity), verify=False))
    rep.summary = {"complexes": rep.checks}
    return rep


# ------------------------------------------------------------- identities
def suite_identities(max_vertices: int = 4, max_arity: int = 3) -> SuiteReport:
    """Every composable face pair swaps, and the two terms carry opposite signs."""
    rep = SuiteReport("identities")
    groups = 0
    for t in tree_family(max_vertices, max_arity):
        for f in elementary_faces(t):
            ft, _ = apply_face(t, f)
            for g in elementary_faces(ft):
                rep.checks += 1
                try:
                    check_dendroidal_identity(t, f, g)
                except DendroidalIdentityError as exc:
                    rep.failures.append({"kind": "no-swap", **exc.witness})
        for pairs in codim2_index(t).values():
            groups += 1
            signs = [face_sign(t, f) * face_sign(apply_face(t, f)[0], g) for f, g in pairs]
            if len(pairs) != 2 or sum(signs) != 0:
                rep.failures.append(
                    {
                        "kind": "no-cancellation",
                        "tree": t.key,
                        "pairs": [[str(f), str(g)] for f, g in pairs],
                        "signs": signs,
                    }
                )
    rep.summary = {"composable_pairs": rep.checks, "codim2_groups": groups}
    return rep


# ---------------------------------------------------- homology of trees
def _tree_suite(name: str, max_vertices: int, max_arity: int, check) -> SuiteReport:
    rep = SuiteReport(name)
    for t in tree_family(max_vertices, max_arity):
        for label, got, want in check(t, tree_results(t)):
            rep.checks += 1
            if got != want:
                rep.failures.append({"kind": name, "tree": t.key, "complex": label, "got": got, "expected": want})
    rep.summary = {"trees": len(tree_family(max_vertices, max_arity)), "comparisons": rep.checks}
    return rep


def suite_omega(max_vertices: int = 4, max_arity: int = 3) -> SuiteReport:
    """Ω[T] has homology ℤ^ℓ(T) in degree 0 and nothing else below the truncation."""

    def check(t, r):
        top = t.n_vertices + 2
        yield "omega", r.groups["omega"][:top], _expected(_free(r.leaves), top)

    return _tree_suite("omega", max_vertices, max_arity, check)


def suite_relative(max_vertices: int = 4, max_arity: int = 3) -> SuiteReport:
    """Ω[T]/∂Ω[T] is ℤ in degree |T|, and ∂Ω[T] has the forced homology."""

    def check(t, r):
        n = t.n_vertices
        if not n:
            return
        top = n + 2
        yield "relative", r.groups["relative"][:top], _expected("0", top, {n: "Z"})
        # ℤ^ℓ in degree 0 plus ℤ in degree n-1; the two merge when n = 1
        if n == 1:
            want = _expected(_free(r.leaves + 1), top)
        else:
            want = _expected(_free(r.leaves), top, {n - 1: "Z"})
        yield "boundary", r.groups["boundary"][:top], want

    return _tree_suite("relative", max_vertices, max_arity, check)


def suite_horns(max_vertices: int = 4, max_arity: int = 3) -> SuiteReport:
    """Every horn inclusion induces an isomorphism on homology."""

    def check(t, r):
        for label, got in r.groups.items():
            if label.startswith("horn:"):
                yield label, got, r.groups["omega"]

    return _tree_suite("horns", max_vertices, max_arity, check)


# ---------------------------------------------------------- normalization
def _compare(rep: SuiteReport, name: str, un: ChainComplex, no: ChainComplex, upto: int):
    rep.checks += 1
    a, b = homology(un), homology(no)
    if a.groups[:upto] != b.groups[:upto]:
        rep.failures.append(
            {
                "kind": "normalization",
                "space": name,
                "unnormalized": [g.render() for g in a.groups[:upto]],
                "normalized": [g.render() for g in b.groups[:upto]],
            }
        )


def suite_normalization(max_vertices: int = 4, max_arity: int = 3, max_simplex: int = 3) -> SuiteReport:
    """Normalized and unnormalized homology agree below the truncation degree."""
    rep = SuiteReport("normalization")
    for t in tree_family(max_vertices, max_arity):
        r = tree_results(t)
        rep.checks += 1
        if r.groups.get("unnormalized") != r.groups.get("normalized-quotient"):
            rep.failures.append(
                {
                    "kind": "normalization",
                    "space": f"omega:{t}",
                    "unnormalized": r.groups.get("unnormalized"),
                    "normalized": r.groups.get("normalized-quotient"),
                }
            )
    for k in range(max_simplex + 1):
        un = unnormalized_complex(SimplicialImage(standard_simplex(k)), k + 2)
        _compare(rep, f"simplex:{k}", un, normalized_complex(un), k + 2)
    rep.summary = {"spaces": rep.checks}
    return rep


# ------------------------------------------------------------- acyclicity
def suite_acyclicity_ainfty(
    max_vertices: int = 3, max_arity: int = 3, pairing=None
) -> SuiteReport:
    """Weight/pairing certificate for A∞ over generators within the bounds.

    Generators of ``max_vertices + 1`` vertices are built too, as partners.
    """
    rep = SuiteReport("acyclicity-ainfty")
    A = AInfinity()
    c = unnormalized_complex(A, max_vertices + 1, Bounds(None, max_arity))
    pairing = pairing or (lambda g: ainfty_pairing(g, A))
    cert = check_acyclicity(
        c,
        pairing,
        ainfty_weight,
        in_scope=lambda g: g.shape.max_arity <= max_arity,
        notes={"weight": "leaf count", "canonical": "leftmost input path ends at a stump"},
    )
    rep.checks = sum(len(b) for b in cert.B[: c.top])
    rep.failures = cert.failures
    rep.summary = {
        "A": [len(a) for a in cert.A],
        "B": [len(b) for b in cert.B],
        "paired": [len(p) for p in cert.pairs],
    }
    return rep


DEGENERATE_TREES = ("e", "(e)", "((e))", "(e e)")


def suite_acyclicity_degenerate(trees=DEGENERATE_TREES, max_degree: int = 4, pairing=None) -> SuiteReport:
    """Degenerate-colour certificate for ``D(Ω[T])``, cross-checked by SNF."""
    rep = SuiteReport("acyclicity-degenerate")
    per_tree = {}
    for s in trees:
        X = Representable(parse_tree(s))
        D = degenerate_subcomplex(unnormalized_complex(X, max_degree))
        pair = pairing(X) if pairing else (lambda g, X=X: degenerate_pairing(X, g))
        cert = check_acyclicity(D, pair, lambda g, X=X: degenerate_weight(X, g))
        table = homology(D)
        rep.checks += sum(len(b) for b in cert.B[: D.top])
        for w in cert.failures:
            rep.failures.append({"tree": s, **w})
        if cert.passed and not cert.agrees_with(table):
            rep.failures.append(
                {"kind": "snf-disagrees", "tree": s, "homology": [g.render() for g in table.groups]}
            )
        per_tree[s] = {"ranks": D.ranks(), "homology": [g.render() for g in table.groups]}
    rep.summary = per_tree
    return rep


SUITES: dict[str, Callable[..., SuiteReport]] = {
    "signs": suite_signs,
    "dsq": suite_dsq,
    "identities": suite_identities,
    "normalization": suite_normalization,
    "omega": suite_omega,
    "relative": suite_relative,
    "horns": suite_horns,
    "acyclicity-ainfty": suite_acyclicity_ainfty,
    "acyclicity-degenerate": suite_acyclicity_degenerate,
}


def run_suite(name: str, **kwargs) -> SuiteReport:
    start = time.perf_counter()
    rep = SUITES[name](**kwargs)
    rep.seconds = time.perf_counter() - start
    return rep
