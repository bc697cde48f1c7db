"""Acceptance criteria, one test and one PASS/FAIL line each.

All quantities are integers, so every tolerance is exact equality.
Runs under pytest or directly: ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from dendrohom.chain import normalized_complex, unnormalized_complex  # noqa: E402
from dendrohom.dset import AInfinity, Bounds, Representable, SimplicialImage, canonical_generator  # noqa: E402
from dendrohom.homology import ainfty_is_canonical, ainfty_pairing, homology  # noqa: E402
from dendrohom.sset import FiniteSimplicialSet  # noqa: E402
from dendrohom.trees import parse_tree  # noqa: E402
from dendrohom.verify import builtin_sset, two_planar_structures_sign, run_suite, tree_family  # noqa: E402

from oracles import SPHERE2, integral_homology, simplex_json, simplicial_chain  # noqa: E402

TOLERANCE = "exact"
TREES = dict(max_vertices=4, max_arity=3)  # 357 iso classes
WIDE = dict(max_vertices=5, max_arity=3)  # 1933 iso classes

#: filled as criteria run; conftest repeats them in the terminal summary
LINES: dict[int, str] = {}


def _report(capsys, n: int, title: str, ok: bool, detail: str):
    line = f"criterion {n:>2} {'PASS' if ok else 'FAIL'}  {title}  [{detail}; tolerance {TOLERANCE}]"
    LINES[n] = line
    with capsys.disabled():
        print("\n" + line, flush=True)
    assert ok, line


def _suite_detail(rep):
    return f"{rep.checks} checks, {len(rep.failures)} failures"


# ------------------------------------------------------------- criteria
def test_criterion_01_representable_homology(capsys):
    rep = run_suite("omega", **TREES)
    _report(capsys, 1, "H(Ω[T]) = Z^leaves in degree 0, 0 in degrees 1..|T|+1", rep.passed, _suite_detail(rep))


def test_criterion_02_relative_homology(capsys):
    rep = run_suite("relative", **TREES)
    bad = [f for f in rep.failures if f["complex"] == "relative"]
    trees = sum(1 for t in tree_family(**TREES) if t.n_vertices)
    _report(capsys, 2, "Ω[T]/∂Ω[T] is Z in degree |T| only", not bad, f"{trees} trees with |T| > 0, {len(bad)} failures")


def test_criterion_03_d_squared(capsys):
    rep = run_suite("dsq", **TREES)
    _report(capsys, 3, "d² = 0 on every built-in complex", rep.passed, _suite_detail(rep))


def test_criterion_04_sign_coherence(capsys):
    rep = run_suite("signs", **WIDE)
    detail = f"{rep.summary['trees']} trees, {rep.summary['triples']} triples, {len(rep.failures)} failures"
    _report(capsys, 4, "sign coherence over all planar pairs and faces", rep.passed, detail)


def test_criterion_05_worked_example_sign(capsys):
    s = two_planar_structures_sign()
    _report(capsys, 5, "sgn(p', p) = -1 on the two-planar-structure example", s == -1, f"got {s}")


def test_criterion_06_normalization(capsys):
    rep = run_suite("normalization", **TREES)
    _report(capsys, 6, "normalized and unnormalized homology agree below N", rep.passed, _suite_detail(rep))


def test_criterion_07_horns(capsys):
    rep = run_suite("horns", **TREES)
    _report(capsys, 7, "every horn has the homology of its tree", rep.passed, _suite_detail(rep))


def test_criterion_08_simplicial_comparison(capsys):
    cases = [(f"simplex:{n}", simplex_json(n), n + 2) for n in range(4)]
    cases.append(("sphere2", SPHERE2, 4))
    bad = []
    for name, data, top in cases:
        mats, dims = simplicial_chain(data)
        expected = integral_homology(mats, dims)
        S = SimplicialImage(FiniteSimplicialSet.from_json(data), name)
        got = homology(normalized_complex(S, top)).groups
        for n, (rank, torsion) in enumerate(expected):
            if (got[n].rank, list(got[n].torsion)) != (rank, torsion):
                bad.append((name, n))
    sphere = homology(normalized_complex(SimplicialImage(builtin_sset("sphere2")), 3)).groups
    sphere_ok = [g.render() for g in sphere[:3]] == ["Z", "0", "Z"]
    _report(
        capsys,
        8,
        "dendroidal homology of simplicial sets matches the simplicial oracle",
        not bad and sphere_ok,
        f"{len(cases)} simplicial sets, sphere H = Z,0,Z: {sphere_ok}",
    )


def test_criterion_09_ainfty_certificate(capsys):
    rep = run_suite("acyclicity-ainfty", max_vertices=3, max_arity=3)
    A = AInfinity()

    def gen(text):
        t = parse_tree(text)
        return canonical_generator(A, t, None, t.vertex_inputs)[0]

    t = parse_tree("(() ())")
    one = {canonical_generator(A, t, None, x)[0] for x in A.elements(t)}
    distinct = gen("(() e)") != gen("(e ())") and gen("((e) ())") != gen("(() (e))")
    pinned = len(one) == 1 and distinct and str(ainfty_pairing(gen("(e e)"), A)) == "(() e)"
    _report(
        capsys,
        9,
        "A∞ weight/pairing certificate, up to 3 vertices and arity 3",
        rep.passed and pinned,
        f"{rep.checks} paired generators, {len(rep.failures)} failures, identifications pinned: {pinned}",
    )


def test_criterion_10_degenerate_certificate(capsys):
    rep = run_suite("acyclicity-degenerate", max_degree=4)
    zero = all(v["homology"][:4] == ["0"] * 4 for v in rep.summary.values())
    _report(
        capsys,
        10,
        "degenerate subcomplex certificate for η, L_1, L_2, C_2 at N = 4, SNF agrees",
        rep.passed and zero,
        f"{rep.checks} paired generators, {len(rep.failures)} failures",
    )


def test_criterion_11_dendroidal_identities(capsys):
    rep = run_suite("identities", **WIDE)
    detail = f"{rep.summary['composable_pairs']} pairs, {rep.summary['codim2_groups']} codim-2 groups, {len(rep.failures)} failures"
    _report(capsys, 11, "every composable face pair swaps with cancelling signs", rep.passed, detail)


def test_criterion_12_negative_controls(capsys):
    # one flipped sign in a differential must break d² = 0
    c = unnormalized_complex(Representable(parse_tree("((e e) e)")), 3)
    col, i = next((col, i) for col in c.differentials[2].values() for i in col if c.differentials[1].get(i))
    col[i] = -col[i]
    dsq_caught = bool(c.d_squared_violations())

    # a pairing with two targets swapped must fail the certificate
    A = AInfinity()
    base = unnormalized_complex(A, 3, Bounds(None, 2))
    a, b = [ainfty_pairing(g, A) for g in base.generators[1] if not ainfty_is_canonical(g)][:2]

    def broken(g):
        h = ainfty_pairing(g, A)
        return b if h == a else a if h == b else h

    rep = run_suite("acyclicity-ainfty", max_vertices=2, max_arity=2, pairing=broken)
    pairing_caught = not rep.passed
    _report(
        capsys,
        12,
        "negative controls: flipped sign fails d², swapped pairing fails the certificate",
        dsq_caught and pairing_caught,
        f"d² caught: {dsq_caught}, pairing caught: {pairing_caught}",
    )


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
