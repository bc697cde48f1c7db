import itertools
import os
import subprocess
import sys

import pytest

from dendrohom import kernels
from dendrohom.signs import (
    coherence_holds,
    face_sign,
    is_planar_order,
    permutation_sign,
    planar_labelling,
    planar_orders,
    planar_structure_sign,
    realize,
    sign_coherence,
    sign_coherence_literal,
    standard_order,
    transfer_planar,
)
from dendrohom.signs import _kernel_input
from dendrohom.trees import Face, apply_face, corolla, elementary_faces, enumerate_trees, linear_tree, parse_tree

from oracles import labels_by_hand, perm_sign

MIXED_TREE = "((((e e)) (e e e)) e (e))"


# ------------------------------------------------------------- labels
@pytest.mark.parametrize("text", ["((e) (e e))", "(((e) e) (e))", MIXED_TREE, "(() (e e) e)"])
def test_labelling_matches_recursive_walk(text):
    t = parse_tree(text)
    for p in itertools.islice(planar_orders(t), 200):
        assert planar_labelling(t, p) == labels_by_hand(t, p)


def test_standard_labelling_is_vertex_id():
    t = parse_tree(MIXED_TREE)
    assert planar_labelling(t) == tuple(range(6))
    assert planar_labelling(t, standard_order(t)) == tuple(range(6))


def test_permutation_sign_matches_inversion_count():
    for perm in itertools.permutations(range(5)):
        assert permutation_sign(perm) == perm_sign(perm)
    assert permutation_sign(["b", "a"]) == -1


def test_planar_orders_count():
    assert len(list(planar_orders(parse_tree(MIXED_TREE)))) == 6 * 2 * 1 * 2 * 6 * 1
    assert is_planar_order(corolla(2), ((2, 1),))
    assert not is_planar_order(corolla(2), ((1, 1),))


# --------------------------------------------------------- face signs
def test_mixed_tree_face_signs():
    t = parse_tree(MIXED_TREE)
    got = {str(f): face_sign(t, f) for f in elementary_faces(t)}
    assert got == {
        "inner:1": -1,
        "inner:2": 1,
        "inner:3": -1,
        "inner:6": 1,
        "inner:11": -1,
        "top:3": 1,
        "top:4": -1,
        "top:5": 1,
    }


def test_corolla_signs():
    t = corolla(2)
    assert [face_sign(t, f) for f in elementary_faces(t)] == [-1, 1, 1]


def test_linear_and_binary_signs():
    t = parse_tree("((e e) e)")
    assert [face_sign(t, f) for f in elementary_faces(t)] == [-1, 1, 1]
    t = linear_tree(2)
    assert [face_sign(t, f) for f in elementary_faces(t)] == [-1, 1, 1]


def test_face_sign_depends_on_planar_order():
    t = parse_tree("((e) (e))")
    swapped = ((3, 1), (2,), (4,))
    assert face_sign(t, Face("inner", 1)) == -1
    assert face_sign(t, Face("inner", 1), swapped) == 1


def test_face_sign_rejects_non_faces():
    with pytest.raises(ValueError):
        face_sign(corolla(2), Face("inner", 1))


# ----------------------------------------------------- planar structure
def test_two_branch_swap_is_odd():
    t = parse_tree("((e) (e))")
    p = standard_order(t)
    q = ((3, 1), (2,), (4,))
    assert planar_structure_sign(t, q, p) == -1
    assert planar_structure_sign(t, p, p) == 1


def test_planar_sign_is_multiplicative():
    t = parse_tree("((e) (e) (e))")
    orders = list(planar_orders(t))
    for a, b, c in itertools.product(orders, repeat=3):
        assert planar_structure_sign(t, a, c) == planar_structure_sign(t, a, b) * planar_structure_sign(t, b, c)


def test_transfer_and_realize():
    t = parse_tree("((e) e)")
    p = ((3, 1), (2,))
    tree, iso = realize(t, p)
    assert str(tree) == "(e (e))"
    assert transfer_planar(iso, p) == standard_order(tree)


# ------------------------------------------------------------ coherence
def _n_orders(t):
    return len(list(planar_orders(t)))


# the literal check is quadratic in the number of orders
SMALL = [t for n in range(4) for t in enumerate_trees(n, 3, "iso") if _n_orders(t) <= 24]


@pytest.mark.parametrize("t", SMALL, ids=str)
def test_coherence_closed_form_agrees_with_literal(t):
    fast = sign_coherence(t)
    slow = sign_coherence_literal(t)
    assert fast.holds and slow.holds
    assert (fast.orders, fast.faces, fast.pairs) == (slow.orders, slow.faces, slow.pairs)


@pytest.mark.parametrize("text", [MIXED_TREE, "((e e e) (e e e) (e e e))", "(((e e) e) (e e) e)"])
def test_coherence_on_larger_trees(text):
    rep = sign_coherence(parse_tree(text))
    assert rep.holds and rep.pairs == rep.orders ** 2 * rep.faces


def test_backends_agree():
    for n in range(5):
        for t in enumerate_trees(n, 3, "iso")[:60]:
            ch, fa = _kernel_input(t)
            assert kernels.coherence_counts(ch, fa) == kernels.coherence_counts_py(ch, fa)


@pytest.mark.skipif(not kernels.compiled_available(), reason="extension not built")
def test_compiled_backend_selected_by_default():
    assert kernels.BACKEND == "cython"


def test_pure_python_override():
    code = "from dendrohom import kernels; print(kernels.BACKEND)"
    env = dict(os.environ, DENDROHOM_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


# ---------------------------------------------------- negative controls
def test_mutated_face_kind_breaks_coherence():
    t = parse_tree("((e e) (e))")
    ch, fa = _kernel_input(t)
    # a top face charged as a bottom face loses its label parity
    bad = [(r, 2 if k == 1 else k) for r, k in fa]
    orders, tallies = kernels.coherence_counts(ch, bad)
    assert sum(a * b for a, b in tallies) > 0


def test_wrong_inner_sign_breaks_literal_check(monkeypatch):
    import dendrohom.signs as signs

    real = signs.face_sign

    def broken(t, f, p=None):
        # forget the planar order: a natural mistake
        return real(t, f)

    monkeypatch.setattr(signs, "face_sign", broken)
    t = parse_tree("((e) (e))")
    assert sign_coherence_literal(t).violations > 0


def test_single_triple_check():
    t = parse_tree("((e) (e))")
    q = ((3, 1), (2,), (4,))
    for f in elementary_faces(t):
        assert coherence_holds(t, q, standard_order(t), f)
    ft, _ = apply_face(t, Face("inner", 1))
    assert str(ft) == "(e (e))"
