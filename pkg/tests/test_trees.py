import pytest

from dendrohom.trees import (
    DendroidalIdentityError,
    Face,
    PlanarTree,
    TreeSyntaxError,
    apply_degeneracy,
    apply_face,
    automorphisms,
    canonical_form,
    check_dendroidal_identity,
    codim2_index,
    corolla,
    elementary_faces,
    enumerate_trees,
    eta,
    is_canonical,
    is_morphism,
    isomorphisms,
    linear_tree,
    parse_face,
    parse_tree,
)
from dendrohom.dset import hom_set

from oracles import brute_hom


# ------------------------------------------------------------- parsing
@pytest.mark.parametrize(
    "text, vertices, edges",
    [("e", 0, 1), ("(e e)", 1, 3), ("((e) e)", 2, 4), ("()", 1, 1), ("((((e e)) (e e e)) e (e))", 6, 13)],
)
def test_parse_counts(text, vertices, edges):
    t = parse_tree(text)
    assert (t.n_vertices, t.n_edges) == (vertices, edges)
    assert str(t) == text


def test_parse_structure_of_unary_left_branch():
    t = parse_tree("((e) e)")
    assert t.vertex_inputs[0] == (1, 3)
    assert t.edge_top[1] == 1 and t.edge_top[3] == -1
    assert t.leaves == (2, 3)


@pytest.mark.parametrize("bad", ["", "(", "(e", "e)", "(e))", "x", "(e f)", "e e"])
def test_parse_errors_name_position(bad):
    with pytest.raises(TreeSyntaxError) as info:
        parse_tree(bad)
    assert info.value.position >= 0


def test_whitespace_is_ignored():
    assert parse_tree(" ( e  ( e ) ) ") == parse_tree("(e (e))")


def test_named_trees():
    assert str(eta()) == "e"
    assert str(linear_tree(2)) == "((e))"
    assert str(corolla(3)) == "(e e e)"
    assert str(corolla(0)) == "()"


# --------------------------------------------------------------- faces
def test_faces_of_linear_tree():
    assert elementary_faces(linear_tree(2)) == [Face("inner", 1), Face("top", 1), Face("bottom", 1)]


def test_faces_of_corolla():
    assert elementary_faces(corolla(2)) == [Face("top", 0), Face("bottom", 1), Face("bottom", 2)]


def test_faces_with_single_inner_input_at_root():
    t = parse_tree("((e e) e)")
    assert elementary_faces(t) == [Face("inner", 1), Face("top", 1), Face("bottom", 1)]


def test_no_bottom_face_when_root_has_two_inner_inputs():
    t = parse_tree("((e) (e))")
    assert all(f.kind != "bottom" for f in elementary_faces(t))


def test_inner_face_merges_vertices():
    ft, m = apply_face(parse_tree("((e) e)"), Face("inner", 1))
    assert str(ft) == "(e e)"
    assert m.edges == (0, 2, 3)


def test_top_face_of_corolla_is_root_edge():
    ft, m = apply_face(corolla(2), Face("top", 0))
    assert ft == eta() and m.edges == (0,)


def test_bottom_face_keeps_left_subtree():
    ft, m = apply_face(parse_tree("((e e) e)"), Face("bottom", 1))
    assert str(ft) == "(e e)" and m.edges == (1, 2, 3)


def test_invalid_face_rejected():
    with pytest.raises(ValueError):
        apply_face(corolla(2), Face("inner", 1))


def test_parse_face():
    assert parse_face("inner:3") == Face("inner", 3)
    with pytest.raises(TreeSyntaxError):
        parse_face("side:1")
    with pytest.raises(TreeSyntaxError):
        parse_face("top:x")


# --------------------------------------------------------- degeneracies
def test_degeneracies():
    assert apply_degeneracy(eta(), 0)[0] == linear_tree(1)
    assert {str(apply_degeneracy(linear_tree(1), e)[0]) for e in range(2)} == {"((e))"}
    t, m = apply_degeneracy(corolla(2), 0)
    assert str(t) == "((e e))"
    assert m.edges == (0, 0, 1, 2)
    with pytest.raises(ValueError):
        apply_degeneracy(eta(), 1)


# ------------------------------------------------------- isomorphisms
def test_automorphism_counts():
    assert len(automorphisms(corolla(2))) == 2
    assert len(automorphisms(parse_tree("((e) e)"))) == 1
    assert isomorphisms(corolla(2), corolla(3)) == ()
    for n in range(5):
        assert len(automorphisms(corolla(n))) == [1, 1, 2, 6, 24][n]


def test_isomorphisms_are_morphisms_and_invertible():
    s, t = parse_tree("(e (e) (e e))"), parse_tree("((e e) e (e))")
    isos = isomorphisms(s, t)
    assert len(isos) == 2
    for m in isos:
        assert is_morphism(s, t, m.edges)
        assert (m.inverse() @ m).edges == tuple(range(s.n_edges))


def test_canonical_form():
    c, m = canonical_form(parse_tree("(e (e))"))
    assert str(c) == "((e) e)"
    assert m.target == c and is_morphism(parse_tree("(e (e))"), c, m.edges)
    assert canonical_form(corolla(2))[0] == corolla(2)
    assert canonical_form(parse_tree("(() e)"))[0] == canonical_form(parse_tree("(e ())"))[0]
    assert is_canonical(parse_tree("((e) e)")) and not is_canonical(parse_tree("(e (e))"))


# ---------------------------------------------------------- enumeration
def test_enumeration_small():
    assert [str(t) for t in enumerate_trees(0, 3)] == ["e"]
    assert sorted(map(str, enumerate_trees(1, 2))) == ["()", "(e e)", "(e)"]


def test_enumeration_two_vertices_binary():
    got = sorted(map(str, enumerate_trees(2, 2)))
    # nine planar trees; the two with a binary vertex above a binary root
    # are easy to forget
    assert got == sorted(
        ["(())", "((e))", "((e e))", "(() e)", "(e ())", "((e) e)", "(e (e))", "((e e) e)", "(e (e e))"]
    )


def test_enumeration_iso_classes_are_canonical_representatives():
    for n in range(4):
        planar = enumerate_trees(n, 3)
        iso = enumerate_trees(n, 3, "iso")
        assert all(is_canonical(t) for t in iso)
        assert {canonical_form(t)[0] for t in planar} == set(iso)


def test_family_sizes():
    assert [len(enumerate_trees(n, 3, "iso")) for n in range(5)] == [1, 4, 12, 56, 284]


# ------------------------------------------------------------- hom sets
@pytest.mark.parametrize(
    "s, t",
    [
        ("e", "(e e)"),
        ("(e)", "(e)"),
        ("(e e)", "(e)"),
        ("(e)", "((e e) e)"),
        ("((e))", "(() e)"),
        ("(e e)", "((e e) e)"),
        ("((e) e)", "((e e) (e))"),
        ("(())", "(() ())"),
        ("(e ())", "((e) ())"),
        ("((e e))", "((e e) e)"),
        ("(e e e)", "((e e) e)"),
    ],
)
def test_hom_sets_match_brute_force(s, t):
    s, t = parse_tree(s), parse_tree(t)
    assert sorted(m.edges for m in hom_set(s, t)) == brute_hom(s, t)


def test_documented_hom_counts():
    assert len(hom_set(eta(), corolla(2))) == 3
    assert len(hom_set(linear_tree(1), linear_tree(1))) == 3
    assert hom_set(corolla(2), linear_tree(1)) == []


# ---------------------------------------------------- dendroidal identities
def test_commuting_inner_contractions():
    t = parse_tree("((e) (e))")
    # inner edges are 1 and 3; contracting 1 renumbers 3 to 2
    f, g = Face("inner", 1), Face("inner", 3)
    ft, _ = apply_face(t, f)
    g_after = [h for h in elementary_faces(ft) if h.kind == "inner"][0]
    assert check_dendroidal_identity(t, f, g_after) == (g, Face("inner", 1))


def test_linear_top_top_swaps_to_inner_top():
    t = linear_tree(2)
    ft, _ = apply_face(t, Face("top", 1))
    assert ft == linear_tree(1)
    swap = check_dendroidal_identity(t, Face("top", 1), Face("top", 0))
    assert swap == (Face("inner", 1), Face("top", 0))


def test_inner_then_top_swaps_to_two_tops():
    t = parse_tree("((e) e)")
    ft, _ = apply_face(t, Face("inner", 1))
    assert Face("top", 0) in elementary_faces(ft)
    assert check_dendroidal_identity(t, Face("inner", 1), Face("top", 0)) == (Face("top", 1), Face("top", 0))


def test_codim2_groups_are_pairs():
    for n in range(5):
        for t in enumerate_trees(n, 3, "iso"):
            assert all(len(p) == 2 for p in codim2_index(t).values())


def test_identity_error_carries_witness():
    err = DendroidalIdentityError(corolla(2), Face("top", 0), Face("top", 0))
    assert err.witness == {"tree": "(e e)", "f": "top:0", "g": "top:0"}


def test_planar_tree_equality_and_pickle():
    import pickle

    t = parse_tree("((e e) e)")
    assert pickle.loads(pickle.dumps(t)) == t
    assert hash(t) == hash(PlanarTree(((None, None), None)))
