"""Independent reference computations used by the tests.

Nothing here imports the code under test beyond the plain tree data
structure, so agreement is evidence rather than tautology.
"""

from __future__ import annotations

import itertools

import sympy


# ---------------------------------------------------------------- trees
def _above(t, a, b):
    """Edge ``a`` lies in the subtree hanging from edge ``b`` (inclusive)."""
    while a != b:
        v = t.edge_parent[a]
        if v < 0:
            return False
        a = t.vertex_out[v]
    return True


def _is_cut(t, out, ins):
    """``ins`` is an upward cut of ``t`` above ``out``: an operation out ← ins."""
    if len(set(ins)) != len(ins):
        return False
    for i in ins:
        if i == out or not _above(t, i, out):
            return False
    for a, b in itertools.permutations(ins, 2):
        if _above(t, a, b):
            return False

    def covered(e):
        # every maximal upward path from e meets ins (or ends at a stump)
        if e in ins:
            return True
        v = t.edge_top[e]
        if v < 0:
            return False
        return all(covered(c) for c in t.vertex_inputs[v])

    v = t.edge_top[out]
    if v < 0:
        return False
    return all(covered(c) for c in t.vertex_inputs[v])


def brute_hom(s, t):
    """All edge maps ``s → t`` that send every vertex to an operation of Ω(t)."""
    out = []
    for f in itertools.product(range(t.n_edges), repeat=s.n_edges):
        ok = True
        for v in range(s.n_vertices):
            o = f[s.vertex_out[v]]
            ins = [f[e] for e in s.vertex_inputs[v]]
            if len(ins) == 1 and ins[0] == o:
                continue  # identity operation: a degeneracy
            if not _is_cut(t, o, ins):
                ok = False
                break
        if ok:
            out.append(tuple(f))
    return sorted(out)


def labels_by_hand(t, p):
    """Vertex labels from a recursive planar walk (root 0, left branches first)."""
    labels = {}

    def walk(e):
        v = t.edge_top[e]
        if v < 0:
            return
        labels[v] = len(labels)
        for c in p[v]:
            walk(c)

    walk(0)
    return tuple(labels[v] for v in range(t.n_vertices))


def perm_sign(seq):
    inv = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
    return -1 if inv % 2 else 1


# ---------------------------------------------------------------- algebra
def sympy_invariants(rows):
    """Nonzero invariant factors of an integer matrix, via sympy."""
    from sympy.matrices.normalforms import smith_normal_form

    if not rows or not rows[0]:
        return []
    m = sympy.Matrix(rows)
    d = smith_normal_form(m, domain=sympy.ZZ)
    return sorted(abs(int(d[i, i])) for i in range(min(d.shape)) if d[i, i] != 0)


def integral_homology(mats, dims):
    """Homology of ``C_top → … → C_0`` given dense matrices ``mats[n]: C_n → C_{n-1}``.

    Returns ``[(rank, torsion), ...]`` for every degree.
    """
    out = []
    N = len(dims) - 1
    facs = {}
    for n in range(1, N + 1):
        rows = mats[n]
        facs[n] = sympy_invariants(rows) if dims[n] and dims[n - 1] else []
    for n in range(N + 1):
        r_out = len(facs.get(n, []))
        incoming = facs.get(n + 1, [])
        rank = dims[n] - r_out - len(incoming)
        out.append((rank, sorted(d for d in incoming if d > 1)))
    return out


def simplicial_chain(sset_json):
    """Normalized simplicial chains of a finite simplicial set, from first principles.

    Input is the JSON form (name, dim, faces); a face given with a
    non-identity map is degenerate and contributes nothing.
    """
    simplices = sset_json["simplices"]
    by_dim = {}
    for s in simplices:
        by_dim.setdefault(s["dim"], []).append(s["name"])
    top = max(by_dim)
    dims = [len(by_dim.get(n, [])) for n in range(top + 1)]
    index = {n: {name: i for i, name in enumerate(sorted(by_dim.get(n, [])))} for n in by_dim}
    mats = {}
    for n in range(1, top + 1):
        m = [[0] * dims[n] for _ in range(dims[n - 1])]
        for s in simplices:
            if s["dim"] != n:
                continue
            j = index[n][s["name"]]
            for i, f in enumerate(s["faces"]):
                if isinstance(f, dict):
                    name, mp = f["simplex"], f.get("map", list(range(n)))
                    if list(mp) != list(range(n)):
                        continue
                else:
                    name = f
                m[index[n - 1][name]][j] += (-1) ** i
        mats[n] = m
    return mats, dims


def simplex_json(n):
    """Δ[n] in the JSON format: all non-empty subsets of {0..n}."""
    out = []
    for k in range(n + 1):
        for sub in itertools.combinations(range(n + 1), k + 1):
            ent = {"name": "".join(map(str, sub)), "dim": k}
            if k:
                ent["faces"] = ["".join(map(str, sub[:i] + sub[i + 1 :])) for i in range(k + 1)]
            out.append(ent)
    return {"simplices": out}


SPHERE2 = {
    "simplices": [
        {"name": "v", "dim": 0},
        {
            "name": "s",
            "dim": 2,
            "faces": [{"simplex": "v", "map": [0, 0]}] * 3,
        },
    ]
}
