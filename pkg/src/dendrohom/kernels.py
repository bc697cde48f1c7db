"""Hot loops with a compiled implementation and a pure-Python fallback.

The compiled module ``dendrohom._kernels`` is used when it was built and
``DENDROHOM_PURE_PYTHON`` is unset; otherwise the Python versions below
run.  Both compute identical results.
"""

from __future__ import annotations

import itertools
import os

__all__ = ["BACKEND", "coherence_counts", "coherence_counts_py", "compiled_available"]


def coherence_counts_py(children, faces):
    """Tally the sign-coherence invariant over all planar orders of a tree.

    ``children[v]`` lists the vertices above vertex ``v`` in standard order,
    ``-1`` standing for a leaf; vertex ids are the standard labels.  Each
    face is ``(r, kind)`` with ``r`` the vertex that disappears (the upper
    vertex of an inner edge, the chopped top vertex, or the root) and kind
    0/1/2 for inner/top/bottom.

    For every planar order ``p`` and face ``f`` the value
    ``sgn(p0, p) · sgn_p(f) · sgn(p0_f, p_f)`` is ±1; the face labelling is
    the labelling of ``p`` with ``r`` deleted, so the two permutation signs
    combine into the parity of the inversions through ``r``.  Returns the
    number of orders and per-face ``(#+1, #-1)``.
    """
    n = len(children)
    plus = [0] * len(faces)
    minus = [0] * len(faces)
    orders = 0
    for choice in itertools.product(*(itertools.permutations(c) for c in children)):
        labels = [0] * n
        lab = 0
        stack = [0] if n else []
        while stack:
            v = stack.pop()
            labels[v] = lab
            lab += 1
            stack.extend(c for c in reversed(choice[v]) if c >= 0)
        for f, (r, kind) in enumerate(faces):
            lr = labels[r]
            inv = sum(1 for j in range(r) if labels[j] > lr)
            inv += sum(1 for j in range(r + 1, n) if labels[j] < lr)
            g = inv + (lr if kind == 0 else lr + 1 if kind == 1 else 0)
            if g % 2:
                minus[f] += 1
            else:
                plus[f] += 1
        orders += 1
    return orders, list(zip(plus, minus))


try:
    from ._kernels import coherence_counts as _compiled_counts
except ImportError:  # extension not built
    _compiled_counts = None


def compiled_available() -> bool:
    return _compiled_counts is not None


if _compiled_counts is not None and not os.environ.get("DENDROHOM_PURE_PYTHON"):
    BACKEND = "cython"
    coherence_counts = _compiled_counts
else:
    BACKEND = "python"
    coherence_counts = coherence_counts_py
