# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled sign-coherence kernel.

Same contract as :func:`dendrohom.kernels.coherence_counts_py`; see there.
"""

from itertools import permutations

from libc.stdlib cimport free, malloc


def coherence_counts(children, faces):
    cdef int n = len(children)
    cdef int nf = len(faces)
    cdef int v, i, j, k, f, r, top, e, lab, inv, g, total_perm
    cdef long long orders = 0

    perm_lists = [list(permutations(c)) for c in children]
    cdef int *arity = <int *> malloc(n * sizeof(int))
    cdef int *count = <int *> malloc(n * sizeof(int))
    cdef int *offset = <int *> malloc(n * sizeof(int))
    cdef int *idx = <int *> malloc(n * sizeof(int))
    cdef int *labels = <int *> malloc(n * sizeof(int))
    cdef int *stack = <int *> malloc((n + 1) * sizeof(int))
    cdef int *removed = <int *> malloc((nf + 1) * sizeof(int))
    cdef int *kind = <int *> malloc((nf + 1) * sizeof(int))
    cdef long long *plus = <long long *> malloc((nf + 1) * sizeof(long long))
    cdef long long *minus = <long long *> malloc((nf + 1) * sizeof(long long))
    total_perm = 0
    for v in range(n):
        arity[v] = len(children[v])
        count[v] = len(perm_lists[v])
        offset[v] = total_perm
        total_perm += count[v] * arity[v]
        idx[v] = 0
    cdef int *data = <int *> malloc((total_perm + 1) * sizeof(int))
    try:
        for v in range(n):
            k = offset[v]
            for perm in perm_lists[v]:
                for c in perm:
                    data[k] = c
                    k += 1
        for f in range(nf):
            removed[f] = faces[f][0]
            kind[f] = faces[f][1]
            plus[f] = 0
            minus[f] = 0
        while True:
            # labelling of the current planar order: pre-order walk
            lab = 0
            if n > 0:
                top = 1
                stack[0] = 0
                while top > 0:
                    top -= 1
                    v = stack[top]
                    labels[v] = lab
                    lab += 1
                    k = offset[v] + idx[v] * arity[v]
                    for i in range(arity[v] - 1, -1, -1):
                        e = data[k + i]
                        if e >= 0:
                            stack[top] = e
                            top += 1
            for f in range(nf):
                r = removed[f]
                # inversions involving r give sgn(p0, p) * sgn(p0_f, p_f)
                inv = 0
                for j in range(n):
                    if (j < r and labels[j] > labels[r]) or (j > r and labels[j] < labels[r]):
                        inv += 1
                if kind[f] == 0:
                    g = labels[r] + inv
                elif kind[f] == 1:
                    g = labels[r] + 1 + inv
                else:
                    g = inv
                if g % 2 == 0:
                    plus[f] += 1
                else:
                    minus[f] += 1
            orders += 1
            # next planar order (mixed radix over the per-vertex permutations)
            v = 0
            while v < n:
                idx[v] += 1
                if idx[v] < count[v]:
                    break
                idx[v] = 0
                v += 1
            if v == n:
                break
        return orders, [(plus[f], minus[f]) for f in range(nf)]
    finally:
        free(arity)
        free(count)
        free(offset)
        free(idx)
        free(labels)
        free(stack)
        free(removed)
        free(kind)
        free(plus)
        free(minus)
        free(data)
