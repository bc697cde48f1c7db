"""Exact Smith normal form for sparse integer matrices.

Elimination works on a dict-of-rows matrix, always pivoting on an entry of
least absolute value (ties broken by the sparser row).  A pivot that fails
to divide its row or column is replaced by the remainder, so entries never
grow past what the input forces.  The resulting diagonal is then brought
into divisibility order by gcd/lcm exchanges.
"""

from __future__ import annotations

from math import gcd
from typing import Iterable, Mapping

__all__ = ["smith_normal_form", "invariant_factors", "rank"]

Rows = dict[int, dict[int, int]]


def _as_rows(matrix) -> Rows:
    """Accept a dense row list or a ``{col: {row: v}}`` column dict."""
    rows: Rows = {}
    if isinstance(matrix, Mapping):
        for j, col in matrix.items():
            for i, v in col.items():
                if v:
                    rows.setdefault(i, {})[j] = v
        return rows
    for i, row in enumerate(matrix):
        r = {j: int(v) for j, v in enumerate(row) if v}
        if r:
            rows[i] = r
    return rows


def _diagonal(rows: Rows) -> list[int]:
    cols: dict[int, set[int]] = {}
    for i, r in rows.items():
        for j in r:
            cols.setdefault(j, set()).add(i)
    diag = []

    def add_row(dst: int, src: int, q: int):
        # row[dst] -= q * row[src]
        rd = rows[dst]
        for j, v in rows[src].items():
            w = rd.get(j, 0) - q * v
            if w:
                if j not in rd:
                    cols[j].add(dst)
                rd[j] = w
            elif j in rd:
                del rd[j]
                cols[j].discard(dst)

    def add_col(dst: int, src: int, q: int):
        # col[dst] -= q * col[src]
        for i in list(cols[src]):
            r = rows[i]
            w = r.get(dst, 0) - q * r[src]
            if w:
                if dst not in r:
                    cols.setdefault(dst, set()).add(i)
                r[dst] = w
            elif dst in r:
                del r[dst]
                cols[dst].discard(i)

    while True:
        best = None
        for i, r in rows.items():
            if not r:
                continue
            for j, v in r.items():
                key = (abs(v), len(r))
                if best is None or key < best[0]:
                    best = (key, i, j)
                    if key == (1, 1):
                        break
            if best[0][0] == 1 and best[0][1] <= 2:
                break
        if best is None:
            break
        _, i, j = best
        while True:
            p = rows[i][j]
            moved = False
            for ii in list(cols[j]):
                if ii == i:
                    continue
                q = rows[ii][j] // p
                add_row(ii, i, q)
                if j in rows[ii]:
                    # remainder smaller than the pivot: pivot there instead
                    i, moved = ii, True
                    break
            if moved:
                continue
            for jj in list(rows[i]):
                if jj == j:
                    continue
                q = rows[i][jj] // p
                add_col(jj, j, q)
                if jj in rows[i]:
                    j, moved = jj, True
                    break
            if not moved:
                break
        diag.append(abs(rows[i][j]))
        # the pivot's row and column are clear apart from the pivot itself
        rows.pop(i)
        cols.pop(j)
    return diag


def _divisibility_chain(diag: Iterable[int]) -> list[int]:
    ones = [d for d in diag if d == 1]
    rest = sorted(d for d in diag if d != 1)
    for a in range(len(rest)):
        for b in range(a + 1, len(rest)):
            x, y = rest[a], rest[b]
            g = gcd(x, y)
            rest[a], rest[b] = g, x // g * y
    return ones + sorted(rest)


def smith_normal_form(matrix) -> tuple[list[int], int]:
    """Invariant factors ``d1 | d2 | ...`` (all nonzero ones) and the rank."""
    factors = _divisibility_chain(_diagonal(_as_rows(matrix)))
    return factors, len(factors)


def invariant_factors(matrix) -> list[int]:
    return smith_normal_form(matrix)[0]


def rank(matrix) -> int:
    return smith_normal_form(matrix)[1]
