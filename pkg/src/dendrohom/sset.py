"""Finite simplicial sets given by their non-degenerate simplices.

An n-simplex is a pair ``(name, surjection)``: a non-degenerate k-simplex
together with a monotone surjection ``[n] → [k]`` written as a tuple.  A
non-degenerate simplex records its faces ``d_0 .. d_k`` as such pairs.

JSON input::

    {"simplices": [
        {"name": "v", "dim": 0},
        {"name": "s", "dim": 2,
         "faces": [{"simplex": "v", "map": [0, 0]}, "edge-name", ...]}
    ]}

A face given as a bare name means that non-degenerate simplex itself; the
object form gives a degenerate face through the surjection ``map`` from
``[dim-1]`` onto the named simplex's vertices.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

__all__ = ["Simplex", "FiniteSimplicialSet", "SimplicialSetError", "standard_simplex"]


class SimplicialSetError(ValueError):
    pass


class Simplex(NamedTuple):
    name: str
    map: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.map) - 1

    def is_degenerate(self) -> bool:
        return self.map != tuple(range(len(self.map)))

    def __str__(self):
        if not self.is_degenerate():
            return self.name
        return f"{self.name}@{','.join(map(str, self.map))}"


def _identity(k: int) -> tuple[int, ...]:
    return tuple(range(k + 1))


def _coface(i: int, k: int) -> tuple[int, ...]:
    """The injection [k-1] → [k] skipping ``i``."""
    return tuple(j if j < i else j + 1 for j in range(k))


@dataclass
class FiniteSimplicialSet:
    dims: dict[str, int]
    faces: dict[str, tuple[Simplex, ...]] = field(default_factory=dict)

    def __post_init__(self):
        self._by_dim: dict[int, list[str]] = {}
        for name, k in sorted(self.dims.items(), key=lambda kv: (kv[1], kv[0])):
            self._by_dim.setdefault(k, []).append(name)
        self._cache: dict[int, tuple[Simplex, ...]] = {}
        self.validate()

    # ------------------------------------------------------------ structure
    @property
    def dimension(self) -> int:
        return max(self.dims.values(), default=-1)

    def nondegenerate(self, n: int) -> list[str]:
        return list(self._by_dim.get(n, []))

    def simplices(self, n: int) -> tuple[Simplex, ...]:
        """All n-simplices, degenerate ones included."""
        if n not in self._cache:
            out = []
            for k in range(min(n, self.dimension) + 1):
                for surj in _surjections(n, k):
                    out.extend(Simplex(name, surj) for name in self._by_dim.get(k, []))
            self._cache[n] = tuple(sorted(out))
        return self._cache[n]

    def pull(self, theta, x: Simplex) -> Simplex:
        """``θ*(x)`` for a monotone map ``θ: [m] → [n]`` with ``n = dim x``."""
        comp = tuple(x.map[t] for t in theta)
        image = sorted(set(comp))
        surj = tuple(image.index(c) for c in comp)
        face = self._face(x.name, tuple(image))
        return Simplex(face.name, tuple(face.map[s] for s in surj))

    def _face(self, name: str, inj: tuple[int, ...]) -> Simplex:
        """Face of a non-degenerate simplex along an injection given by its image."""
        k = self.dims[name]
        if len(inj) == k + 1:
            return Simplex(name, _identity(k))
        i = next(j for j in range(k + 1) if j not in inj)
        rest = tuple(j if j < i else j - 1 for j in inj)
        return self.pull(rest, self.faces[name][i])

    def face(self, i: int, x: Simplex) -> Simplex:
        return self.pull(_coface(i, x.dim), x)

    def degeneracy(self, i: int, x: Simplex) -> Simplex:
        n = x.dim
        return self.pull(tuple(j if j <= i else j - 1 for j in range(n + 2)), x)

    def validate(self):
        for name, k in self.dims.items():
            fs = self.faces.get(name, ())
            if k == 0:
                if fs:
                    raise SimplicialSetError(f"vertex {name!r} cannot have faces")
                continue
            if len(fs) != k + 1:
                raise SimplicialSetError(f"simplex {name!r} needs {k + 1} faces")
            for f in fs:
                if f.name not in self.dims:
                    raise SimplicialSetError(f"unknown simplex {f.name!r} in faces of {name!r}")
                if f.dim != k - 1 or not _is_surjection(f.map, self.dims[f.name]):
                    raise SimplicialSetError(f"bad face {f} of {name!r}")
        for name, k in self.dims.items():
            x = Simplex(name, _identity(k))
            for i, j in itertools.combinations(range(k + 1), 2):
                if k < 2:
                    continue
                if self.face(i, self.face(j, x)) != self.face(j - 1, self.face(i, x)):
                    raise SimplicialSetError(
                        f"simplicial identity d{i}d{j} = d{j - 1}d{i} fails on {name!r}"
                    )

    # --------------------------------------------------------------- input
    @classmethod
    def from_json(cls, data) -> "FiniteSimplicialSet":
        if isinstance(data, (str, Path)):
            data = json.loads(Path(data).read_text())
        try:
            entries = data["simplices"]
        except (TypeError, KeyError):
            raise SimplicialSetError("expected an object with a 'simplices' list") from None
        dims = {}
        for ent in entries:
            if ent["name"] in dims:
                raise SimplicialSetError(f"duplicate simplex {ent['name']!r}")
            dims[ent["name"]] = int(ent["dim"])
        faces = {}
        for ent in entries:
            k = dims[ent["name"]]
            out = []
            for f in ent.get("faces", []):
                if isinstance(f, str):
                    if f not in dims:
                        raise SimplicialSetError(f"unknown simplex {f!r}")
                    out.append(Simplex(f, _identity(dims[f])))
                else:
                    out.append(Simplex(f["simplex"], tuple(f.get("map", _identity(k - 1)))))
            faces[ent["name"]] = tuple(out)
        return cls(dims, faces)

    def to_json(self) -> dict:
        out = []
        for name, k in sorted(self.dims.items(), key=lambda kv: (kv[1], kv[0])):
            ent = {"name": name, "dim": k}
            if k:
                ent["faces"] = [
                    f.name if not f.is_degenerate() else {"simplex": f.name, "map": list(f.map)}
                    for f in self.faces[name]
                ]
            out.append(ent)
        return {"simplices": out}


def _is_surjection(m, k) -> bool:
    return all(a <= b for a, b in zip(m, m[1:])) and set(m) == set(range(k + 1))


def _surjections(n: int, k: int):
    """Monotone surjections [n] → [k] as tuples, lexicographic."""
    for cuts in itertools.combinations(range(1, n + 1), k):
        out, level = [], 0
        for j in range(n + 1):
            if level < k and j == cuts[level]:
                level += 1
            out.append(level)
        yield tuple(out)


def standard_simplex(n: int) -> FiniteSimplicialSet:
    """Δ[n]: one non-degenerate simplex per non-empty subset of {0..n}."""
    dims, faces = {}, {}
    for k in range(n + 1):
        for sub in itertools.combinations(range(n + 1), k + 1):
            name = "-".join(map(str, sub))
            dims[name] = k
            if k:
                faces[name] = tuple(
                    Simplex("-".join(map(str, sub[:i] + sub[i + 1 :])), _identity(k - 1))
                    for i in range(k + 1)
                )
    return FiniteSimplicialSet(dims, faces)
