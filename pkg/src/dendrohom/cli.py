"""Command-line front end.

Subcommands::

    dendrohom homology  --space DESC [--max-degree N] [--coeff z|q|z/m] [--cohomology]
    dendrohom verify    SUITE [--max-vertices V] [--max-arity A]
    dendrohom enumerate trees|generators [--space DESC] [--vertices n] [--degree n]

Space descriptors: ``omega:<tree>``, ``boundary:<tree>``,
``horn:<tree>:<face>``, ``relative-boundary:<tree>``, ``ainfty:<V>:<A>``,
``simplicial:<path.json>`` (or the name of a bundled set such as
``sphere2``) and ``simplex:<n>``.

Exit codes: 0 ok, 1 a property failed, 2 usage or parse error, 3 bounds.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from .chain import normalized_complex, relative_complex, unnormalized_complex
from .dset import AInfinity, Boundary, Bounds, BoundsError, Horn, Representable, SimplicialImage, iso_classes
from .homology import cohomology, homology, parse_coefficients
from .sset import FiniteSimplicialSet, SimplicialSetError, standard_simplex
from .trees import TreeSyntaxError, elementary_faces, enumerate_trees, parse_face, parse_tree
from .verify import SUITES, builtin_sset, run_suite

EXIT_OK, EXIT_PROPERTY, EXIT_USAGE, EXIT_BOUNDS = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class SpaceSpec:
    """A parsed descriptor: the space, an optional subspace, enumeration bounds."""

    descriptor: str
    space: object
    sub: object = None
    bounds: Bounds | None = None
    max_degree: int | None = None  # hard ceiling, when the space imposes one
    note: str | None = None


def _tree(text: str, token: str, max_vertices: int):
    try:
        t = parse_tree(text)
    except TreeSyntaxError as exc:
        raise UsageError(f"bad tree in {token!r}: {exc}") from None
    if t.n_vertices > max_vertices:
        raise BoundsError(
            f"tree {t} has {t.n_vertices} vertices, above --max-vertices {max_vertices}"
        )
    return t


def parse_space(desc: str, max_vertices: int = 4, max_arity: int = 3) -> SpaceSpec:
    kind, sep, rest = desc.partition(":")
    if not sep or not rest:
        raise UsageError(f"bad space descriptor {desc!r}: expected <kind>:<argument>")
    if kind == "omega":
        t = _tree(rest, desc, max_vertices)
        return SpaceSpec(desc, Representable(t))
    if kind == "boundary":
        t = _tree(rest, desc, max_vertices)
        return SpaceSpec(desc, Boundary(t))
    if kind == "relative-boundary":
        t = _tree(rest, desc, max_vertices)
        return SpaceSpec(desc, Representable(t), sub=Boundary(t))
    if kind == "horn":
        parts = rest.rsplit(":", 2)
        if len(parts) != 3:
            raise UsageError(f"bad horn descriptor {desc!r}: expected horn:<tree>:<kind>:<index>")
        tree_text = parts[0][:-1] if parts[0].endswith(":") else parts[0]
        t = _tree(tree_text, desc, max_vertices)
        try:
            face = parse_face(f"{parts[1]}:{parts[2]}")
        except TreeSyntaxError:
            raise UsageError(f"bad face {parts[1]}:{parts[2]!s} in {desc!r}") from None
        if face not in elementary_faces(t):
            raise UsageError(f"{face} is not an elementary face of {t}")
        return SpaceSpec(desc, Horn(t, face))
    if kind == "ainfty":
        bits = rest.split(":")
        try:
            v, a = (int(b) for b in bits)
        except ValueError:
            raise UsageError(f"bad descriptor {desc!r}: expected ainfty:<maxVertices>:<maxArity>") from None
        if v < 0 or a < 0:
            raise UsageError(f"negative bound in {desc!r}")
        if v > max_vertices or a > max_arity:
            raise BoundsError(f"{desc} exceeds --max-vertices {max_vertices} / --max-arity {max_arity}")
        return SpaceSpec(
            desc,
            AInfinity(),
            bounds=Bounds(v, a),
            max_degree=v,
            note=f"generators with at most {v} vertices and arity at most {a}; "
            "this is a finite truncation, not the homology of A-infinity",
        )
    if kind == "simplex":
        try:
            n = int(rest)
        except ValueError:
            raise UsageError(f"bad simplex dimension {rest!r} in {desc!r}") from None
        if n < 0:
            raise UsageError(f"negative simplex dimension in {desc!r}")
        if n > max_vertices:
            raise BoundsError(f"simplex:{n} exceeds --max-vertices {max_vertices}")
        return SpaceSpec(desc, SimplicialImage(standard_simplex(n), desc))
    if kind == "simplicial":
        try:
            if Path(rest).is_file():
                sset = FiniteSimplicialSet.from_json(rest)
            else:
                sset = builtin_sset(rest)
        except FileNotFoundError:
            raise UsageError(f"no simplicial set file or bundled set named {rest!r}") from None
        except (SimplicialSetError, ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"bad simplicial set {rest!r}: {exc}") from None
        return SpaceSpec(desc, SimplicialImage(sset, desc))
    raise UsageError(f"unknown space kind {kind!r} in {desc!r}")


# ---------------------------------------------------------------- output
def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# -------------------------------------------------------------- commands
def cmd_homology(args) -> int:
    spec = parse_space(args.space, args.max_vertices, args.max_arity)
    coeff = parse_coefficients(args.coeff)
    N = args.max_degree
    if N is None:
        N = spec.max_degree if spec.max_degree is not None else 5
    if N < 0:
        raise UsageError("--max-degree must be non-negative")
    if spec.max_degree is not None and N > spec.max_degree:
        raise BoundsError(f"--max-degree {N} exceeds the enumeration bound {spec.max_degree} of {spec.descriptor}")
    if spec.sub is not None:
        c = relative_complex(spec.sub, spec.space, N, normalized=not args.unnormalized)
    elif args.unnormalized:
        c = unnormalized_complex(spec.space, N, spec.bounds)
    else:
        c = normalized_complex(spec.space, N, spec.bounds)
    table = (cohomology if args.cohomology else homology)(c, coeff)
    table.name = spec.descriptor
    if args.format == "json":
        doc = table.to_json()
        doc["complex"] = "unnormalized" if args.unnormalized else "normalized"
        doc["max_degree"] = N
        doc["chain_ranks"] = c.ranks()
        if spec.note:
            doc["note"] = spec.note
        text = _dump(doc)
    elif args.format == "csv":
        text = table.to_csv()
    else:
        text = table.to_text()
    _emit(text, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    kwargs = {}
    if args.max_vertices is not None:
        kwargs["max_vertices"] = args.max_vertices
    if args.max_arity is not None:
        kwargs["max_arity"] = args.max_arity
    if args.suite == "acyclicity-degenerate":
        if kwargs:
            raise UsageError("acyclicity-degenerate runs on a fixed tree list; use --max-degree")
        if args.max_degree is not None:
            kwargs["max_degree"] = args.max_degree
    rep = run_suite(args.suite, **kwargs)
    if args.format == "json":
        text = _dump(rep.to_json())
    else:
        verdict = "PASS" if rep.passed else "FAIL"
        text = f"{args.suite}: {verdict} ({rep.checks} checks)\n"
        if not rep.passed:
            text += _dump(rep.failures)
    _emit(text, args.out)
    return EXIT_OK if rep.passed else EXIT_PROPERTY


def cmd_enumerate(args) -> int:
    if args.kind == "trees":
        sizes = [args.vertices] if args.vertices is not None else range(args.max_vertices + 1)
        if args.vertices is not None and args.vertices > args.max_vertices:
            raise BoundsError(f"--vertices {args.vertices} exceeds --max-vertices {args.max_vertices}")
        items = [str(t) for n in sizes for t in enumerate_trees(n, args.max_arity, args.mode)]
        doc = {"kind": "trees", "mode": args.mode, "max_arity": args.max_arity, "count": len(items), "items": items}
        if args.vertices is not None:
            doc["vertices"] = args.vertices
    else:
        if not args.space:
            raise UsageError("enumerate generators needs --space")
        spec = parse_space(args.space, args.max_vertices, args.max_arity)
        top = spec.max_degree if spec.max_degree is not None else args.max_vertices
        degrees = [args.degree] if args.degree is not None else range(top + 1)
        if args.degree is not None and args.degree > top:
            raise BoundsError(f"--degree {args.degree} exceeds the bound {top} of {spec.descriptor}")
        bounds = spec.bounds or Bounds(None, args.max_arity)
        items = [
            str(g)
            for n in degrees
            for g in iso_classes(spec.space, n, bounds, nondegenerate=args.nondegenerate)
        ]
        doc = {"kind": "generators", "space": spec.descriptor, "nondegenerate": args.nondegenerate,
               "count": len(items), "items": items}
        if args.degree is not None:
            doc["degree"] = args.degree
    if args.format == "json":
        text = _dump(doc)
    elif args.format == "csv":
        text = "item\n" + "".join(f'"{i}"\n' for i in doc["items"])
    else:
        text = "".join(f"{i}\n" for i in doc["items"]) + f"count: {doc['count']}\n"
    _emit(text, args.out)
    return EXIT_OK


# ---------------------------------------------------------------- parser
def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dendrohom", description="Homology of dendroidal sets.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(q, vertices_default=4, arity_default=3):
        q.add_argument("--max-vertices", type=int, default=vertices_default)
        q.add_argument("--max-arity", type=int, default=arity_default)
        q.add_argument("--out", help="write the report here instead of stdout")

    h = sub.add_parser("homology", help="homology table of a space")
    h.add_argument("--space", required=True)
    h.add_argument("--max-degree", type=int)
    h.add_argument("--coeff", default="z", help="z, q or z/<m>")
    h.add_argument("--format", choices=["json", "csv", "text"], default="json")
    h.add_argument("--cohomology", action="store_true")
    h.add_argument("--unnormalized", action="store_true", help="use the unnormalized complex")
    common(h)
    h.set_defaults(func=cmd_homology)

    v = sub.add_parser("verify", help="run a property suite")
    v.add_argument("suite", choices=sorted(SUITES))
    v.add_argument("--format", choices=["json", "text"], default="json")
    v.add_argument("--max-degree", type=int)
    common(v, None, None)
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("enumerate", help="list trees or generators")
    e.add_argument("kind", choices=["trees", "generators"])
    e.add_argument("--space")
    e.add_argument("--vertices", type=int, help="exact vertex count (trees)")
    e.add_argument("--degree", type=int, help="single degree (generators)")
    e.add_argument("--mode", choices=["planar", "iso"], default="planar")
    e.add_argument("--nondegenerate", action="store_true")
    e.add_argument("--format", choices=["json", "csv", "text"], default="json")
    common(e)
    e.set_defaults(func=cmd_enumerate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"dendrohom: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BoundsError as exc:
        print(f"dendrohom: bounds: {exc}", file=sys.stderr)
        return EXIT_BOUNDS
    except ValueError as exc:
        # coefficient tags and other malformed arguments
        print(f"dendrohom: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
