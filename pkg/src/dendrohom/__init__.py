"""Exact homology of finite dendroidal sets.

Trees and their face maps live in :mod:`dendrohom.trees`, planar-structure
signs in :mod:`dendrohom.signs`, the spaces themselves in
:mod:`dendrohom.dset`, chain complexes in :mod:`dendrohom.chain` and
homology plus the acyclicity engine in :mod:`dendrohom.homology`.
"""

from .chain import (
    ChainComplex,
    ChainComplexError,
    degenerate_subcomplex,
    normalized_complex,
    relative_complex,
    unnormalized_complex,
)
from .dset import (
    AInfinity,
    Boundary,
    Bounds,
    BoundsError,
    FaceUnion,
    GeneratorId,
    Horn,
    Representable,
    SimplicialImage,
    canonical_generator,
    hom_set,
    iso_classes,
)
from .homology import (
    ainfty_pairing,
    check_acyclicity,
    cohomology,
    degenerate_pairing,
    homology,
)
from .signs import face_sign, planar_labelling, planar_structure_sign, sign_coherence
from .snf import smith_normal_form
from .sset import FiniteSimplicialSet, standard_simplex
from .trees import Face, PlanarTree, apply_face, elementary_faces, enumerate_trees, parse_face, parse_tree

__version__ = "0.1.0"

__all__ = [
    "AInfinity",
    "Boundary",
    "Bounds",
    "BoundsError",
    "ChainComplex",
    "ChainComplexError",
    "Face",
    "FaceUnion",
    "FiniteSimplicialSet",
    "GeneratorId",
    "Horn",
    "PlanarTree",
    "Representable",
    "SimplicialImage",
    "ainfty_pairing",
    "apply_face",
    "canonical_generator",
    "check_acyclicity",
    "cohomology",
    "degenerate_pairing",
    "degenerate_subcomplex",
    "elementary_faces",
    "enumerate_trees",
    "face_sign",
    "hom_set",
    "homology",
    "iso_classes",
    "normalized_complex",
    "parse_face",
    "parse_tree",
    "planar_labelling",
    "planar_structure_sign",
    "relative_complex",
    "sign_coherence",
    "smith_normal_form",
    "standard_simplex",
    "unnormalized_complex",
]
