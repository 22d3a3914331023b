"""Exact lattice computations: isometries, discriminant forms, gluing and
fixed-point sublattices of E8 and the Leech lattice."""

from .errors import FixLatError, ParseError
from .fqs import (FiniteQuadraticSpace, discriminant_form, extension_classes,
                  milgram_signature, overlattice_from_glue)
from .groups import (MatrixGroup, coinvariant_lattice, invariant_lattice, o2_subgroup,
                     pointwise_stabilizer)
from .isometry import automorphism_group, is_isometric
from .lattice import EmbeddedLattice, Lattice, orthogonal_complement, saturate
from .shortvec import minimum, short_vectors

__version__ = "0.1.0"

__all__ = [
    "FixLatError", "ParseError", "FiniteQuadraticSpace", "discriminant_form",
    "extension_classes", "milgram_signature", "overlattice_from_glue", "MatrixGroup",
    "coinvariant_lattice", "invariant_lattice", "o2_subgroup", "pointwise_stabilizer",
    "automorphism_group", "is_isometric", "EmbeddedLattice", "Lattice",
    "orthogonal_complement", "saturate", "minimum", "short_vectors",
]
