"""Noncommutative Poisson algebras and algebras with bracket: identities, free objects,
representations, cohomology and the long exact sequences relating them."""

__version__ = "0.1.0"

from .algebra import BiAlgebra, Variety, classify  # noqa: E402
from .actions import Representation  # noqa: E402
from .exactlin import FieldSpec, Matrix  # noqa: E402

__all__ = ["BiAlgebra", "FieldSpec", "Matrix", "Representation", "Variety", "classify",
           "__version__"]
